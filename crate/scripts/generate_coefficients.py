#!/usr/bin/env python3
"""Regenerate the bundled reduced two-qubit H2 Hamiltonian coefficients.

Runs RHF/STO-3G with PySCF at each bond length, builds the four spin-orbital
Fock-space Hamiltonian (Jordan-Wigner, spin orbitals ordered
sigma_g alpha, sigma_g beta, sigma_u alpha, sigma_u beta), and projects it onto
the four Fock states that survive the two-qubit reduction:

    |00> <- sigma_g^2 (Hartree-Fock reference)
    |11> <- sigma_u^2
    |01> <- vacuum
    |10> <- fully occupied

The 4x4 block is expanded in the Pauli basis
(I, Z1, Z2, Z1Z2, Y1Y2, X1X2), qubit 1 = least-significant bit. g0 includes
the nuclear repulsion energy.

    python3 scripts/generate_coefficients.py > crates/core/data/h2_sto3g.csv
"""

import itertools

import numpy as np
from pyscf import ao2mo, gto, scf

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)
LOWER = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|, occupied = 1


def kron_all(ops):
    out = np.array([[1.0 + 0j]])
    for op in ops:
        out = np.kron(op, out)  # later spin orbitals are more significant
    return out


def annihilator(p, n):
    return kron_all([Z] * p + [LOWER] + [I2] * (n - p - 1))


def fock_hamiltonian(r):
    mol = gto.M(atom=f"H 0 0 0; H 0 0 {r}", basis="sto-3g", unit="Angstrom", verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    c = mf.mo_coeff
    h1 = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), 2)  # chemist notation (pq|rs)
    n = 4
    a = [annihilator(p, n) for p in range(n)]
    ad = [m.conj().T for m in a]
    spatial = [p // 2 for p in range(n)]
    spin = [p % 2 for p in range(n)]
    h = np.zeros((16, 16), dtype=complex) + mol.energy_nuc() * np.eye(16)
    for p, q in itertools.product(range(n), repeat=2):
        if spin[p] == spin[q]:
            h += h1[spatial[p], spatial[q]] * ad[p] @ a[q]
    for p, q, rr, s in itertools.product(range(n), repeat=4):
        if spin[p] == spin[s] and spin[q] == spin[rr]:
            v = eri[spatial[p], spatial[s], spatial[q], spatial[rr]]
            if abs(v) > 0:
                h += 0.5 * v * ad[p] @ ad[q] @ a[rr] @ a[s]
    return h


def reduced(h):
    # Fock index bit p = occupation of spin orbital p.
    states = {0b00: 0b0011, 0b11: 0b1100, 0b01: 0b0000, 0b10: 0b1111}
    m = np.zeros((4, 4), dtype=complex)
    for i, fi in states.items():
        for j, fj in states.items():
            m[i, j] = h[fi, fj]
    paulis = [
        np.eye(4),
        np.kron(I2, Z),
        np.kron(Z, I2),
        np.kron(Z, Z),
        np.kron(Y, Y),
        np.kron(X, X),
    ]
    g = [np.trace(p @ m).real / 4 for p in paulis]
    rebuilt = sum(gi * p for gi, p in zip(g, paulis))
    assert np.allclose(rebuilt, m, atol=1e-10), "reduced block is not in the six-term span"
    return g


def main():
    print("# Reduced two-qubit H2 Hamiltonian, STO-3G, RHF orbitals (Hartree).")
    print("# H = g0 + g1 Z1 + g2 Z2 + g3 Z1Z2 + g4 Y1Y2 + g5 X1X2; g0 includes nuclear repulsion.")
    print("# Generated by scripts/generate_coefficients.py")
    print("r_angstrom,g0,g1,g2,g3,g4,g5")
    for k in range(78):
        r = round(0.10 + 0.05 * k, 2)
        g = reduced(fock_hamiltonian(r))
        print(f"{r:.2f}," + ",".join(f"{x:.12f}" for x in g))


if __name__ == "__main__":
    main()
