use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gate::Gate;
use crate::error::{Error, Result};
use crate::pauli::PauliString;

pub const MAX_QUBITS: usize = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense `2^n × 2^n` density matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Vec<Complex64>,
}

fn check_capacity(n_qubits: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n_qubits) {
        Ok(())
    } else {
        Err(Error::Capacity(n_qubits))
    }
}

pub(crate) fn check_qubits(qubits: &[usize], n_qubits: usize) -> Result<()> {
    for (k, &q) in qubits.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        if qubits[..k].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// Enumerates the full-register indices that share `base`'s non-target bits,
/// in local-index order.
fn local_indices(base: usize, targets: &[usize], out: &mut [usize]) {
    for (local, slot) in out.iter_mut().enumerate() {
        let mut idx = base;
        for (k, &t) in targets.iter().enumerate() {
            if (local >> k) & 1 == 1 {
                idx |= 1 << t;
            }
        }
        *slot = idx;
    }
}

impl DensityMatrix {
    /// `|0…0⟩⟨0…0|` on `n_qubits` qubits.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        check_capacity(n_qubits)?;
        let dim = 1 << n_qubits;
        let mut data = vec![ZERO; dim * dim];
        data[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, data })
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_capacity(n_qubits)?;
        let dim = 1 << n_qubits;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self { n_qubits, data })
    }

    /// `|ψ⟩⟨ψ|` for a normalized amplitude vector.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let dim = amplitudes.len();
        if !dim.is_power_of_two() {
            return Err(Error::Parameter(format!(
                "amplitude vector length {dim} is not a power of two"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_capacity(n_qubits)?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::Normalization(norm));
        }
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                data[i * dim + j] = amplitudes[i] * amplitudes[j].conj();
            }
        }
        Ok(Self { n_qubits, data })
    }

    /// Wraps a raw row-major matrix, checking trace, hermiticity and
    /// positivity.
    pub fn from_matrix(n_qubits: usize, data: Vec<Complex64>) -> Result<Self> {
        check_capacity(n_qubits)?;
        let dim = 1 << n_qubits;
        if data.len() != dim * dim {
            return Err(Error::Arity {
                expected: dim * dim,
                got: data.len(),
            });
        }
        let rho = Self { n_qubits, data };
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::Parameter(format!("trace {tr} is not 1")));
        }
        if !rho.is_hermitian(1e-10) {
            return Err(Error::Parameter("matrix is not Hermitian".into()));
        }
        let min_eig = rho.min_eigenvalue();
        if min_eig < -1e-10 {
            return Err(Error::Parameter(format!(
                "matrix has negative eigenvalue {min_eig}"
            )));
        }
        Ok(rho)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i]).sum()
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let dim = self.dim();
        (0..dim).all(|i| (i..dim).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol))
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        let dim = self.dim();
        DMatrix::from_row_slice(dim, dim, &self.data)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .to_dmatrix()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// `self ⊗ other` with `self` on the low qubits.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        let n_qubits = self.n_qubits + other.n_qubits;
        check_capacity(n_qubits)?;
        let (da, db) = (self.dim(), other.dim());
        let dim = da * db;
        let mut data = vec![ZERO; dim * dim];
        for ib in 0..db {
            for jb in 0..db {
                let b = other.get(ib, jb);
                if b == ZERO {
                    continue;
                }
                for ia in 0..da {
                    for ja in 0..da {
                        data[(ib * da + ia) * dim + jb * da + ja] = self.get(ia, ja) * b;
                    }
                }
            }
        }
        Ok(Self { n_qubits, data })
    }

    /// `p·A + (1 − p)·B`.
    pub fn mix(a: &DensityMatrix, b: &DensityMatrix, p: f64) -> Result<Self> {
        if a.n_qubits != b.n_qubits {
            return Err(Error::Arity {
                expected: a.n_qubits,
                got: b.n_qubits,
            });
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter(format!(
                "mixing weight {p} outside [0, 1]"
            )));
        }
        let data = a
            .data
            .iter()
            .zip(&b.data)
            .map(|(x, y)| x * p + y * (1.0 - p))
            .collect();
        Ok(Self {
            n_qubits: a.n_qubits,
            data,
        })
    }

    /// `ρ ← UρU†` with `U` lifted from the gate's targets.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        check_qubits(gate.targets(), self.n_qubits)?;
        let u = gate.matrix();
        self.apply_local_unitary(&u, gate.targets());
        Ok(())
    }

    /// Non-mutating form of [`apply_gate`](Self::apply_gate).
    pub fn apply_unitary(&self, gate: &Gate) -> Result<Self> {
        let mut out = self.clone();
        out.apply_gate(gate)?;
        Ok(out)
    }

    pub(crate) fn apply_local_unitary(&mut self, u: &[Complex64], targets: &[usize]) {
        let dim = self.dim();
        let k = 1usize << targets.len();
        let mask: usize = targets.iter().fold(0, |m, &t| m | (1 << t));
        let mut idx = [0usize; 4];
        let mut v = [ZERO; 4];
        for base in (0..dim).filter(|i| i & mask == 0) {
            local_indices(base, targets, &mut idx[..k]);
            // rows: ρ ← Uρ
            for col in 0..dim {
                for l in 0..k {
                    v[l] = self.data[idx[l] * dim + col];
                }
                for l in 0..k {
                    let mut acc = ZERO;
                    for m in 0..k {
                        acc += u[l * k + m] * v[m];
                    }
                    self.data[idx[l] * dim + col] = acc;
                }
            }
            // columns: ρ ← ρU†
            for row in 0..dim {
                let r = row * dim;
                for l in 0..k {
                    v[l] = self.data[r + idx[l]];
                }
                for l in 0..k {
                    let mut acc = ZERO;
                    for m in 0..k {
                        acc += v[m] * u[l * k + m].conj();
                    }
                    self.data[r + idx[l]] = acc;
                }
            }
        }
    }

    /// Replaces the reduced state of `targets` by `I/2^k` with weight `p`.
    #[allow(clippy::needless_range_loop)]
    pub(crate) fn depolarize_in_place(&mut self, targets: &[usize], p: f64) {
        if p == 0.0 {
            return;
        }
        let dim = self.dim();
        let k = 1usize << targets.len();
        let mask: usize = targets.iter().fold(0, |m, &t| m | (1 << t));
        let mut ri = [0usize; 4];
        let mut ci = [0usize; 4];
        let keep = 1.0 - p;
        let share = p / k as f64;
        for rbase in (0..dim).filter(|i| i & mask == 0) {
            local_indices(rbase, targets, &mut ri[..k]);
            for cbase in (0..dim).filter(|i| i & mask == 0) {
                local_indices(cbase, targets, &mut ci[..k]);
                let traced: Complex64 = (0..k).map(|l| self.data[ri[l] * dim + ci[l]]).sum();
                for l in 0..k {
                    for m in 0..k {
                        let slot = &mut self.data[ri[l] * dim + ci[m]];
                        *slot *= keep;
                        if l == m {
                            *slot += traced * share;
                        }
                    }
                }
            }
        }
    }

    /// Measurement distribution over `qubits`; output bit `t` is `qubits[t]`.
    pub fn probabilities(&self, qubits: &[usize]) -> Result<ProbabilityVector> {
        check_qubits(qubits, self.n_qubits)?;
        let dim = self.dim();
        let mut probs = vec![0.0; 1 << qubits.len()];
        for i in 0..dim {
            let mut b = 0;
            for (t, &q) in qubits.iter().enumerate() {
                b |= ((i >> q) & 1) << t;
            }
            probs[b] += self.data[i * dim + i].re;
        }
        // clip round-off so downstream sampling never sees -1e-17
        for p in &mut probs {
            if *p < 0.0 && *p > -1e-12 {
                *p = 0.0;
            }
        }
        Ok(ProbabilityVector {
            n_bits: qubits.len(),
            probs,
        })
    }

    /// `Tr(Pρ)`.
    pub fn expectation(&self, pauli: &PauliString) -> Result<f64> {
        if pauli.len() != self.n_qubits {
            return Err(Error::Arity {
                expected: self.n_qubits,
                got: pauli.len(),
            });
        }
        let dim = self.dim();
        let mut acc = ZERO;
        for j in 0..dim {
            let (i, phase) = pauli.act_on_basis(j);
            // P|j⟩ = phase·|i⟩ contributes P_ij·ρ_ji
            acc += phase * self.data[j * dim + i];
        }
        Ok(acc.re)
    }
}

/// Distribution over the `2^m` outcomes of `m` measured bits. Outcome index
/// bit `t` is the `t`-th measured qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    n_bits: usize,
    probs: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let len = probs.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Parameter(format!(
                "distribution length {len} is not a power of two"
            )));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= -1e-12)) {
            return Err(Error::Parameter(
                "negative or non-finite probability".into(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-8 {
            return Err(Error::Normalization(sum));
        }
        Ok(Self {
            n_bits: len.trailing_zeros() as usize,
            probs,
        })
    }

    pub(crate) fn from_raw(n_bits: usize, probs: Vec<f64>) -> Self {
        debug_assert_eq!(probs.len(), 1 << n_bits);
        Self { n_bits, probs }
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}
