//! Builders for the bare two-qubit ansatz, the [[4,2,2]]-encoded ansatz with
//! flag and rotation ancillas, the four-qubit duplicate circuit, and readout
//! calibration circuits.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::densesim::{Circuit, Gate, GateKind, GateRole};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasurementBasis {
    /// No rotation: serves Z₁, Z₂ and Z₁Z₂.
    ZZ,
    /// Hadamard on both qubits.
    XX,
    /// Sdg then H on both qubits.
    YY,
}

impl MeasurementBasis {
    pub const ALL: [MeasurementBasis; 3] = [Self::ZZ, Self::XX, Self::YY];

    pub fn label(self) -> &'static str {
        match self {
            Self::ZZ => "ZZ",
            Self::XX => "XX",
            Self::YY => "YY",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnsatzParams {
    pub theta: f64,
}

impl AnsatzParams {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::Parameter(format!("non-finite angle {theta}")));
        }
        Ok(Self { theta })
    }
}

/// Physical layout of the [[4,2,2]] circuit: data qubits 0..4 hold b₁..b₄,
/// qubit 4 is the preparation flag a₁ and qubit 5 the rotation ancilla a₂.
/// Outcome strings therefore read `a₂ a₁ b₄ b₃ b₂ b₁`.
pub const DATA_QUBITS: [usize; 4] = [0, 1, 2, 3];
pub const FLAG_QUBIT: usize = 4;
pub const ROTATION_ANCILLA: usize = 5;
pub const ENCODED_WIDTH: usize = 6;

/// Stabilizers and logical operators of the [[4,2,2]] code on four data
/// qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeSpec {
    pub stabilizers: [PauliString; 2],
    pub logical_x: [PauliString; 2],
    pub logical_z: [PauliString; 2],
}

impl Default for CodeSpec {
    fn default() -> Self {
        let w = |s: &str| s.parse::<PauliString>().expect("valid word");
        Self {
            stabilizers: [w("ZZZZ"), w("XXXX")],
            // X_L1 = X₂X₁, X_L2 = X₃X₁, Z_L1 = Z₃Z₁, Z_L2 = Z₂Z₁
            logical_x: [w("IIXX"), w("IXIX")],
            logical_z: [w("IZIZ"), w("IIZZ")],
        }
    }
}

impl CodeSpec {
    pub const N_DATA: usize = 4;

    /// `Y_L = i·X_L·Z_L` for logical qubit `k`.
    pub fn logical_y(&self, k: usize) -> Result<(Complex64, PauliString)> {
        let (ph, word) = self.logical_x[k].mul(&self.logical_z[k])?;
        Ok((ph * Complex64::new(0.0, 1.0), word))
    }

    /// Physical word of a two-qubit logical Pauli `P_L1 ⊗ Q_L2`, with its
    /// phase.
    pub fn logical_word(&self, first: Pauli, second: Pauli) -> Result<(Complex64, PauliString)> {
        let single = |k: usize, p: Pauli| -> Result<(Complex64, PauliString)> {
            match p {
                Pauli::I => Ok((
                    Complex64::new(1.0, 0.0),
                    PauliString::identity(Self::N_DATA),
                )),
                Pauli::X => Ok((Complex64::new(1.0, 0.0), self.logical_x[k].clone())),
                Pauli::Z => Ok((Complex64::new(1.0, 0.0), self.logical_z[k].clone())),
                Pauli::Y => self.logical_y(k),
            }
        };
        let (pa, a) = single(0, first)?;
        let (pb, b) = single(1, second)?;
        let (pc, c) = a.mul(&b)?;
        Ok((pa * pb * pc, c))
    }

    /// Codeword amplitudes of logical basis state `z1 + 2·z2`.
    pub fn codeword(&self, logical: usize) -> Vec<Complex64> {
        // |00>_L = (|0000>+|1111>)/√2, |01>_L = (|0011>+|1100>)/√2,
        // |10>_L = (|0101>+|1010>)/√2, |11>_L = (|0110>+|1001>)/√2
        let support = match logical {
            0 => [0b0000, 0b1111],
            1 => [0b0011, 0b1100],
            2 => [0b0101, 0b1010],
            3 => [0b0110, 0b1001],
            _ => panic!("logical index {logical} out of range"),
        };
        let mut amp = vec![Complex64::new(0.0, 0.0); 16];
        for s in support {
            amp[s] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        }
        amp
    }
}

/// Pairing of the duplicate circuit: subsystem A on qubits `0..M`,
/// subsystem B on `M..2M`, qubit `i` of A paired with qubit `i` of B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DuplicateLayout {
    pub n_subsystems: usize,
    pub qubits_per_subsystem: usize,
}

impl Default for DuplicateLayout {
    fn default() -> Self {
        Self {
            n_subsystems: 2,
            qubits_per_subsystem: 2,
        }
    }
}

impl DuplicateLayout {
    pub fn total_qubits(&self) -> usize {
        self.n_subsystems * self.qubits_per_subsystem
    }

    /// `(qubit in A, qubit in B)` for each position.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let m = self.qubits_per_subsystem;
        (0..m).map(|i| (i, i + m)).collect()
    }
}

/// How the beam-splitter gate is emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BGateForm {
    /// One two-qubit gate with the exact matrix.
    #[default]
    Exact,
    /// Clifford frame change, two CNOTs and two Rz(±π/4).
    Decomposed,
}

/// Readout of the duplicate circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DuplicateReadout {
    /// Basis rotation only; each qubit carries its own Pauli.
    #[default]
    Direct,
    /// Basis rotation then CNOT(q₁→q₂) in each copy, folding the two-qubit
    /// parity onto qubit 2 so the single-qubit distilled estimator applies.
    ParityFolded,
}

fn basis_change_in(c: &mut Circuit, qubit: usize, p: Pauli) -> Result<()> {
    match p {
        Pauli::X => {
            c.add(GateKind::H, &[qubit])?;
        }
        Pauli::Y => {
            c.add(GateKind::Sdg, &[qubit])?.add(GateKind::H, &[qubit])?;
        }
        Pauli::I | Pauli::Z => {}
    }
    Ok(())
}

fn basis_change_out(c: &mut Circuit, qubit: usize, p: Pauli) -> Result<()> {
    match p {
        Pauli::X => {
            c.add(GateKind::H, &[qubit])?;
        }
        Pauli::Y => {
            c.add(GateKind::H, &[qubit])?.add(GateKind::S, &[qubit])?;
        }
        Pauli::I | Pauli::Z => {}
    }
    Ok(())
}

/// Appends `exp(−i·angle·P)` to `c`: basis change, CNOT ladder onto the
/// parity qubit, `Rz(2·angle)`, and the mirror image. With `ancilla` set, the
/// parity is accumulated on that qubit, which must start and ends in `|0⟩`.
pub fn append_pauli_exponential(
    c: &mut Circuit,
    p: &PauliString,
    angle: f64,
    ancilla: Option<usize>,
) -> Result<()> {
    if p.len() != c.n_qubits() {
        return Err(Error::Arity {
            expected: c.n_qubits(),
            got: p.len(),
        });
    }
    if p.is_identity() {
        return Err(Error::Parameter(
            "exponential of the identity string is a global phase".into(),
        ));
    }
    if !angle.is_finite() {
        return Err(Error::Parameter(format!("non-finite angle {angle}")));
    }
    let support = p.support();
    let (controls, target): (&[usize], usize) = match ancilla {
        Some(a) => {
            if support.contains(&a) || a >= c.n_qubits() {
                return Err(Error::Parameter(format!(
                    "ancilla {a} overlaps the string support or the register"
                )));
            }
            (&support[..], a)
        }
        None => (&support[..support.len() - 1], support[support.len() - 1]),
    };
    for &q in &support {
        basis_change_in(c, q, p.get(q))?;
    }
    for &q in controls {
        c.add(GateKind::Cnot, &[q, target])?;
    }
    c.add(GateKind::Rz(2.0 * angle), &[target])?;
    for &q in controls.iter().rev() {
        c.add(GateKind::Cnot, &[q, target])?;
    }
    for &q in &support {
        basis_change_out(c, q, p.get(q))?;
    }
    Ok(())
}

/// Circuit fragment for `exp(−i·angle·P)` on `P.len()` qubits.
pub fn pauli_exponential(p: &PauliString, angle: f64) -> Result<Circuit> {
    let mut c = Circuit::new(p.len())?;
    append_pauli_exponential(&mut c, p, angle, None)?;
    Ok(c)
}

/// The UCC generator `Y₁X₂`.
pub fn ucc_generator() -> PauliString {
    PauliString::from_factors(2, &[(0, Pauli::Y), (1, Pauli::X)]).expect("two-qubit word")
}

fn append_basis_rotation(c: &mut Circuit, qubits: &[usize], basis: MeasurementBasis) -> Result<()> {
    for &q in qubits {
        match basis {
            MeasurementBasis::ZZ => {}
            MeasurementBasis::XX => {
                c.add(GateKind::H, &[q])?;
            }
            MeasurementBasis::YY => {
                c.add(GateKind::Sdg, &[q])?.add(GateKind::H, &[q])?;
            }
        }
    }
    Ok(())
}

/// State preparation `e^{−iθY₁X₂}|00⟩` without measurement.
/// `exp(-iθ Y₁X₂)|00⟩ = cosθ|00⟩ + sinθ|11⟩`, prepared with one rotation and
/// one CNOT.
fn bare_preparation(p: AnsatzParams) -> Result<Circuit> {
    let mut c = Circuit::new(2)?;
    c.add(GateKind::Ry(2.0 * p.theta), &[0])?
        .add(GateKind::Cnot, &[0, 1])?;
    Ok(c)
}

pub fn bare_ansatz(p: AnsatzParams, basis: MeasurementBasis) -> Result<Circuit> {
    let mut c = bare_preparation(p)?;
    append_basis_rotation(&mut c, &[0, 1], basis)?;
    c.measure(&[0, 1])?;
    Ok(c)
}

/// A single-qubit Pauli inserted after logical state preparation, for
/// fault-injection studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InjectedFault {
    pub qubit: usize,
    pub pauli: Pauli,
    pub site: FaultSite,
}

/// Where an injected fault sits in the encoded circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultSite {
    /// Right after `|00⟩_L` and its flag check.
    AfterEncoding,
    /// After the logical UCC rotation, before the basis change.
    AfterAnsatz,
}

pub fn encoded_ansatz(p: AnsatzParams, basis: MeasurementBasis) -> Result<Circuit> {
    encoded_ansatz_with_fault(p, basis, None)
}

pub fn encoded_ansatz_with_fault(
    p: AnsatzParams,
    basis: MeasurementBasis,
    fault: Option<InjectedFault>,
) -> Result<Circuit> {
    let code = CodeSpec::default();
    let mut c = Circuit::new(ENCODED_WIDTH)?;
    let [b1, b2, b3, b4] = DATA_QUBITS;
    // |00>_L = (|0000> + |1111>)/√2, flag a₁ ← b₁ ⊕ b₄
    c.add(GateKind::H, &[b1])?
        .add(GateKind::Cnot, &[b1, b2])?
        .add(GateKind::Cnot, &[b2, b3])?
        .add(GateKind::Cnot, &[b3, b4])?
        .add(GateKind::Cnot, &[b1, FLAG_QUBIT])?
        .add(GateKind::Cnot, &[b4, FLAG_QUBIT])?;

    if let Some(f) = fault {
        if !DATA_QUBITS.contains(&f.qubit) {
            return Err(Error::Parameter(format!(
                "fault qubit {} is not a data qubit",
                f.qubit
            )));
        }
    }
    let inject = |c: &mut Circuit, site: FaultSite| -> Result<()> {
        match fault {
            Some(f) if f.site == site => append_pauli(c, f.qubit, f.pauli),
            _ => Ok(()),
        }
    };
    inject(&mut c, FaultSite::AfterEncoding)?;

    // logical exp(−iθ Y_L1 X_L2) through its physical word, parity on a₂
    let (phase, word) = code.logical_word(Pauli::Y, Pauli::X)?;
    let angle = real_phase(phase)? * p.theta;
    append_pauli_exponential(
        &mut c,
        &widen(&word, ENCODED_WIDTH)?,
        angle,
        Some(ROTATION_ANCILLA),
    )?;

    inject(&mut c, FaultSite::AfterAnsatz)?;

    match basis {
        MeasurementBasis::ZZ => {}
        // H⊗4 realizes logical H⊗H followed by a logical swap
        MeasurementBasis::XX => {
            for q in DATA_QUBITS {
                c.add(GateKind::H, &[q])?;
            }
        }
        // transversal Y measurement: the check becomes Y⊗4 and the decoded
        // parity z1⊕z2 reads Y₂Y₃ = Y_L1·Y_L2
        MeasurementBasis::YY => {
            for q in DATA_QUBITS {
                c.add(GateKind::Sdg, &[q])?.add(GateKind::H, &[q])?;
            }
        }
    }
    c.measure(&[b1, b2, b3, b4, FLAG_QUBIT, ROTATION_ANCILLA])?;
    Ok(c)
}

fn append_pauli(c: &mut Circuit, qubit: usize, p: Pauli) -> Result<()> {
    let kind = match p {
        Pauli::I => return Ok(()),
        Pauli::X => GateKind::X,
        Pauli::Y => GateKind::Y,
        Pauli::Z => GateKind::Z,
    };
    c.add(kind, &[qubit])?;
    Ok(())
}

fn real_phase(phase: Complex64) -> Result<f64> {
    if phase.im.abs() > 1e-12 || (phase.re.abs() - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter(format!(
            "logical word has non-real phase {phase}"
        )));
    }
    Ok(phase.re)
}

fn widen(word: &PauliString, n_qubits: usize) -> Result<PauliString> {
    let factors: Vec<(usize, Pauli)> = word.factors().iter().copied().enumerate().collect();
    PauliString::from_factors(n_qubits, &factors)
}

/// Options for the duplicate circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DuplicateOptions {
    pub readout: DuplicateReadout,
    pub b_form: BGateForm,
}

pub fn duplicate_ansatz(p: AnsatzParams, basis: MeasurementBasis) -> Result<Circuit> {
    duplicate_circuit(p, basis, DuplicateOptions::default())
}

pub fn duplicate_circuit(
    p: AnsatzParams,
    basis: MeasurementBasis,
    opts: DuplicateOptions,
) -> Result<Circuit> {
    let layout = DuplicateLayout::default();
    let m = layout.qubits_per_subsystem;
    let mut copy = bare_preparation(p)?;
    append_basis_rotation(&mut copy, &[0, 1], basis)?;
    if opts.readout == DuplicateReadout::ParityFolded {
        copy.add(GateKind::Cnot, &[0, 1])?;
    }
    let mut c = Circuit::new(layout.total_qubits())?;
    for k in 0..layout.n_subsystems {
        c.extend(&copy.relocated(layout.total_qubits(), k * m)?)?;
    }
    for (a, b) in layout.pairs() {
        append_b_gate(&mut c, a, b, opts.b_form)?;
    }
    c.measure_all()?;
    Ok(c)
}

/// Emits the beam-splitter gate on `(a, b)`; `a` is the low local bit.
pub fn append_b_gate(c: &mut Circuit, a: usize, b: usize, form: BGateForm) -> Result<()> {
    let role = GateRole::BeamSplitter;
    let push = |c: &mut Circuit, kind: GateKind, t: &[usize]| -> Result<()> {
        c.push_with_role(Gate::new(kind, t)?, role)?;
        Ok(())
    };
    match form {
        BGateForm::Exact => push(c, GateKind::B, &[a, b]),
        BGateForm::Decomposed => {
            use GateKind::*;
            let frame: [(GateKind, usize); 5] = [(H, a), (S, a), (H, b), (S, b), (H, b)];
            let unframe: [(GateKind, usize); 5] = [(Sdg, a), (H, a), (H, b), (Sdg, b), (H, b)];
            for (k, q) in frame {
                push(c, k, &[q])?;
            }
            push(c, Cnot, &[a, b])?;
            push(c, H, &[a])?;
            push(c, Rz(-FRAC_PI_4), &[a])?;
            push(c, Rz(FRAC_PI_4), &[b])?;
            push(c, H, &[a])?;
            push(c, Cnot, &[a, b])?;
            for (k, q) in unframe {
                push(c, k, &[q])?;
            }
            Ok(())
        }
    }
}

/// `2^n` circuits; circuit `k` flips every qubit whose bit is set in `k`.
pub fn calibration_circuits(n: usize) -> Result<Vec<Circuit>> {
    if !(1..=crate::densesim::MAX_QUBITS).contains(&n) {
        return Err(Error::Capacity(n));
    }
    (0..1usize << n)
        .map(|k| {
            let mut c = Circuit::new(n)?;
            for q in (0..n).filter(|q| (k >> q) & 1 == 1) {
                c.add(GateKind::X, &[q])?;
            }
            c.measure_all()?;
            Ok(c)
        })
        .collect()
}
