//! Depolarizing and readout noise, and noisy circuit execution.
//!
//! Every gate is followed by a depolarizing channel on exactly its own
//! targets (`p1` after one-qubit gates, `p2` after two-qubit gates, the latter
//! mixing toward `I/4` on the pair). Idle qubits are noiseless. Readout
//! confusion acts on the exact measurement distribution.

use crate::densesim::{
    check_qubits, sample_shots, Circuit, DensityMatrix, GateRole, ProbabilityVector, ShotHistogram,
};
use crate::error::{Error, Result};

/// Classical bit-flip probabilities at measurement.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReadoutError {
    /// Pr(read 1 | prepared 0)
    pub p01: f64,
    /// Pr(read 0 | prepared 1)
    pub p10: f64,
}

impl ReadoutError {
    pub fn symmetric(p: f64) -> Self {
        Self { p01: p, p10: p }
    }

    fn validate(&self) -> Result<()> {
        check_probability("readout p01", self.p01)?;
        check_probability("readout p10", self.p10)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    /// Applied to every measured qubit without an override.
    pub readout: ReadoutError,
    pub readout_overrides: Vec<(usize, ReadoutError)>,
    /// Skip depolarization after beam-splitter gates.
    pub ideal_beam_splitters: bool,
}

fn check_probability(what: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{what} = {p} outside [0, 1]")))
    }
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn depolarizing(p1: f64, p2: f64) -> Self {
        Self {
            p1,
            p2,
            ..Self::default()
        }
    }

    pub fn readout_only(err: ReadoutError) -> Self {
        Self {
            readout: err,
            ..Self::default()
        }
    }

    pub fn with_readout(mut self, err: ReadoutError) -> Self {
        self.readout = err;
        self
    }

    pub fn with_ideal_beam_splitters(mut self, ideal: bool) -> Self {
        self.ideal_beam_splitters = ideal;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("p1", self.p1)?;
        check_probability("p2", self.p2)?;
        self.readout.validate()?;
        for (_, e) in &self.readout_overrides {
            e.validate()?;
        }
        Ok(())
    }

    pub fn readout_for(&self, qubit: usize) -> ReadoutError {
        self.readout_overrides
            .iter()
            .rev()
            .find(|(q, _)| *q == qubit)
            .map(|(_, e)| *e)
            .unwrap_or(self.readout)
    }

    fn has_readout_error(&self, measured: &[usize]) -> bool {
        measured.iter().any(|&q| {
            let e = self.readout_for(q);
            e.p01 > 0.0 || e.p10 > 0.0
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecutionMode {
    Exact,
    Shots { shots: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Exact(ProbabilityVector),
    Shots(ShotHistogram),
}

impl Outcome {
    /// Outcome frequencies; exact probabilities pass through unchanged.
    pub fn frequencies(&self) -> Vec<f64> {
        match self {
            Outcome::Exact(p) => p.probs().to_vec(),
            Outcome::Shots(h) => h.frequencies(),
        }
    }
}

/// `E(ρ) = p·(I/2^k ⊗ Tr_targets ρ) + (1 − p)·ρ` on one or two target qubits.
pub fn depolarize(rho: &DensityMatrix, targets: &[usize], p: f64) -> Result<DensityMatrix> {
    check_probability("depolarizing rate", p)?;
    if targets.is_empty() || targets.len() > 2 {
        return Err(Error::Parameter(format!(
            "depolarizing channel acts on 1 or 2 qubits, got {}",
            targets.len()
        )));
    }
    check_qubits(targets, rho.n_qubits())?;
    let mut out = rho.clone();
    out.depolarize_in_place(targets, p);
    Ok(out)
}

/// Applies the tensor-product confusion matrix of the measured qubits to an
/// exact distribution. `measured[t]` names the physical qubit behind bit `t`.
pub fn apply_readout_error(
    p: &ProbabilityVector,
    model: &NoiseModel,
    measured: &[usize],
) -> Result<ProbabilityVector> {
    if measured.len() != p.n_bits() {
        return Err(Error::Arity {
            expected: p.n_bits(),
            got: measured.len(),
        });
    }
    let mut probs = p.probs().to_vec();
    for (bit, &q) in measured.iter().enumerate() {
        let e = model.readout_for(q);
        e.validate()?;
        if e.p01 == 0.0 && e.p10 == 0.0 {
            continue;
        }
        let mask = 1 << bit;
        for i in (0..probs.len()).filter(|i| i & mask == 0) {
            let (p0, p1) = (probs[i], probs[i | mask]);
            probs[i] = (1.0 - e.p01) * p0 + e.p10 * p1;
            probs[i | mask] = e.p01 * p0 + (1.0 - e.p10) * p1;
        }
    }
    Ok(ProbabilityVector::from_raw(p.n_bits(), probs))
}

/// Final noisy state of `circuit` before measurement.
pub fn evolve(circuit: &Circuit, model: &NoiseModel) -> Result<DensityMatrix> {
    model.validate()?;
    let mut rho = DensityMatrix::zero_state(circuit.n_qubits())?;
    for ins in circuit.ops() {
        rho.apply_gate(&ins.gate)?;
        if model.ideal_beam_splitters && ins.role == GateRole::BeamSplitter {
            continue;
        }
        let p = match ins.gate.targets().len() {
            1 => model.p1,
            _ => model.p2,
        };
        rho.depolarize_in_place(ins.gate.targets(), p);
    }
    Ok(rho)
}

/// Exact measured distribution of `circuit` under `model`, readout included.
pub fn noisy_distribution(circuit: &Circuit, model: &NoiseModel) -> Result<ProbabilityVector> {
    if circuit.measured().is_empty() {
        return Err(Error::Parameter("circuit measures no qubits".into()));
    }
    let rho = evolve(circuit, model)?;
    let p = rho.probabilities(circuit.measured())?;
    if model.has_readout_error(circuit.measured()) {
        apply_readout_error(&p, model, circuit.measured())
    } else {
        Ok(p)
    }
}

pub fn execute(circuit: &Circuit, model: &NoiseModel, mode: ExecutionMode) -> Result<Outcome> {
    let p = noisy_distribution(circuit, model)?;
    match mode {
        ExecutionMode::Exact => Ok(Outcome::Exact(p)),
        ExecutionMode::Shots { shots, seed } => Ok(Outcome::Shots(sample_shots(&p, shots, seed)?)),
    }
}
