use super::gate::{Gate, GateKind};
use super::state::check_qubits;
use crate::error::{Error, Result};

/// Marks gates that belong to a beam-splitter layer so noisy execution can
/// treat them as ideal on request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GateRole {
    #[default]
    Standard,
    BeamSplitter,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    pub gate: Gate,
    pub role: GateRole,
}

/// Ordered gate list on a fixed register, followed by a Z-basis measurement
/// of `measured` (outcome bit `t` = `measured[t]`).
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Instruction>,
    measured: Vec<usize>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if !(1..=super::MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::Capacity(n_qubits));
        }
        Ok(Self {
            n_qubits,
            ops: Vec::new(),
            measured: Vec::new(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Instruction] {
        &self.ops
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        self.push_with_role(gate, GateRole::Standard)
    }

    pub fn push_with_role(&mut self, gate: Gate, role: GateRole) -> Result<&mut Self> {
        check_qubits(gate.targets(), self.n_qubits)?;
        self.ops.push(Instruction { gate, role });
        Ok(self)
    }

    /// Convenience for builders: appends `kind` on `targets`.
    pub fn add(&mut self, kind: GateKind, targets: &[usize]) -> Result<&mut Self> {
        self.push(Gate::new(kind, targets)?)
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<&mut Self> {
        for ins in &other.ops {
            self.push_with_role(ins.gate.clone(), ins.role)?;
        }
        Ok(self)
    }

    pub fn measure(&mut self, qubits: &[usize]) -> Result<&mut Self> {
        check_qubits(qubits, self.n_qubits)?;
        self.measured = qubits.to_vec();
        Ok(self)
    }

    pub fn measure_all(&mut self) -> Result<&mut Self> {
        let all: Vec<usize> = (0..self.n_qubits).collect();
        self.measure(&all)
    }

    pub fn gate_count(&self) -> usize {
        self.ops.len()
    }

    /// Same gates with every target shifted by `offset`, on a register of
    /// `n_qubits` qubits. Measurements are dropped.
    pub fn relocated(&self, n_qubits: usize, offset: usize) -> Result<Circuit> {
        let mut out = Circuit::new(n_qubits)?;
        for ins in &self.ops {
            let targets: Vec<usize> = ins.gate.targets().iter().map(|t| t + offset).collect();
            out.push_with_role(Gate::new(ins.gate.kind(), &targets)?, ins.role)?;
        }
        Ok(out)
    }
}
