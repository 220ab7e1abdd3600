//! Exact density-matrix engine.

mod circuit;
mod gate;
mod sampling;
mod state;

pub use circuit::{Circuit, GateRole, Instruction};
pub use gate::{Gate, GateKind};
pub use sampling::{format_bits, parse_bits, sample_shots, ShotHistogram};
pub use state::{DensityMatrix, ProbabilityVector, MAX_QUBITS};

pub(crate) use state::check_qubits;

/// Noise-free execution: the final state of `circuit` from `|0…0⟩`.
pub fn run_pure(circuit: &Circuit) -> crate::Result<DensityMatrix> {
    let mut rho = DensityMatrix::zero_state(circuit.n_qubits())?;
    for ins in circuit.ops() {
        rho.apply_gate(&ins.gate)?;
    }
    Ok(rho)
}
