use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    Rz(f64),
    Ry(f64),
    Cnot,
    Swap,
    /// Beam-splitter gate diagonalizing the pairwise SWAP.
    B,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Swap | GateKind::B => 2,
            _ => 1,
        }
    }

    /// Row-major unitary on the gate's local register. Local index bit `k`
    /// belongs to `targets[k]`, so for CNOT the control is the low bit.
    pub fn matrix(self) -> Vec<Complex64> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let h = FRAC_1_SQRT_2;
        match self {
            GateKind::X => vec![z, one, one, z],
            GateKind::Y => vec![z, c(0.0, -1.0), c(0.0, 1.0), z],
            GateKind::Z => vec![one, z, z, -one],
            GateKind::H => vec![c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)],
            GateKind::S => vec![one, z, z, c(0.0, 1.0)],
            GateKind::Sdg => vec![one, z, z, c(0.0, -1.0)],
            GateKind::Rz(phi) => vec![
                Complex64::from_polar(1.0, -phi / 2.0),
                z,
                z,
                Complex64::from_polar(1.0, phi / 2.0),
            ],
            GateKind::Ry(phi) => {
                let (s, co) = (phi / 2.0).sin_cos();
                vec![c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]
            }
            GateKind::Cnot => vec![
                one, z, z, z, //
                z, z, z, one, //
                z, z, one, z, //
                z, one, z, z,
            ],
            GateKind::Swap => vec![
                one, z, z, z, //
                z, z, one, z, //
                z, one, z, z, //
                z, z, z, one,
            ],
            GateKind::B => vec![
                one,
                z,
                z,
                z, //
                z,
                c(h, 0.0),
                c(-h, 0.0),
                z, //
                z,
                c(h, 0.0),
                c(h, 0.0),
                z, //
                z,
                z,
                z,
                one,
            ],
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::Rz(a) => write!(f, "Rz({a})"),
            GateKind::Ry(a) => write!(f, "Ry({a})"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    targets: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: &[usize]) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(Error::InvalidGate(format!(
                "{kind} takes {} target(s), got {}",
                kind.arity(),
                targets.len()
            )));
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::InvalidGate(format!(
                "{kind} targets qubit {} twice",
                targets[0]
            )));
        }
        if let GateKind::Rz(a) | GateKind::Ry(a) = kind {
            if !a.is_finite() {
                return Err(Error::InvalidGate(format!("non-finite angle in {kind}")));
            }
        }
        Ok(Self {
            kind,
            targets: targets.to_vec(),
        })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn matrix(&self) -> Vec<Complex64> {
        self.kind.matrix()
    }
}
