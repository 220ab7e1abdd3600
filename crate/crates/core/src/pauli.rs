//! Pauli words over a qubit register.
//!
//! Qubit 0 (written "qubit 1" in the chemistry notation) is the least
//! significant bit of every basis index and the rightmost character of every
//! printed word or bitstring.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }

    /// `self · other = phase · result`.
    pub fn compose(self, other: Pauli) -> (Complex64, Pauli) {
        use Pauli::*;
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        match (self, other) {
            (I, p) | (p, I) => (one, p),
            (a, b) if a == b => (one, I),
            (X, Y) => (i, Z),
            (Y, X) => (-i, Z),
            (Y, Z) => (i, X),
            (Z, Y) => (-i, X),
            (Z, X) => (i, Y),
            (X, Z) => (-i, Y),
            _ => unreachable!(),
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl TryFrom<char> for Pauli {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::Parameter(format!("invalid Pauli letter {other:?}"))),
        }
    }
}

/// A tensor product of single-qubit Paulis, one factor per qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    factors: Vec<Pauli>,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            factors: vec![Pauli::I; n_qubits],
        }
    }

    /// Builds a word from `(qubit, letter)` pairs; unlisted qubits get `I`.
    pub fn from_factors(n_qubits: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Parameter("empty Pauli string".into()));
        }
        let mut word = Self::identity(n_qubits);
        for &(q, p) in factors {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
            word.factors[q] = p;
        }
        Ok(word)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        self.factors[qubit]
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(|&p| p == Pauli::I)
    }

    /// Qubits carrying a non-identity factor, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(q, _)| q)
            .collect()
    }

    /// Operator product `self · other = phase · word`.
    pub fn mul(&self, other: &PauliString) -> Result<(Complex64, PauliString)> {
        if self.len() != other.len() {
            return Err(Error::Arity {
                expected: self.len(),
                got: other.len(),
            });
        }
        let mut phase = Complex64::new(1.0, 0.0);
        let factors = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(&a, &b)| {
                let (ph, p) = a.compose(b);
                phase *= ph;
                p
            })
            .collect();
        Ok((phase, PauliString { factors }))
    }

    /// True when the two words commute as operators.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .factors
            .iter()
            .zip(&other.factors)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    /// Bit mask of qubits whose factor flips the computational basis (X or Y).
    pub(crate) fn flip_mask(&self) -> usize {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, &p)| matches!(p, Pauli::X | Pauli::Y))
            .fold(0, |m, (q, _)| m | (1 << q))
    }

    /// `(target, phase)` such that `P|basis⟩ = phase·|target⟩`.
    pub(crate) fn act_on_basis(&self, basis: usize) -> (usize, Complex64) {
        let mut phase = Complex64::new(1.0, 0.0);
        for (q, &p) in self.factors.iter().enumerate() {
            let bit = (basis >> q) & 1;
            match p {
                Pauli::I | Pauli::X => {}
                Pauli::Y => {
                    phase *= if bit == 0 {
                        Complex64::new(0.0, 1.0)
                    } else {
                        Complex64::new(0.0, -1.0)
                    }
                }
                Pauli::Z => {
                    if bit == 1 {
                        phase = -phase;
                    }
                }
            }
        }
        (basis ^ self.flip_mask(), phase)
    }

    /// Dense row-major matrix of the word.
    pub fn to_matrix(&self) -> Vec<Complex64> {
        let dim = 1usize << self.len();
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        for col in 0..dim {
            let (row, phase) = self.act_on_basis(col);
            m[row * dim + col] = phase;
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.factors.iter().rev() {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses a word written with qubit 1 rightmost, e.g. `"YXZ"` = Z₁X₂Y₃.
    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::Parameter("empty Pauli string".into()));
        }
        let factors = s
            .chars()
            .rev()
            .map(Pauli::try_from)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { factors })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_is_rightmost_first() {
        let p: PauliString = "YXZ".parse().unwrap();
        assert_eq!(p.get(0), Pauli::Z);
        assert_eq!(p.get(1), Pauli::X);
        assert_eq!(p.get(2), Pauli::Y);
        assert_eq!(p.to_string(), "YXZ");
    }

    #[test]
    fn product_matches_dense_matrices() {
        let words = ["XY", "ZZ", "YI", "XZ", "IY"];
        for a in words {
            for b in words {
                let pa: PauliString = a.parse().unwrap();
                let pb: PauliString = b.parse().unwrap();
                let (phase, pc) = pa.mul(&pb).unwrap();
                let (ma, mb, mc) = (pa.to_matrix(), pb.to_matrix(), pc.to_matrix());
                for i in 0..4 {
                    for j in 0..4 {
                        let prod: Complex64 = (0..4).map(|k| ma[i * 4 + k] * mb[k * 4 + j]).sum();
                        assert!((prod - phase * mc[i * 4 + j]).norm() < 1e-15, "{a}*{b}");
                    }
                }
                let commute = (0..16).all(|k| {
                    let (i, j) = (k / 4, k % 4);
                    let ab: Complex64 = (0..4).map(|l| ma[i * 4 + l] * mb[l * 4 + j]).sum();
                    let ba: Complex64 = (0..4).map(|l| mb[i * 4 + l] * ma[l * 4 + j]).sum();
                    (ab - ba).norm() < 1e-15
                });
                assert_eq!(pa.commutes_with(&pb), commute, "{a},{b}");
            }
        }
    }

    #[test]
    fn rejects_bad_letters() {
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
    }

    #[test]
    fn matrix_of_single_y() {
        let y: PauliString = "Y".parse().unwrap();
        let m = y.to_matrix();
        assert_eq!(m[1], Complex64::new(0.0, -1.0));
        assert_eq!(m[2], Complex64::new(0.0, 1.0));
    }
}
