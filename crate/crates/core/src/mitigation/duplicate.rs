use std::sync::OnceLock;

use num_complex::Complex64;

use crate::circuits::DuplicateLayout;
use crate::densesim::{DensityMatrix, GateKind, ProbabilityVector, ShotHistogram};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Per-pair outcome weights, indexed by `bit_A + 2·bit_B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuplicateWeights {
    /// Diagonal of `B[(Z⊗I + I⊗Z)/2 · SWAP]B†`.
    pub d: [f64; 4],
    /// Diagonal of `B·SWAP·B†`.
    pub s: [f64; 4],
}

type Mat4 = [[Complex64; 4]; 4];

fn mat4(flat: &[Complex64]) -> Mat4 {
    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (k, v) in flat.iter().enumerate() {
        m[k / 4][k % 4] = *v;
    }
    m
}

fn mul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

fn dagger4(a: &Mat4) -> Mat4 {
    let mut m = *a;
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = a[j][i].conj();
        }
    }
    m
}

#[allow(clippy::needless_range_loop)]
fn real_diagonal(m: &Mat4) -> Result<[f64; 4]> {
    let mut diag = [0.0; 4];
    for i in 0..4 {
        for j in 0..4 {
            let off = if i == j { m[i][j].im } else { m[i][j].norm() };
            if off.abs() > 1e-12 {
                return Err(Error::Parameter(format!(
                    "conjugated operator is not real diagonal at ({i}, {j})"
                )));
            }
        }
        diag[i] = m[i][i].re;
    }
    Ok(diag)
}

impl DuplicateWeights {
    /// Conjugates SWAP and the symmetrized `Z·SWAP` by the beam-splitter
    /// gate and reads off the diagonals. The circuit applies `B` before
    /// measurement, so outcome `k` has weight `⟨k|B·O·B†|k⟩`.
    pub fn derive() -> Result<Self> {
        let b = mat4(&GateKind::B.matrix());
        let swap = mat4(&GateKind::Swap.matrix());
        let mut zsym = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (k, row) in zsym.iter_mut().enumerate() {
            let za = if k & 1 == 0 { 1.0 } else { -1.0 };
            let zb = if k & 2 == 0 { 1.0 } else { -1.0 };
            row[k] = Complex64::new((za + zb) / 2.0, 0.0);
        }
        let conj = |op: &Mat4| mul4(&mul4(&b, op), &dagger4(&b));
        Ok(Self {
            d: real_diagonal(&conj(&mul4(&zsym, &swap)))?,
            s: real_diagonal(&conj(&swap))?,
        })
    }

    pub fn standard() -> &'static Self {
        static WEIGHTS: OnceLock<DuplicateWeights> = OnceLock::new();
        WEIGHTS.get_or_init(|| Self::derive().expect("beam-splitter conjugation is diagonal"))
    }

    /// `(numerator, denominator)` weights of one 4-bit duplicate outcome.
    fn outcome_weights(
        &self,
        layout: &DuplicateLayout,
        outcome: usize,
        a_mask: usize,
    ) -> (f64, f64) {
        let mut num = 1.0;
        let mut den = 1.0;
        for (i, (qa, qb)) in layout.pairs().into_iter().enumerate() {
            let m = ((outcome >> qa) & 1) | (((outcome >> qb) & 1) << 1);
            den *= self.s[m];
            num *= if a_mask & (1 << i) != 0 {
                self.d[m]
            } else {
                self.s[m]
            };
        }
        (num, den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuplicateEstimate {
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
    /// Delta-method standard error of the ratio; absent in exact mode.
    pub std_error: Option<f64>,
}

fn observable_mask(layout: &DuplicateLayout, observable: &[usize]) -> Result<usize> {
    observable.iter().try_fold(0usize, |m, &q| {
        if q >= layout.qubits_per_subsystem {
            Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: layout.qubits_per_subsystem,
            })
        } else {
            Ok(m | (1 << q))
        }
    })
}

fn check_width(layout: &DuplicateLayout, n_bits: usize) -> Result<()> {
    if n_bits != layout.total_qubits() {
        return Err(Error::Arity {
            expected: layout.total_qubits(),
            got: n_bits,
        });
    }
    Ok(())
}

/// Shot-averaged weights estimating `Tr(Oρ²)` and `Tr(ρ²)` with `O` the
/// Z-string on subsystem qubits `observable`, and their ratio.
pub fn duplicate_estimate(h: &ShotHistogram, observable: &[usize]) -> Result<DuplicateEstimate> {
    let layout = DuplicateLayout::default();
    check_width(&layout, h.n_bits())?;
    let mask = observable_mask(&layout, observable)?;
    let shots = h.shots();
    if shots == 0 {
        return Err(Error::Parameter("empty histogram".into()));
    }
    let w = DuplicateWeights::standard();
    let s = shots as f64;
    let (mut sn, mut sd, mut snn, mut sdd, mut snd) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (k, &c) in h.counts().iter().enumerate().filter(|(_, c)| **c > 0) {
        let (n, d) = w.outcome_weights(&layout, k, mask);
        let c = c as f64;
        sn += c * n;
        sd += c * d;
        snn += c * n * n;
        sdd += c * d * d;
        snd += c * n * d;
    }
    let (n, d) = (sn / s, sd / s);
    let floor = 10.0 / s;
    if d.abs() < floor {
        return Err(Error::UnstableDenominator {
            denominator: d,
            floor,
        });
    }
    let ratio = n / d;
    let var = |sq: f64, m1: f64, m2: f64| {
        if shots > 1 {
            (sq - s * m1 * m2) / (s - 1.0)
        } else {
            0.0
        }
    };
    let (vn, vd, cnd) = (var(snn, n, n), var(sdd, d, d), var(snd, n, d));
    let v = ((vn - 2.0 * ratio * cnd + ratio * ratio * vd) / (s * d * d)).max(0.0);
    Ok(DuplicateEstimate {
        numerator: n,
        denominator: d,
        ratio,
        std_error: Some(v.sqrt()),
    })
}

/// Exact-distribution form of [`duplicate_estimate`].
pub fn duplicate_estimate_exact(
    p: &ProbabilityVector,
    observable: &[usize],
) -> Result<DuplicateEstimate> {
    let layout = DuplicateLayout::default();
    check_width(&layout, p.n_bits())?;
    let mask = observable_mask(&layout, observable)?;
    let w = DuplicateWeights::standard();
    let total = p.total();
    let (mut n, mut d) = (0.0, 0.0);
    for (k, &prob) in p.probs().iter().enumerate() {
        let (wn, wd) = w.outcome_weights(&layout, k, mask);
        n += prob * wn / total;
        d += prob * wd / total;
    }
    if d.abs() < 1e-12 {
        return Err(Error::Degenerate(d));
    }
    Ok(DuplicateEstimate {
        numerator: n,
        denominator: d,
        ratio: n / d,
        std_error: None,
    })
}

/// `Tr(Oρ²)/Tr(ρ²)` by dense matrix algebra.
pub fn duplicate_oracle(rho: &DensityMatrix, o: &PauliString) -> Result<f64> {
    if o.len() != rho.n_qubits() {
        return Err(Error::Arity {
            expected: rho.n_qubits(),
            got: o.len(),
        });
    }
    let m = rho.to_dmatrix();
    let sq = &m * &m;
    let purity = sq.trace().re;
    if purity < 1e-12 {
        return Err(Error::Degenerate(purity));
    }
    let dim = rho.dim();
    let op = nalgebra::DMatrix::from_row_slice(dim, dim, &o.to_matrix());
    Ok((op * sq).trace().re / purity)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_tables() {
        let w = DuplicateWeights::derive().unwrap();
        // the singlet (|01⟩ − |10⟩)/√2 leaves B as |01⟩
        for (got, want) in w.s.iter().zip([1.0, -1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        for (got, want) in w.d.iter().zip([1.0, 0.0, 0.0, -1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn all_zero_shots() {
        let h = ShotHistogram::from_map([("0000", 1000)]).unwrap();
        let e = duplicate_estimate(&h, &[0]).unwrap();
        assert_eq!((e.numerator, e.denominator, e.ratio), (1.0, 1.0, 1.0));
        assert_eq!(e.std_error, Some(0.0));
    }

    #[test]
    fn unstable_denominator_rejected() {
        // pair 1 in its antisymmetric outcome half the time cancels the denominator
        let h = ShotHistogram::from_map([("0000", 50), ("0001", 50)]).unwrap();
        assert!(matches!(
            duplicate_estimate(&h, &[0]),
            Err(Error::UnstableDenominator { .. })
        ));
    }

    #[test]
    fn oracle_identity_and_pure() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert!((duplicate_oracle(&rho, &PauliString::identity(2)).unwrap() - 1.0).abs() < 1e-12);
        let z = "IZ".parse().unwrap();
        assert!(
            duplicate_oracle(&DensityMatrix::zero_state(2).unwrap(), &z).unwrap() > 1.0 - 1e-12
        );
    }
}
