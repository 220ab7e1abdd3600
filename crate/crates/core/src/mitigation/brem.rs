use crate::densesim::{format_bits, ProbabilityVector, ShotHistogram};
use crate::error::{Error, Result};

/// A normalized spectrum over `2^n` outcomes.
pub type Spectrum = ProbabilityVector;

/// Column-stochastic confusion matrix, `R[j][i] = Pr(measure j | truth i)`,
/// stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseMatrix {
    n_qubits: usize,
    data: Vec<f64>,
}

impl ResponseMatrix {
    pub fn new(n_qubits: usize, data: Vec<f64>) -> Result<Self> {
        if !(1..=crate::densesim::MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::Capacity(n_qubits));
        }
        let dim = 1 << n_qubits;
        if data.len() != dim * dim {
            return Err(Error::Arity {
                expected: dim * dim,
                got: data.len(),
            });
        }
        if data
            .iter()
            .any(|x| !x.is_finite() || *x < -1e-12 || *x > 1.0 + 1e-12)
        {
            return Err(Error::Parameter(
                "response entries must lie in [0, 1]".into(),
            ));
        }
        for i in 0..dim {
            let col: f64 = (0..dim).map(|j| data[j * dim + i]).sum();
            if (col - 1.0).abs() > 1e-9 {
                return Err(Error::Normalization(col));
            }
        }
        Ok(Self { n_qubits, data })
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        if !(1..=crate::densesim::MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::Capacity(n_qubits));
        }
        let dim = 1 << n_qubits;
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Self::new(n_qubits, data)
    }

    /// Tensor product of independent per-bit flips, `flips[t] = (p01, p10)`.
    pub fn from_flips(flips: &[(f64, f64)]) -> Result<Self> {
        let n = flips.len();
        if !(1..=crate::densesim::MAX_QUBITS).contains(&n) {
            return Err(Error::Capacity(n));
        }
        let dim = 1 << n;
        let mut data = vec![0.0; dim * dim];
        for j in 0..dim {
            for i in 0..dim {
                data[j * dim + i] = flips
                    .iter()
                    .enumerate()
                    .map(|(t, &(p01, p10))| match ((i >> t) & 1, (j >> t) & 1) {
                        (0, 0) => 1.0 - p01,
                        (0, _) => p01,
                        (_, 0) => p10,
                        _ => 1.0 - p10,
                    })
                    .product();
            }
        }
        Self::new(n, data)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// `Pr(measure j | truth i)`.
    pub fn get(&self, j: usize, i: usize) -> f64 {
        self.data[j * self.dim() + i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Forward model `m = R·t`.
    pub fn apply(&self, truth: &[f64]) -> Result<Vec<f64>> {
        let dim = self.dim();
        if truth.len() != dim {
            return Err(Error::Arity {
                expected: dim,
                got: truth.len(),
            });
        }
        Ok((0..dim)
            .map(|j| (0..dim).map(|i| self.get(j, i) * truth[i]).sum())
            .collect())
    }

    pub fn row_label(&self, j: usize) -> String {
        format_bits(j, self.n_qubits)
    }
}

/// Column `i` is the empirical distribution of calibration histogram `i`.
pub fn estimate_response_matrix(histograms: &[ShotHistogram]) -> Result<ResponseMatrix> {
    let dim = histograms.len();
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::Arity {
            expected: dim.next_power_of_two().max(2),
            got: dim,
        });
    }
    let n = dim.trailing_zeros() as usize;
    let mut data = vec![0.0; dim * dim];
    for (i, h) in histograms.iter().enumerate() {
        if h.n_bits() != n {
            return Err(Error::Arity {
                expected: n,
                got: h.n_bits(),
            });
        }
        if h.shots() == 0 {
            return Err(Error::Parameter(format!(
                "calibration histogram {i} is empty"
            )));
        }
        for (j, f) in h.frequencies().into_iter().enumerate() {
            data[j * dim + i] = f;
        }
    }
    ResponseMatrix::new(n, data)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BremOptions {
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for BremOptions {
    fn default() -> Self {
        Self {
            max_iters: 100,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Unfolded {
    pub spectrum: Spectrum,
    pub iterations: usize,
    pub converged: bool,
}

/// Iterative Bayesian unfolding from a uniform prior:
/// `t_i ← Σ_j R[j][i]·t_i·m_j / Σ_s R[j][s]·t_s`, stopping after
/// `max_iters` or once the L1 change drops below `tol`.
pub fn brem_unfold(measured: &Spectrum, r: &ResponseMatrix, opts: BremOptions) -> Result<Unfolded> {
    let dim = r.dim();
    if measured.probs().len() != dim {
        return Err(Error::Arity {
            expected: dim,
            got: measured.probs().len(),
        });
    }
    if opts.max_iters == 0 || opts.tol.is_nan() || opts.tol < 0.0 {
        return Err(Error::Parameter(format!(
            "invalid unfolding options {opts:?}"
        )));
    }
    if let Some(i) = (0..dim).find(|&i| (0..dim).all(|j| r.get(j, i) == 0.0)) {
        return Err(Error::SingularResponse(i));
    }
    let m = measured.probs();
    let m_total: f64 = m.iter().sum();
    let mut t = vec![1.0 / dim as f64; dim];
    let mut next = vec![0.0; dim];
    let mut folded = vec![0.0; dim];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iters {
        iterations += 1;
        for (j, f) in folded.iter_mut().enumerate() {
            *f = (0..dim).map(|s| r.get(j, s) * t[s]).sum();
        }
        for (i, n) in next.iter_mut().enumerate() {
            *n = t[i]
                * (0..dim)
                    .filter(|&j| folded[j] > 0.0)
                    .map(|j| r.get(j, i) * m[j] / folded[j])
                    .sum::<f64>();
        }
        let total: f64 = next.iter().sum();
        if total > 0.0 && total != m_total {
            let scale = m_total / total;
            next.iter_mut().for_each(|x| *x *= scale);
        }
        let change: f64 = t.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut t, &mut next);
        if change < opts.tol {
            converged = true;
            break;
        }
    }
    Ok(Unfolded {
        spectrum: ProbabilityVector::from_raw(r.n_qubits(), t),
        iterations,
        converged,
    })
}
