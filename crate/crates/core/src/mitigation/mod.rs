//! Readout unfolding, [[4,2,2]] post-selection and the duplicate-circuit
//! ratio estimator.

mod brem;
mod duplicate;
pub mod io;
mod postselect;

pub use brem::{
    brem_unfold, estimate_response_matrix, BremOptions, ResponseMatrix, Spectrum, Unfolded,
};
pub use duplicate::{
    duplicate_estimate, duplicate_estimate_exact, duplicate_oracle, DuplicateEstimate,
    DuplicateWeights,
};
pub use postselect::{
    decode_all, decode_logical, postselect_distribution, qec_postselect, PostSelectedDistribution,
    PostSelectionReport,
};

use crate::densesim::{ProbabilityVector, ShotHistogram};
use crate::error::{Error, Result};

fn parity_sign(outcome: usize, mask: usize) -> f64 {
    if (outcome & mask).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn bit_mask(bits: &[usize], n_bits: usize) -> Result<usize> {
    bits.iter().try_fold(0usize, |m, &b| {
        if b >= n_bits {
            Err(Error::QubitOutOfRange {
                index: b,
                n_qubits: n_bits,
            })
        } else {
            Ok(m | (1 << b))
        }
    })
}

/// `Σ_b freq(b)·(−1)^{parity of b on bits}`, the Z-string expectation on
/// the listed measured bits.
pub fn expectation_from_histogram(h: &ShotHistogram, bits: &[usize]) -> Result<f64> {
    if h.shots() == 0 {
        return Err(Error::Parameter("empty histogram".into()));
    }
    expectation_from_weights(&h.frequencies(), h.n_bits(), bits)
}

pub fn expectation_from_distribution(p: &ProbabilityVector, bits: &[usize]) -> Result<f64> {
    expectation_from_weights(p.probs(), p.n_bits(), bits)
}

fn expectation_from_weights(w: &[f64], n_bits: usize, bits: &[usize]) -> Result<f64> {
    let mask = bit_mask(bits, n_bits)?;
    let total: f64 = w.iter().sum();
    if total <= 0.0 {
        return Err(Error::Parameter("distribution has no weight".into()));
    }
    Ok(w.iter()
        .enumerate()
        .map(|(k, p)| p * parity_sign(k, mask))
        .sum::<f64>()
        / total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_expectations() {
        let h = ShotHistogram::from_map([("00", 100)]).unwrap();
        assert_eq!(expectation_from_histogram(&h, &[0]).unwrap(), 1.0);
        let h = ShotHistogram::from_map([("11", 100)]).unwrap();
        assert_eq!(expectation_from_histogram(&h, &[0, 1]).unwrap(), 1.0);
        assert_eq!(expectation_from_histogram(&h, &[1]).unwrap(), -1.0);
        let h = ShotHistogram::from_map([("00", 25), ("01", 25), ("10", 25), ("11", 25)]).unwrap();
        assert_eq!(expectation_from_histogram(&h, &[0]).unwrap(), 0.0);
        assert!(expectation_from_histogram(&h, &[2]).is_err());
    }
}
