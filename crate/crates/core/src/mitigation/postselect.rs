use crate::circuits::ENCODED_WIDTH;
use crate::densesim::{ProbabilityVector, ShotHistogram};
use crate::error::{Error, Result};

const DATA_MASK: usize = 0b001111;
const FLAG_MASK: usize = 0b110000;

/// Logical outcome `z1 + 2·z2` with `z1 = b₃⊕b₁`, `z2 = b₂⊕b₁`, ignoring
/// the checks.
fn decode_unchecked(outcome: usize) -> usize {
    let b = |k: usize| (outcome >> k) & 1;
    let z1 = b(2) ^ b(0);
    let z2 = b(1) ^ b(0);
    z1 | (z2 << 1)
}

/// Decodes a 6-bit outcome (`a₂ a₁ b₄ b₃ b₂ b₁`), or `None` when a flag is
/// raised or the data parity is odd.
pub fn decode_logical(outcome: usize) -> Option<usize> {
    if outcome & FLAG_MASK != 0 || (outcome & DATA_MASK).count_ones() % 2 == 1 {
        None
    } else {
        Some(decode_unchecked(outcome))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostSelectionReport {
    pub kept_shots: u64,
    pub discarded_shots: u64,
    pub retention_ratio: f64,
    pub logical: ShotHistogram,
}

fn check_width(n_bits: usize) -> Result<()> {
    if n_bits != ENCODED_WIDTH {
        return Err(Error::Arity {
            expected: ENCODED_WIDTH,
            got: n_bits,
        });
    }
    Ok(())
}

pub fn qec_postselect(h: &ShotHistogram) -> Result<PostSelectionReport> {
    check_width(h.n_bits())?;
    let mut logical = vec![0u64; 4];
    let mut discarded = 0u64;
    for (k, &c) in h.counts().iter().enumerate() {
        match decode_logical(k) {
            Some(l) => logical[l] += c,
            None => discarded += c,
        }
    }
    let kept: u64 = logical.iter().sum();
    if kept == 0 {
        return Err(Error::AllDiscarded(h.shots()));
    }
    Ok(PostSelectionReport {
        kept_shots: kept,
        discarded_shots: discarded,
        retention_ratio: kept as f64 / h.shots() as f64,
        logical: ShotHistogram::from_counts(2, logical)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostSelectedDistribution {
    pub logical: ProbabilityVector,
    pub retention_ratio: f64,
}

/// Post-selection on an exact or unfolded 6-bit distribution.
pub fn postselect_distribution(p: &ProbabilityVector) -> Result<PostSelectedDistribution> {
    check_width(p.n_bits())?;
    let mut logical = vec![0.0; 4];
    for (k, &w) in p.probs().iter().enumerate() {
        if let Some(l) = decode_logical(k) {
            logical[l] += w;
        }
    }
    let kept: f64 = logical.iter().sum();
    if kept <= 1e-15 {
        return Err(Error::AllDiscarded(0));
    }
    logical.iter_mut().for_each(|x| *x /= kept);
    Ok(PostSelectedDistribution {
        logical: ProbabilityVector::from_raw(2, logical),
        retention_ratio: kept / p.total(),
    })
}

/// Logical distribution with every outcome decoded and none discarded.
pub fn decode_all(p: &[f64]) -> Result<ProbabilityVector> {
    if p.len() != 1 << ENCODED_WIDTH {
        return Err(Error::Arity {
            expected: 1 << ENCODED_WIDTH,
            got: p.len(),
        });
    }
    let total: f64 = p.iter().sum();
    let mut logical = vec![0.0; 4];
    for (k, &w) in p.iter().enumerate() {
        logical[decode_unchecked(k)] += w / total;
    }
    Ok(ProbabilityVector::from_raw(2, logical))
}
