use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::state::ProbabilityVector;
use crate::error::{Error, Result};

/// Outcome counts over `n_bits`-bit strings, stored densely by outcome index.
/// Bitstrings are printed with bit 0 (qubit 1) rightmost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotHistogram {
    n_bits: usize,
    counts: Vec<u64>,
}

pub fn format_bits(index: usize, n_bits: usize) -> String {
    (0..n_bits)
        .rev()
        .map(|b| if (index >> b) & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse_bits(s: &str) -> Result<usize> {
    if s.is_empty() || s.len() > 8 * std::mem::size_of::<usize>() {
        return Err(Error::Bitstring(s.to_string()));
    }
    s.chars().try_fold(0usize, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        _ => Err(Error::Bitstring(s.to_string())),
    })
}

impl ShotHistogram {
    pub fn from_counts(n_bits: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != 1 << n_bits {
            return Err(Error::Arity {
                expected: 1 << n_bits,
                got: counts.len(),
            });
        }
        Ok(Self { n_bits, counts })
    }

    /// Builds a histogram from bitstring keys; all keys must share a length.
    pub fn from_map<'a, I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, u64)>,
    {
        let mut n_bits = None;
        let mut sparse = Vec::new();
        for (key, count) in entries {
            match n_bits {
                None => n_bits = Some(key.len()),
                Some(n) if n != key.len() => return Err(Error::Bitstring(key.to_string())),
                _ => {}
            }
            sparse.push((parse_bits(key)?, count));
        }
        let n_bits = n_bits.ok_or(Error::Arity {
            expected: 1,
            got: 0,
        })?;
        if n_bits > 16 {
            return Err(Error::Bitstring(format!("{n_bits}-bit keys are too wide")));
        }
        let mut counts = vec![0; 1 << n_bits];
        for (idx, c) in sparse {
            counts[idx] += c;
        }
        Ok(Self { n_bits, counts })
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, bits: &str) -> u64 {
        parse_bits(bits)
            .ok()
            .and_then(|i| self.counts.get(i).copied())
            .unwrap_or(0)
    }

    pub fn shots(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Non-zero entries keyed by bitstring.
    pub fn to_map(&self) -> BTreeMap<String, u64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (format_bits(i, self.n_bits), c))
            .collect()
    }

    /// Relative frequencies; all zero for an empty histogram.
    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.shots();
        if total == 0 {
            return vec![0.0; self.counts.len()];
        }
        self.counts
            .iter()
            .map(|&c| c as f64 / total as f64)
            .collect()
    }
}

/// Draws `shots` outcomes from `p` as a sequence of conditional binomials.
/// The same `(p, shots, seed)` always yields the same histogram.
pub fn sample_shots(p: &ProbabilityVector, shots: u64, seed: u64) -> Result<ShotHistogram> {
    if shots == 0 {
        return Err(Error::Parameter("shots must be positive".into()));
    }
    let total = p.total();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::Normalization(total));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probs = p.probs();
    let mut counts = vec![0u64; probs.len()];
    let mut remaining = shots;
    let mut mass_left = 1.0f64;
    for (i, &pi) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let pi = pi.max(0.0);
        if i == probs.len() - 1 || mass_left <= pi {
            counts[i] = remaining;
            break;
        }
        let cond = (pi / mass_left).clamp(0.0, 1.0);
        let drawn = Binomial::new(remaining, cond)
            .expect("conditional probability lies in [0, 1]")
            .sample(&mut rng);
        counts[i] = drawn;
        remaining -= drawn;
        mass_left -= pi;
    }
    Ok(ShotHistogram {
        n_bits: p.n_bits(),
        counts,
    })
}
