//! Masked categorical distributions over action logits.

use rand::Rng;

use super::NnError;

/// Softmax over the unmasked logits. Masked entries get exactly zero mass.
pub fn masked_softmax(logits: &[f64], mask: &[bool]) -> Result<Vec<f64>, NnError> {
    let log_probs = masked_log_softmax(logits, mask)?;
    Ok(log_probs
        .iter()
        .zip(mask)
        .map(|(&lp, &m)| if m { lp.exp() } else { 0.0 })
        .collect())
}

/// Log-probabilities; masked entries are `-inf`.
pub fn masked_log_softmax(logits: &[f64], mask: &[bool]) -> Result<Vec<f64>, NnError> {
    if logits.len() != mask.len() {
        return Err(NnError::DimMismatch {
            expected: logits.len(),
            got: mask.len(),
        });
    }
    let max = logits
        .iter()
        .zip(mask)
        .filter(|(_, &m)| m)
        .map(|(&l, _)| l)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(NnError::EmptyMask);
    }
    let sum: f64 = logits
        .iter()
        .zip(mask)
        .filter(|(_, &m)| m)
        .map(|(&l, _)| (l - max).exp())
        .sum();
    let log_z = max + sum.ln();
    Ok(logits
        .iter()
        .zip(mask)
        .map(|(&l, &m)| if m { l - log_z } else { f64::NEG_INFINITY })
        .collect())
}

/// Inverse-CDF sampling from a single uniform draw. Zero-mass entries are
/// never returned.
pub fn sample_categorical<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last_positive = i;
        if u < acc {
            return i;
        }
    }
    // rounding left u above the accumulated total
    last_positive
}
