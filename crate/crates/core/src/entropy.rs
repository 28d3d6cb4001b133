//! Shannon, Rényi and Tsallis entropies (in nats) and the majorization order.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Entries below this are treated as exact zeros: `0 ln 0 = 0`, `0^alpha = 0`.
pub const ZERO_CUTOFF: f64 = 1e-15;
/// Slack for partial-sum comparisons in [`majorizes`].
pub const MAJORIZATION_SLACK: f64 = 1e-10;
const TOTAL_MATCH_TOL: f64 = 1e-9;
const ORDER_ONE_TOL: f64 = 1e-9;

/// Nonnegative weights with a cached total.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    entries: Vec<f64>,
    total: f64,
}

impl WeightVector {
    /// Clamps floating-point negatives in `[-1e-12, 0)` to zero.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        let mut entries = entries;
        for x in &mut entries {
            if !x.is_finite() {
                return Err(invalid("non-finite weight"));
            }
            if *x < -1e-12 {
                return Err(invalid(format!("negative weight {x:e}")));
            }
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let total = entries.iter().sum();
        Ok(Self { entries, total })
    }

    /// Like [`WeightVector::new`] but clamps any negative entry to zero.
    ///
    /// Used for difference vectors such as `s_k - s_{k-1}` where roundoff can
    /// dip below zero.
    pub fn clamped(entries: Vec<f64>) -> Self {
        let entries: Vec<f64> = entries.into_iter().map(|x| x.max(0.0)).collect();
        let total = entries.iter().sum();
        Self { entries, total }
    }

    pub fn uniform(n: usize) -> Self {
        Self::clamped(vec![1.0 / n as f64; n])
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries sorted in decreasing order.
    pub fn sorted_desc(&self) -> Vec<f64> {
        let mut v = self.entries.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// `p ⊗ q`: all products `p_i q_j`.
    pub fn tensor(&self, other: &Self) -> Self {
        let entries = self
            .entries
            .iter()
            .flat_map(|&a| other.entries.iter().map(move |&b| a * b))
            .collect();
        Self::clamped(entries)
    }

    /// `p ⊕ q`: concatenation.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self::clamped(entries)
    }

    /// `sum_i w_i^alpha` with `0^alpha = 0` for every alpha.
    pub fn power_sum(&self, alpha: f64) -> f64 {
        self.entries
            .iter()
            .filter(|&&x| x > ZERO_CUTOFF)
            .map(|&x| x.powf(alpha))
            .sum()
    }

    /// Number of entries above [`ZERO_CUTOFF`].
    pub fn support(&self) -> usize {
        self.entries.iter().filter(|&&x| x > ZERO_CUTOFF).count()
    }
}

/// Order `alpha >= 0` of a Rényi or Tsallis entropy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyOrder(f64);

impl EntropyOrder {
    pub const SHANNON: EntropyOrder = EntropyOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(invalid(format!("entropy order must be finite and >= 0, got {alpha}")));
        }
        Ok(Self(alpha))
    }

    pub fn alpha(self) -> f64 {
        self.0
    }

    pub fn is_shannon(self) -> bool {
        (self.0 - 1.0).abs() < ORDER_ONE_TOL
    }
}

pub fn shannon_entropy(w: &WeightVector) -> f64 {
    -w.entries
        .iter()
        .filter(|&&x| x > ZERO_CUTOFF)
        .map(|&x| x * x.ln())
        .sum::<f64>()
}

pub fn renyi_entropy(w: &WeightVector, order: EntropyOrder) -> f64 {
    if order.is_shannon() {
        return shannon_entropy(w);
    }
    let alpha = order.alpha();
    if alpha == 0.0 {
        return (w.support() as f64).ln();
    }
    w.power_sum(alpha).ln() / (1.0 - alpha)
}

pub fn tsallis_entropy(w: &WeightVector, order: EntropyOrder) -> f64 {
    if order.is_shannon() {
        return shannon_entropy(w);
    }
    let alpha = order.alpha();
    (w.power_sum(alpha) - 1.0) / (1.0 - alpha)
}

/// `a ≻ b`: every partial sum of the largest entries of `a` dominates `b`'s.
pub fn majorizes(a: &WeightVector, b: &WeightVector) -> Result<bool> {
    if (a.total - b.total).abs() > TOTAL_MATCH_TOL {
        return Err(invalid(format!(
            "majorization needs equal totals, got {} and {}",
            a.total, b.total
        )));
    }
    let n = a.len().max(b.len());
    let mut sa = a.sorted_desc();
    let mut sb = b.sorted_desc();
    sa.resize(n, 0.0);
    sb.resize(n, 0.0);
    let (mut pa, mut pb) = (0.0, 0.0);
    for (x, y) in sa.iter().zip(&sb) {
        pa += x;
        pb += y;
        if pa < pb - MAJORIZATION_SLACK {
            return Ok(false);
        }
    }
    Ok(true)
}
