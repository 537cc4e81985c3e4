//! The universality score `Δ(x) = a·x / (a·x + 1)` and group comparisons.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Degree of belief `a ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct BeliefParameter(f64);

impl BeliefParameter {
    pub fn new(a: f64) -> Result<Self> {
        if a > 0.0 && a <= 1.0 {
            Ok(BeliefParameter(a))
        } else {
            Err(Error::InvalidBelief(a))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for BeliefParameter {
    fn default() -> Self {
        BeliefParameter(1.0)
    }
}

impl TryFrom<f64> for BeliefParameter {
    type Error = Error;

    fn try_from(a: f64) -> Result<Self> {
        BeliefParameter::new(a)
    }
}

impl From<BeliefParameter> for f64 {
    fn from(a: BeliefParameter) -> f64 {
        a.0
    }
}

/// Δ for an emulation count `x`.
pub fn delta(x: u64, a: BeliefParameter) -> f64 {
    delta_f64(x as f64, a)
}

/// Δ extended to real `x ≥ 0`, used for group means.
pub fn delta_f64(x: f64, a: BeliefParameter) -> f64 {
    let ax = a.0 * x;
    ax / (ax + 1.0)
}

/// Five-number summary and mean of one group's counts.
///
/// Quartiles use the median-of-halves rule: `q1` and `q3` are the medians
/// of the values strictly below and strictly above the middle position
/// (the middle value is excluded when the count is odd). A single value is
/// its own quartiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSummary {
    pub label: String,
    pub counts: Vec<u64>,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
}

fn median(sorted: &[u64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0
    }
}

impl ComparisonSummary {
    pub fn new(label: &str, counts: &[u64]) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyGroup(label.to_string()));
        }
        let mut sorted = counts.to_vec();
        sorted.sort_unstable();
        let n = sorted.len();
        let med = median(&sorted);
        let (q1, q3) = if n == 1 { (med, med) } else { (median(&sorted[..n / 2]), median(&sorted[n.div_ceil(2)..])) };
        let mean = sorted.iter().map(|&c| c as f64).sum::<f64>() / n as f64;
        Ok(ComparisonSummary {
            label: label.to_string(),
            counts: counts.to_vec(),
            min: sorted[0] as f64,
            q1,
            median: med,
            q3,
            max: sorted[n - 1] as f64,
            mean,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub busy_beaver: ComparisonSummary,
    pub random: ComparisonSummary,
    /// Busy Beaver mean and median both strictly exceed the random group's.
    pub verdict: bool,
    pub delta_busy_beaver_mean: f64,
    pub delta_random_mean: f64,
    pub belief: BeliefParameter,
}

pub fn compare_groups(bb_counts: &[u64], rnd_counts: &[u64], a: BeliefParameter) -> Result<Comparison> {
    let bb = ComparisonSummary::new("busy_beaver", bb_counts)?;
    let rnd = ComparisonSummary::new("random", rnd_counts)?;
    let verdict = bb.mean > rnd.mean && bb.median > rnd.median;
    Ok(Comparison {
        delta_busy_beaver_mean: delta_f64(bb.mean, a),
        delta_random_mean: delta_f64(rnd.mean, a),
        busy_beaver: bb,
        random: rnd,
        verdict,
        belief: a,
    })
}
