use serde::{Deserialize, Serialize};

use crate::error::{AuditError, Result};
use crate::rubric::RubricScore;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StdConvention {
    /// Divisor n.
    #[default]
    Population,
    /// Divisor n - 1.
    Sample,
}

/// What an invalidated submission contributes to the cohort figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvalidTotals {
    /// The sum of its recorded components (R1 is 0).
    #[default]
    Nominal,
    /// Zero, the total actually awarded.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatsOptions {
    pub std: StdConvention,
    pub invalid_totals: InvalidTotals,
    /// Headline similarity at or above this counts towards `share_sim_ge_medium`.
    pub medium_line: f64,
}

impl Default for StatsOptions {
    fn default() -> Self {
        StatsOptions {
            std: StdConvention::Population,
            invalid_totals: InvalidTotals::Nominal,
            medium_line: 0.45,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary<F> {
    pub n: usize,
    pub mean: F,
    pub std: F,
    pub median: F,
    pub min: F,
    pub max: F,
}

pub fn summarize<F: Real>(values: &[F], convention: StdConvention) -> Result<Summary<F>> {
    if values.is_empty() {
        return Err(AuditError::invalid("cannot summarize an empty list"));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(AuditError::invalid("NaN in summary input"));
    }
    let n = values.len();
    let nf = F::from_count(n);
    let mean = values.iter().copied().sum::<F>() / nf;
    let ss: F = values.iter().map(|&v| (v - mean) * (v - mean)).sum();
    let divisor = match convention {
        StdConvention::Population => nf,
        StdConvention::Sample if n > 1 => F::from_count(n - 1),
        StdConvention::Sample => F::one(),
    };
    let std = (ss / divisor).sqrt();

    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / F::lit(2.0)
    };
    Ok(Summary {
        n,
        mean,
        std,
        median,
        min: sorted[0],
        max: sorted[n - 1],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentMeans {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
}

impl ComponentMeans {
    pub fn sum(&self) -> f64 {
        self.r1 + self.r2 + self.r3 + self.r4
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortStats {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub median: f64,
    pub count_ge_90: usize,
    pub count_ge_60: usize,
    pub count_invalid: usize,
    pub share_sim_ge_medium: f64,
    pub component_means: ComponentMeans,
}

/// The total a score contributes to the cohort figures.
pub fn statistic_total(score: &RubricScore, invalid: InvalidTotals) -> f64 {
    match (score.valid, invalid) {
        (true, _) => score.total,
        (false, InvalidTotals::Nominal) => score.component_sum(),
        (false, InvalidTotals::Zero) => 0.0,
    }
}

/// `headline_similarity[i]` belongs to `scores[i]`.
pub fn cohort_stats(
    scores: &[RubricScore],
    headline_similarity: &[f64],
    options: &StatsOptions,
) -> Result<CohortStats> {
    if scores.is_empty() {
        return Err(AuditError::invalid(
            "cohort statistics need at least one score",
        ));
    }
    if headline_similarity.len() != scores.len() {
        return Err(AuditError::invalid(format!(
            "{} scores but {} similarity values",
            scores.len(),
            headline_similarity.len()
        )));
    }
    let totals: Vec<f64> = scores
        .iter()
        .map(|s| statistic_total(s, options.invalid_totals))
        .collect();
    let summary = summarize(&totals, options.std)?;
    let n = scores.len();
    let mean_of = |f: fn(&RubricScore) -> f64| scores.iter().map(f).sum::<f64>() / n as f64;
    Ok(CohortStats {
        n,
        mean: summary.mean,
        std: summary.std,
        median: summary.median,
        count_ge_90: totals.iter().filter(|&&t| t >= 90.0).count(),
        count_ge_60: totals.iter().filter(|&&t| t >= 60.0).count(),
        count_invalid: scores.iter().filter(|s| !s.valid).count(),
        share_sim_ge_medium: headline_similarity
            .iter()
            .filter(|&&h| h >= options.medium_line)
            .count() as f64
            / n as f64,
        component_means: ComponentMeans {
            r1: mean_of(|s| s.r1),
            r2: mean_of(|s| s.r2),
            r3: mean_of(|s| s.r3),
            r4: mean_of(|s| s.r4),
        },
    })
}
