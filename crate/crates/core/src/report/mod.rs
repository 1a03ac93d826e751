//! Cohort report: per-student rows, aggregate statistics, pairwise flags.

mod markdown;
mod stats;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::evidence::TranscriptEvidence;
use crate::rubric::RubricScore;
use crate::similarity::{SimilarityFinding, SimilarityLevel};

pub use markdown::emit_markdown;
pub use stats::{
    cohort_stats, statistic_total, summarize, CohortStats, ComponentMeans, InvalidTotals,
    StatsOptions, StdConvention, Summary,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudentRow {
    pub student_id: String,
    pub score: RubricScore,
    pub evidence: TranscriptEvidence,
    pub headline_similarity: f64,
    pub headline_level: SimilarityLevel,
    pub personal_zone_max_similarity: f64,
    pub pending_manual_review: bool,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortReport {
    pub tool_version: String,
    /// Totals are on a 0-100 scale; when set, human-readable output shows them /10.
    pub scale_10: bool,
    pub rows: Vec<StudentRow>,
    pub stats: CohortStats,
    pub stats_options: StatsOptions,
    /// Findings at level `low` or above.
    pub pairwise: Vec<SimilarityFinding>,
    /// Noise-level findings, kept for completeness.
    pub noise_findings: Vec<SimilarityFinding>,
    pub warnings: Vec<String>,
    pub config_echo: BTreeMap<String, String>,
    pub conventions: Vec<String>,
}

impl CohortReport {
    /// Sorts rows and splits findings; `stats` is computed from the rows.
    pub fn assemble(
        mut rows: Vec<StudentRow>,
        findings: Vec<SimilarityFinding>,
        stats_options: StatsOptions,
        config_echo: BTreeMap<String, String>,
        warnings: Vec<String>,
        conventions: Vec<String>,
    ) -> Result<Self> {
        rows.sort_by(|a, b| a.student_id.cmp(&b.student_id));
        let (pairwise, noise_findings) = findings
            .into_iter()
            .partition(|f| f.level > SimilarityLevel::Noise);
        Ok(CohortReport {
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            scale_10: false,
            stats: stats_from_rows(&rows, &stats_options)?,
            rows,
            stats_options,
            pairwise,
            noise_findings,
            warnings,
            config_echo,
            conventions,
        })
    }

    pub fn recompute_stats(&self) -> Result<CohortStats> {
        stats_from_rows(&self.rows, &self.stats_options)
    }

    pub fn copy_pairs(&self) -> Vec<(&str, &str)> {
        let mut pairs: Vec<(&str, &str)> = self
            .pairwise
            .iter()
            .filter(|f| f.level == SimilarityLevel::Copy)
            .map(|f| (f.id_a.as_str(), f.id_b.as_str()))
            .collect();
        pairs.dedup();
        pairs
    }

    pub fn has_invalidation(&self) -> bool {
        self.rows.iter().any(|r| !r.score.valid)
    }

    /// 2 when a copy-level finding or an invalidated submission exists, else 0.
    pub fn exit_code(&self) -> i32 {
        if !self.copy_pairs().is_empty() || self.has_invalidation() {
            2
        } else {
            0
        }
    }

    pub fn pass_count(&self) -> usize {
        self.rows.iter().filter(|r| r.score.pass).count()
    }
}

fn stats_from_rows(rows: &[StudentRow], options: &StatsOptions) -> Result<CohortStats> {
    let scores: Vec<RubricScore> = rows.iter().map(|r| r.score.clone()).collect();
    let headline: Vec<f64> = rows.iter().map(|r| r.headline_similarity).collect();
    cohort_stats(&scores, &headline, options)
}

/// Pretty-printed JSON with a trailing newline. Field order follows the
/// struct definitions and maps are sorted, so output is byte-stable.
pub fn emit_json(report: &CohortReport) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(report)?;
    out.push(b'\n');
    Ok(out)
}

pub fn parse_json(bytes: &[u8]) -> Result<CohortReport> {
    Ok(serde_json::from_slice(bytes)?)
}
