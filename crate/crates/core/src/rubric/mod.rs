//! Four-component rubric: R1 traceable interaction (20), R2 report
//! structure (20), R3 technical work (35), R4 originality (25).
//!
//! R1 is eliminatory. A missing transcript or a capped session shorter than
//! the minimum zeroes R1 and invalidates the whole submission, whatever the
//! other components say. R2, R3 and the review-answer part of R4 are
//! instructor marks; the engine validates and combines them.

mod marks;

use serde::{Deserialize, Serialize};

use crate::error::{AuditError, Result};
use crate::evidence::TranscriptEvidence;
use crate::similarity::ThresholdConfig;

pub use marks::{load_marks, parse_marks, MARKS_FILE};

pub const R1_MAX: f64 = 20.0;
pub const R2_MAX: f64 = 20.0;
pub const R3_MAX: f64 = 35.0;
pub const R4_MAX: f64 = 25.0;
pub const R4_REVIEW_MAX: f64 = 15.0;

pub const REASON_NO_TRANSCRIPT: &str = "No adjuntó el Anexo A";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManualMarks {
    pub r2_structure: f64,
    pub r3_technical: f64,
    pub r4_review_answers_quality: f64,
    pub notes: String,
}

impl ManualMarks {
    pub fn new(r2: f64, r3: f64, r4_review: f64) -> Self {
        ManualMarks {
            r2_structure: r2,
            r3_technical: r3,
            r4_review_answers_quality: r4_review,
            notes: String::new(),
        }
    }

    /// Placeholder used while instructor marks are pending.
    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        check_range("r2", self.r2_structure, R2_MAX)?;
        check_range("r3", self.r3_technical, R3_MAX)?;
        check_range("r4_review", self.r4_review_answers_quality, R4_REVIEW_MAX)
    }
}

fn check_range(field: &str, value: f64, max: f64) -> Result<()> {
    if (0.0..=max).contains(&value) {
        Ok(())
    } else {
        Err(AuditError::OutOfRange {
            field: field.to_owned(),
            value,
            min: 0.0,
            max,
        })
    }
}

/// Intra-component arithmetic; instructors may re-weight these.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RubricConfig {
    pub min_minutes: u64,
    /// R1 = 20 * (base + per_module * modules covered), capped at 20.
    pub r1_base: f64,
    pub r1_per_module: f64,
    pub r4_originality_points: f64,
    /// Personal-zone similarity where the originality points start to drop,
    /// and where they reach zero.
    pub originality_full_below: f64,
    pub originality_zero_at: f64,
    pub placeholder_penalty: f64,
    pub identity_penalty: f64,
    pub numeric_fail_penalty: f64,
    pub pass_mark: f64,
}

impl Default for RubricConfig {
    fn default() -> Self {
        let t = ThresholdConfig::default();
        RubricConfig {
            min_minutes: 120,
            r1_base: 0.5,
            r1_per_module: 0.1,
            r4_originality_points: 10.0,
            originality_full_below: t.medium,
            originality_zero_at: t.high,
            placeholder_penalty: 5.0,
            identity_penalty: 10.0,
            numeric_fail_penalty: 5.0,
            pass_mark: 60.0,
        }
    }
}

impl RubricConfig {
    pub fn validate(&self) -> Result<()> {
        let in_range = |key: &str, v: f64, max: f64| {
            if v.is_finite() && (0.0..=max).contains(&v) {
                Ok(())
            } else {
                Err(AuditError::config(key, format!("{v} not in [0, {max}]")))
            }
        };
        in_range("rubric.r1_base", self.r1_base, 1.0)?;
        in_range("rubric.r1_per_module", self.r1_per_module, 1.0)?;
        in_range("rubric.r4_originality", self.r4_originality_points, R4_MAX)?;
        in_range(
            "rubric.placeholder_penalty",
            self.placeholder_penalty,
            R4_MAX,
        )?;
        in_range("rubric.identity_penalty", self.identity_penalty, R4_MAX)?;
        in_range(
            "rubric.numeric_fail_penalty",
            self.numeric_fail_penalty,
            R3_MAX,
        )?;
        in_range("rubric.pass_mark", self.pass_mark, 100.0)?;
        if self
            .originality_full_below
            .partial_cmp(&self.originality_zero_at)
            != Some(std::cmp::Ordering::Less)
        {
            return Err(AuditError::config(
                "sim.high",
                "originality ramp needs sim.medium < sim.high",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RubricScore {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
    /// `r1 + r2 + r3 + r4` when valid, else 0.
    pub total: f64,
    pub valid: bool,
    pub invalidation_reasons: Vec<String>,
    pub pass: bool,
}

impl RubricScore {
    /// Sum of the recorded components, regardless of validity.
    pub fn component_sum(&self) -> f64 {
        self.r1 + self.r2 + self.r3 + self.r4
    }
}

pub fn score_r1(ev: &TranscriptEvidence, config: &RubricConfig) -> (f64, Option<String>) {
    if !ev.present {
        return (0.0, Some(REASON_NO_TRANSCRIPT.to_owned()));
    }
    if ev.capped_duration_min < config.min_minutes {
        return (
            0.0,
            Some(format!(
                "Tiempo de interacción < {} min",
                config.min_minutes
            )),
        );
    }
    let modules = ev.modules_covered.len() as f64;
    let points = R1_MAX * (config.r1_base + config.r1_per_module * modules);
    (points.clamp(0.0, R1_MAX), None)
}

/// 1 below the medium line, 0 at or above the high line, linear between.
pub fn originality_factor(personal_zone_max_sim: f64, config: &RubricConfig) -> f64 {
    let (lo, hi) = (config.originality_full_below, config.originality_zero_at);
    if personal_zone_max_sim < lo {
        1.0
    } else if personal_zone_max_sim >= hi {
        0.0
    } else {
        (hi - personal_zone_max_sim) / (hi - lo)
    }
}

pub fn score_r4(
    personal_zone_max_sim: f64,
    review_answers_mark: f64,
    foreign_identity: bool,
    placeholders_certain: usize,
    config: &RubricConfig,
) -> f64 {
    let mut points = config.r4_originality_points
        * originality_factor(personal_zone_max_sim, config)
        + review_answers_mark;
    points -= config.placeholder_penalty * placeholders_certain as f64;
    if foreign_identity {
        points -= config.identity_penalty;
    }
    points.clamp(0.0, R4_MAX)
}

pub fn combine(
    r1: (f64, Option<String>),
    manual: &ManualMarks,
    r4: f64,
    ev: &TranscriptEvidence,
    config: &RubricConfig,
) -> Result<RubricScore> {
    manual.validate()?;
    check_range("r1", r1.0, R1_MAX)?;
    check_range("r4", r4, R4_MAX)?;

    let mut r3 = manual.r3_technical;
    if ev.numeric_failed() {
        r3 = (r3 - config.numeric_fail_penalty).max(0.0);
    }
    let (r1_points, reason) = r1;
    let mut score = RubricScore {
        r1: r1_points,
        r2: manual.r2_structure,
        r3,
        r4,
        total: 0.0,
        valid: reason.is_none(),
        invalidation_reasons: reason.into_iter().collect(),
        pass: false,
    };
    if score.valid {
        score.total = score.component_sum();
        score.pass = score.total >= config.pass_mark;
    }
    Ok(score)
}
