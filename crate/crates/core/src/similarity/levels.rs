use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AuditError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityLevel {
    Noise,
    Low,
    Medium,
    High,
    Copy,
}

impl SimilarityLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            SimilarityLevel::Noise => "noise",
            SimilarityLevel::Low => "low",
            SimilarityLevel::Medium => "medium",
            SimilarityLevel::High => "high",
            SimilarityLevel::Copy => "copy",
        }
    }
}

impl fmt::Display for SimilarityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Lower edges of the `low`, `medium`, `high` and `copy` bands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    pub noise: f64,
    pub medium: f64,
    pub high: f64,
    pub copy: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        ThresholdConfig {
            noise: 0.30,
            medium: 0.45,
            high: 0.75,
            copy: 0.80,
        }
    }
}

impl ThresholdConfig {
    pub fn validate(&self) -> Result<()> {
        let edges = [self.noise, self.medium, self.high, self.copy];
        if edges.iter().any(|e| !(0.0..=1.0).contains(e)) {
            return Err(AuditError::invalid(
                "similarity thresholds must lie in [0, 1]",
            ));
        }
        if edges.windows(2).any(|w| w[0] > w[1]) {
            return Err(AuditError::invalid(
                "similarity thresholds must satisfy noise <= medium <= high <= copy",
            ));
        }
        Ok(())
    }
}

/// Maps a score in `[0, 1]` to its band; each band includes its lower edge.
pub fn classify_level(score: f64, thresholds: &ThresholdConfig) -> Result<SimilarityLevel> {
    if !(0.0..=1.0).contains(&score) {
        return Err(AuditError::invalid(format!(
            "similarity score {score} outside [0, 1]"
        )));
    }
    let level = if score >= thresholds.copy {
        SimilarityLevel::Copy
    } else if score >= thresholds.high {
        SimilarityLevel::High
    } else if score >= thresholds.medium {
        SimilarityLevel::Medium
    } else if score >= thresholds.noise {
        SimilarityLevel::Low
    } else {
        SimilarityLevel::Noise
    };
    Ok(level)
}
