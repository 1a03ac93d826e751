//! Evidence of process: the exported tutor chat and the checks run on a
//! submission before scoring.

mod detectors;
mod scs;
mod transcript;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::ingest::{Roster, Submission};

pub use detectors::{
    detect_foreign_identity, detect_placeholders, module_coverage, verify_numeric_exercise,
    IdentityFinding, Module, ModuleMarkers, PlaceholderHit, PlaceholderKind, DEFAULT_TOPIC_MARKERS,
};
pub use scs::{retention, scs_cn_runoff, ScsCnCheck};
pub use transcript::{parse_transcript, session_duration, Message, Role, Timestamp, Transcript};

#[derive(Debug, Clone)]
pub struct EvidenceConfig {
    pub min_minutes: u64,
    /// Per-gap cap in minutes; 0 disables capping.
    pub gap_cap: u64,
    pub numeric_tol: f64,
    pub modules: ModuleMarkers,
}

impl Default for EvidenceConfig {
    fn default() -> Self {
        EvidenceConfig {
            min_minutes: 120,
            gap_cap: 15,
            numeric_tol: 0.05,
            modules: ModuleMarkers::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEvidence {
    /// A transcript exists and contains at least one message.
    pub present: bool,
    pub raw_duration_min: u64,
    pub capped_duration_min: u64,
    pub message_count: usize,
    pub modules_covered: BTreeSet<Module>,
    /// Found in the report text.
    pub placeholder_hits: Vec<PlaceholderHit>,
    pub foreign_identities: Vec<IdentityFinding>,
    pub anomalies: Vec<String>,
    /// `None` when the numeric exercise could not be read.
    pub numeric_exercise: Option<ScsCnCheck>,
}

impl TranscriptEvidence {
    pub fn certain_placeholders(&self) -> usize {
        self.placeholder_hits
            .iter()
            .filter(|h| h.kind == PlaceholderKind::Certain)
            .count()
    }

    pub fn numeric_failed(&self) -> bool {
        self.numeric_exercise.as_ref().is_some_and(|c| !c.pass)
    }
}

/// Evidence from a transcript alone, without a report or roster.
pub fn transcript_evidence(text: Option<&str>, config: &EvidenceConfig) -> TranscriptEvidence {
    let mut ev = TranscriptEvidence {
        present: false,
        raw_duration_min: 0,
        capped_duration_min: 0,
        message_count: 0,
        modules_covered: BTreeSet::new(),
        placeholder_hits: Vec::new(),
        foreign_identities: Vec::new(),
        anomalies: Vec::new(),
        numeric_exercise: None,
    };
    let Some(text) = text else {
        ev.anomalies.push("no transcript attached".to_owned());
        return ev;
    };
    let t = parse_transcript(text);
    ev.anomalies = t.anomalies.clone();
    if t.messages.is_empty() {
        ev.anomalies.push("transcript present but empty".to_owned());
        return ev;
    }
    let (raw, capped) = session_duration(&t, config.gap_cap);
    ev.present = true;
    ev.raw_duration_min = raw;
    ev.capped_duration_min = capped;
    ev.message_count = t.messages.len();
    ev.modules_covered = module_coverage(&t, &config.modules);
    ev
}

pub fn build_evidence(
    sub: &Submission,
    roster: &Roster,
    config: &EvidenceConfig,
) -> TranscriptEvidence {
    let mut ev = transcript_evidence(sub.transcript_text.as_deref(), config);
    if ev.present {
        let t = parse_transcript(sub.transcript_text.as_deref().unwrap_or_default());
        ev.foreign_identities = detect_foreign_identity(&t, &sub.student_id, roster);
    }
    ev.placeholder_hits = detect_placeholders(&sub.report);
    ev.numeric_exercise = verify_numeric_exercise(&sub.report, config.numeric_tol);
    ev
}
