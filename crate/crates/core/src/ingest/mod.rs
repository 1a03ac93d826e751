//! Cohort loading and report segmentation.
//!
//! A cohort is a directory with one subdirectory per student:
//!
//! ```text
//! <root>/<student_id>/report.txt   (or report.md)
//! <root>/<student_id>/anexo_a.txt  optional chat transcript
//! <root>/<student_id>/meta.txt     optional, `extraction_method=<plain|native_pdf_text|ocr>`
//! <root>/<student_id>/marks.txt    optional instructor marks, read by the rubric
//! ```

mod roster;
mod zones;

use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{AuditError, Result};
use crate::textprep::fold::char_slice;

pub use roster::{Roster, RosterEntry};
pub use zones::{
    segment_zones, ZoneMarkerConfig, DEFAULT_NUMERIC_MARKER, DEFAULT_REVIEW_MARKER,
    DEFAULT_TUTOR_MARKER,
};

pub const REPORT_FILES: [&str; 2] = ["report.txt", "report.md"];
pub const TRANSCRIPT_FILE: &str = "anexo_a.txt";
pub const META_FILE: &str = "meta.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZoneLabel {
    TutorText,
    PersonalNumeric,
    PersonalReviewAnswers,
    Other,
}

impl ZoneLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ZoneLabel::TutorText => "tutor_text",
            ZoneLabel::PersonalNumeric => "personal_numeric",
            ZoneLabel::PersonalReviewAnswers => "personal_review_answers",
            ZoneLabel::Other => "other",
        }
    }
}

impl fmt::Display for ZoneLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractionMethod {
    Plain,
    NativePdfText,
    Ocr,
    #[default]
    Unknown,
}

impl std::str::FromStr for ExtractionMethod {
    type Err = AuditError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "plain" => Ok(ExtractionMethod::Plain),
            "native_pdf_text" => Ok(ExtractionMethod::NativePdfText),
            "ocr" => Ok(ExtractionMethod::Ocr),
            "unknown" => Ok(ExtractionMethod::Unknown),
            other => Err(AuditError::invalid(format!(
                "unknown extraction method `{other}`"
            ))),
        }
    }
}

/// Half-open character range `[start, end)` of `raw_text`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Zone {
    pub label: ZoneLabel,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub raw_text: String,
    pub extraction_method: ExtractionMethod,
    /// Sorted, disjoint. Characters outside every zone are `other`.
    pub zones: Vec<Zone>,
}

impl Document {
    pub fn new(raw_text: impl Into<String>, extraction_method: ExtractionMethod) -> Self {
        Document {
            raw_text: raw_text.into(),
            extraction_method,
            zones: Vec::new(),
        }
    }

    /// Concatenated text of every zone with `label`, in document order.
    pub fn zone_text(&self, label: ZoneLabel) -> String {
        let mut out = String::new();
        for z in self.zones.iter().filter(|z| z.label == label) {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(char_slice(&self.raw_text, z.start, z.end));
        }
        out
    }

    pub fn has_zone(&self, label: ZoneLabel) -> bool {
        self.zones.iter().any(|z| z.label == label)
    }

    pub fn zones_are_well_formed(&self) -> bool {
        let len = self.raw_text.chars().count();
        self.zones.iter().all(|z| z.start < z.end && z.end <= len)
            && self.zones.windows(2).all(|w| w[0].end <= w[1].start)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Submission {
    pub student_id: String,
    pub report: Document,
    pub transcript_text: Option<String>,
    pub source_dir: PathBuf,
    /// No report file, or the report is blank.
    pub unreadable: bool,
}

impl Submission {
    pub fn new(student_id: impl Into<String>, report_text: impl Into<String>) -> Self {
        let report = Document::new(report_text, ExtractionMethod::Plain);
        let unreadable = report.raw_text.trim().is_empty();
        Submission {
            student_id: student_id.into(),
            report,
            transcript_text: None,
            source_dir: PathBuf::new(),
            unreadable,
        }
    }

    pub fn with_transcript(mut self, transcript: impl Into<String>) -> Self {
        self.transcript_text = Some(transcript.into());
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct IngestConfig {
    pub markers: ZoneMarkerConfig,
}

#[derive(Debug, Clone, Default)]
pub struct LoadedCohort {
    /// Sorted by student id.
    pub submissions: Vec<Submission>,
    pub warnings: Vec<String>,
}

pub fn load_cohort(root: &Path, roster: &Roster, config: &IngestConfig) -> Result<LoadedCohort> {
    let entries = std::fs::read_dir(root).map_err(|e| AuditError::io(root, e))?;
    let mut dirs = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| AuditError::io(root, e))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if name.starts_with('.') {
            continue;
        }
        let is_dir = entry
            .file_type()
            .map_err(|e| AuditError::io(entry.path(), e))?
            .is_dir();
        if is_dir {
            dirs.push((name, entry.path()));
        }
    }

    let mut submissions = dirs
        .into_par_iter()
        .map(|(id, dir)| load_submission(id, &dir, config))
        .collect::<Result<Vec<_>>>()?;
    submissions.sort_by(|a, b| a.student_id.cmp(&b.student_id));

    let mut warnings = Vec::new();
    if submissions.is_empty() {
        warnings.push(format!("no student folders found in {}", root.display()));
    }
    for s in &submissions {
        if s.unreadable {
            warnings.push(format!("{}: no readable report file", s.student_id));
        }
        if !roster.is_empty() && roster.get(&s.student_id).is_none() {
            warnings.push(format!("{}: not listed in the roster", s.student_id));
        }
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(LoadedCohort {
        submissions,
        warnings,
    })
}

fn read_optional(path: &Path) -> Result<Option<String>> {
    match std::fs::read(path) {
        Ok(bytes) => Ok(Some(String::from_utf8_lossy(&bytes).into_owned())),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(AuditError::io(path, e)),
    }
}

fn read_extraction_method(dir: &Path) -> Result<ExtractionMethod> {
    let path = dir.join(META_FILE);
    let Some(meta) = read_optional(&path)? else {
        return Ok(ExtractionMethod::Unknown);
    };
    for line in meta.lines() {
        if let Some(v) = line.trim().strip_prefix("extraction_method=") {
            // an unrecognized value is treated like a missing sidecar
            return Ok(v.parse().unwrap_or_default());
        }
    }
    Ok(ExtractionMethod::Unknown)
}

fn load_submission(student_id: String, dir: &Path, config: &IngestConfig) -> Result<Submission> {
    let mut report_text = None;
    for name in REPORT_FILES {
        if let Some(t) = read_optional(&dir.join(name))? {
            report_text = Some(t);
            break;
        }
    }
    let transcript_text = read_optional(&dir.join(TRANSCRIPT_FILE))?;
    let method = read_extraction_method(dir)?;

    let raw = report_text.unwrap_or_default();
    let unreadable = raw.trim().is_empty();
    let mut report = Document::new(raw, method);
    if !unreadable {
        report = segment_zones(&report, &config.markers);
    }
    Ok(Submission {
        student_id,
        report,
        transcript_text,
        source_dir: dir.to_path_buf(),
        unreadable,
    })
}
