//! Heading-driven segmentation of a report into labeled zones.

use regex::Regex;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use super::{Document, Zone, ZoneLabel};
use crate::error::{AuditError, Result};
use crate::textprep::FoldedText;

pub const DEFAULT_NUMERIC_MARKER: &str = r"ejercicio num[eé]rico|c[aá]lculo propio";
pub const DEFAULT_REVIEW_MARKER: &str =
    r"respuestas? (?:(?:a las|de) (?:5 |cinco )?preguntas )?de repaso|preguntas de repaso";
pub const DEFAULT_TUTOR_MARKER: &str = r"informe (?:acad[eé]mico )?final|resumen de temas";

// Leading decoration a heading line may carry: indentation, markdown `#`,
// list bullets, numbering such as `2.` or `3)`.
const HEADING_PREFIX: &str = r"(?m)^[ \t#>*\-\d.):]*";

/// Heading patterns per zone label, tried against case- and
/// diacritic-folded text. Order breaks ties between headings that start at
/// the same offset.
#[derive(Debug, Clone)]
pub struct ZoneMarkerConfig {
    markers: Vec<(ZoneLabel, String, Regex)>,
}

impl ZoneMarkerConfig {
    pub fn new(patterns: &[(ZoneLabel, &str)]) -> Result<Self> {
        let mut markers = Vec::with_capacity(patterns.len());
        for &(label, pat) in patterns {
            if label == ZoneLabel::Other {
                return Err(AuditError::invalid("`other` zones cannot have a marker"));
            }
            markers.push((label, pat.to_owned(), compile_heading(pat)?));
        }
        Ok(ZoneMarkerConfig { markers })
    }

    pub fn patterns(&self) -> impl Iterator<Item = (ZoneLabel, &str)> {
        self.markers.iter().map(|(l, p, _)| (*l, p.as_str()))
    }
}

impl Default for ZoneMarkerConfig {
    fn default() -> Self {
        ZoneMarkerConfig::new(&[
            (ZoneLabel::PersonalNumeric, DEFAULT_NUMERIC_MARKER),
            (ZoneLabel::PersonalReviewAnswers, DEFAULT_REVIEW_MARKER),
            (ZoneLabel::TutorText, DEFAULT_TUTOR_MARKER),
        ])
        .expect("default markers compile")
    }
}

fn compile_heading(pattern: &str) -> Result<Regex> {
    // Strip accents from the pattern so it lines up with folded text.
    let stripped: String = pattern.nfd().filter(|c| !is_combining_mark(*c)).collect();
    Regex::new(&format!("(?i){HEADING_PREFIX}(?:{stripped})"))
        .map_err(|e| AuditError::invalid(format!("bad zone marker `{pattern}`: {e}")))
}

/// Returns `doc` with its zones recomputed from `raw_text`.
///
/// A zone starts at the line holding a matched heading and runs to the next
/// accepted heading or the end of the text. When two heading matches
/// overlap, the one that starts first (then the earlier marker) wins.
pub fn segment_zones(doc: &Document, markers: &ZoneMarkerConfig) -> Document {
    let folded = FoldedText::new(&doc.raw_text);
    let mut hits: Vec<(usize, usize, usize, ZoneLabel)> = Vec::new();
    for (priority, (label, _, re)) in markers.markers.iter().enumerate() {
        for m in re.find_iter(&folded.text) {
            hits.push((m.start(), priority, m.end(), *label));
        }
    }
    hits.sort();

    let mut accepted: Vec<(usize, ZoneLabel)> = Vec::new();
    let mut last_end = 0usize;
    for (start, _, end, label) in hits {
        if !accepted.is_empty() && start < last_end {
            continue;
        }
        accepted.push((folded.source_char(start), label));
        last_end = end;
    }

    let text_len = doc.raw_text.chars().count();
    let mut zones = Vec::with_capacity(accepted.len());
    for (i, &(start, label)) in accepted.iter().enumerate() {
        let end = accepted.get(i + 1).map_or(text_len, |&(s, _)| s);
        if start < end {
            zones.push(Zone { label, start, end });
        }
    }

    Document {
        raw_text: doc.raw_text.clone(),
        extraction_method: doc.extraction_method,
        zones,
    }
}
