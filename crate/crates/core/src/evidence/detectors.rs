use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use super::scs::{scs_cn_runoff, ScsCnCheck};
use super::transcript::Transcript;
use crate::error::{AuditError, Result};
use crate::ingest::{Document, Roster, ZoneLabel};
use crate::textprep::fold::{byte_to_char, fold};

// ---------------------------------------------------------------- modules

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Module {
    M1,
    M2,
    M3,
    M4,
    M5,
}

impl Module {
    pub const ALL: [Module; 5] = [Module::M1, Module::M2, Module::M3, Module::M4, Module::M5];

    pub fn number(self) -> usize {
        self as usize + 1
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{}", self.number())
    }
}

pub const DEFAULT_TOPIC_MARKERS: [&str; 5] = [
    r"intensidad.durac|\bidr\b",
    r"distribuci[oó]n temporal",
    r"distribuci[oó]n areal",
    r"scs.?cn|abstracci[oó]n",
    r"integraci[oó]n|hietograma",
];

/// One pattern per module, matched case- and accent-insensitively.
#[derive(Debug, Clone)]
pub struct ModuleMarkers {
    patterns: Vec<(Module, String, Regex)>,
}

fn strip_marks(s: &str) -> String {
    s.nfd().filter(|c| !is_combining_mark(*c)).collect()
}

impl ModuleMarkers {
    /// `topics[k]` is OR-ed with `m[oó]dulo\s*{k+1}`.
    pub fn new(topics: &[String; 5]) -> Result<Self> {
        let mut patterns = Vec::with_capacity(5);
        for (module, topic) in Module::ALL.into_iter().zip(topics) {
            let full = format!(r"m[oó]dulo\s*{}\b|{}", module.number(), topic);
            let re = Regex::new(&format!("(?i){}", strip_marks(&full))).map_err(|e| {
                AuditError::config(format!("evidence.module.{module}"), e.to_string())
            })?;
            patterns.push((module, topic.clone(), re));
        }
        Ok(ModuleMarkers { patterns })
    }

    pub fn topics(&self) -> impl Iterator<Item = (Module, &str)> {
        self.patterns.iter().map(|(m, t, _)| (*m, t.as_str()))
    }
}

impl Default for ModuleMarkers {
    fn default() -> Self {
        ModuleMarkers::new(&DEFAULT_TOPIC_MARKERS.map(str::to_owned)).expect("defaults compile")
    }
}

pub fn module_coverage(t: &Transcript, markers: &ModuleMarkers) -> BTreeSet<Module> {
    let mut covered = BTreeSet::new();
    for msg in &t.messages {
        let text = fold(&msg.text);
        for (module, _, re) in &markers.patterns {
            if re.is_match(&text) {
                covered.insert(*module);
            }
        }
    }
    covered
}

// ----------------------------------------------------------- placeholders

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaceholderKind {
    Certain,
    Suspect,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceholderHit {
    pub kind: PlaceholderKind,
    /// Char offsets into the report text.
    pub start: usize,
    pub end: usize,
    pub text: String,
}

fn certain_placeholder() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?i)\[(?:aquí|aqui|completar|insertar|todo|tbd|xxx)[^\]]*\]").unwrap()
    })
}

fn bracketed_span() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\[([^\[\]\n]{3,80})\]").unwrap())
}

// Filler verbs typical of unfilled template slots; matched on folded text.
fn filler_verb() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"\b(?:iria|ira|va|van|poner|colocar|agregar|anadir|escribir|incluir|rellenar|describir|indicar|pendiente|insert|add|fill|write)\b",
        )
        .unwrap()
    })
}

pub fn detect_placeholders(doc: &Document) -> Vec<PlaceholderHit> {
    let text = &doc.raw_text;
    let mut hits = Vec::new();
    let mut certain_spans = Vec::new();
    for m in certain_placeholder().find_iter(text) {
        certain_spans.push((m.start(), m.end()));
        hits.push(PlaceholderHit {
            kind: PlaceholderKind::Certain,
            start: byte_to_char(text, m.start()),
            end: byte_to_char(text, m.end()),
            text: m.as_str().to_owned(),
        });
    }
    for caps in bracketed_span().captures_iter(text) {
        let m = caps.get(0).expect("whole match");
        if certain_spans
            .iter()
            .any(|&(s, e)| m.start() < e && s < m.end())
        {
            continue;
        }
        if filler_verb().is_match(&fold(&caps[1])) {
            hits.push(PlaceholderHit {
                kind: PlaceholderKind::Suspect,
                start: byte_to_char(text, m.start()),
                end: byte_to_char(text, m.end()),
                text: m.as_str().to_owned(),
            });
        }
    }
    hits.sort_by_key(|h| h.start);
    hits
}

// -------------------------------------------------------- foreign identity

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityFinding {
    pub other_student_id: String,
    pub matched: String,
    pub message_index: usize,
}

fn name_regex(names: impl IntoIterator<Item = String>) -> Option<Regex> {
    let alts: Vec<String> = names
        .into_iter()
        .map(|n| {
            fold(&n)
                .split_whitespace()
                .map(regex::escape)
                .collect::<Vec<_>>()
                .join(r"\s+")
        })
        .filter(|p| !p.is_empty())
        .collect();
    if alts.is_empty() {
        return None;
    }
    Regex::new(&format!(r"\b(?:{})\b", alts.join("|"))).ok()
}

fn entry_names(e: &crate::ingest::RosterEntry) -> Vec<String> {
    std::iter::once(e.full_name.clone())
        .chain(e.aliases.iter().cloned())
        .collect()
}

/// Names or aliases of other roster students appearing in the transcript.
/// Matches are whole-word on folded text, and any match inside a mention of
/// the student's own name is ignored.
pub fn detect_foreign_identity(
    t: &Transcript,
    self_id: &str,
    roster: &Roster,
) -> Vec<IdentityFinding> {
    let own = roster.get(self_id).and_then(|e| name_regex(entry_names(e)));
    let others: Vec<(&str, Regex)> = roster
        .entries
        .iter()
        .filter(|e| e.student_id != self_id)
        .filter_map(|e| name_regex(entry_names(e)).map(|re| (e.student_id.as_str(), re)))
        .collect();

    let mut found = Vec::new();
    for (idx, msg) in t.messages.iter().enumerate() {
        let text = fold(&msg.text);
        let own_spans: Vec<(usize, usize)> = own
            .as_ref()
            .map(|re| re.find_iter(&text).map(|m| (m.start(), m.end())).collect())
            .unwrap_or_default();
        for (other_id, re) in &others {
            let hit = re
                .find_iter(&text)
                .find(|m| !own_spans.iter().any(|&(s, e)| m.start() < e && s < m.end()));
            if let Some(m) = hit {
                found.push(IdentityFinding {
                    other_student_id: (*other_id).to_owned(),
                    matched: m.as_str().to_owned(),
                    message_index: idx,
                });
            }
        }
    }
    found
}

// ------------------------------------------------------ numeric exercise

const NUM: &str = r"(\d+(?:[.,]\d+)?)";

fn labeled(pattern: &'static OnceLock<Regex>, src: impl FnOnce() -> String) -> &'static Regex {
    pattern.get_or_init(|| Regex::new(&src()).unwrap())
}

fn first_number(re: &Regex, text: &str) -> Option<f64> {
    re.captures(text)
        .and_then(|c| c[1].replace(',', ".").parse::<f64>().ok())
}

/// Recomputes the curve-number runoff claimed in the numeric-exercise zone.
/// Returns `None` unless `P = .. mm`, `CN = ..` and `Q = .. mm` (or
/// `Pe = .. mm`) can all be read from that zone.
pub fn verify_numeric_exercise(doc: &Document, tolerance_rel: f64) -> Option<ScsCnCheck> {
    static P_RE: OnceLock<Regex> = OnceLock::new();
    static CN_RE: OnceLock<Regex> = OnceLock::new();
    static Q_RE: OnceLock<Regex> = OnceLock::new();

    let zone = doc.zone_text(ZoneLabel::PersonalNumeric);
    if zone.is_empty() {
        return None;
    }
    let p = first_number(labeled(&P_RE, || format!(r"\bP\s*=\s*{NUM}\s*mm\b")), &zone)?;
    let cn = first_number(labeled(&CN_RE, || format!(r"\bCN\s*=\s*{NUM}")), &zone)?;
    let q = first_number(
        labeled(&Q_RE, || format!(r"\b(?:Q|Pe)\s*=\s*{NUM}\s*mm\b")),
        &zone,
    )?;
    let computed = scs_cn_runoff(p, cn).ok()?;
    Some(ScsCnCheck {
        precipitation_mm: p,
        curve_number: cn,
        claimed_runoff_mm: q,
        computed_runoff_mm: computed,
        pass: (q - computed).abs() <= tolerance_rel * computed.max(1.0),
    })
}
