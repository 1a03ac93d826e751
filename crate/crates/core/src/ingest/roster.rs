use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{AuditError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RosterEntry {
    pub student_id: String,
    pub full_name: String,
    /// Lowercased, trimmed.
    pub aliases: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roster {
    pub entries: Vec<RosterEntry>,
}

impl Roster {
    pub fn new(entries: Vec<RosterEntry>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for e in &entries {
            if e.student_id.trim().is_empty() {
                return Err(AuditError::invalid("roster entry with empty student id"));
            }
            if e.full_name.trim().is_empty() {
                return Err(AuditError::invalid(format!(
                    "roster entry `{}` has an empty full name",
                    e.student_id
                )));
            }
            if !seen.insert(e.student_id.as_str()) {
                return Err(AuditError::invalid(format!(
                    "duplicate roster id `{}`",
                    e.student_id
                )));
            }
        }
        Ok(Roster { entries })
    }

    /// Parses `<student_id>\t<full_name>\t<alias1,alias2,...>` lines.
    /// Blank lines and `#` comments are skipped; the alias column is optional.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let id = cols.next().unwrap_or("").trim();
            let name = cols.next().unwrap_or("").trim();
            if id.is_empty() || name.is_empty() {
                return Err(AuditError::Parse {
                    path: origin.to_path_buf(),
                    line: i + 1,
                    message: "expected `<student_id>\\t<full_name>[\\t<aliases>]`".into(),
                });
            }
            let aliases = cols
                .next()
                .unwrap_or("")
                .split(',')
                .map(|a| a.trim().to_lowercase())
                .filter(|a| !a.is_empty())
                .collect();
            entries.push(RosterEntry {
                student_id: id.to_owned(),
                full_name: name.to_owned(),
                aliases,
            });
        }
        Roster::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AuditError::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn get(&self, student_id: &str) -> Option<&RosterEntry> {
        self.entries.iter().find(|e| e.student_id == student_id)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
