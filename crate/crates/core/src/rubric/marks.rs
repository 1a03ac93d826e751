//! `marks.txt`: `r2=<num>`, `r3=<num>`, `r4_review=<num>`, optional `notes=...`.

use std::path::Path;

use super::ManualMarks;
use crate::error::{AuditError, Result};

pub const MARKS_FILE: &str = "marks.txt";

pub fn parse_marks(text: &str, origin: &Path) -> Result<ManualMarks> {
    let (mut r2, mut r3, mut r4) = (None, None, None);
    let mut notes = String::new();
    let err = |line: usize, message: String| AuditError::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(err(i + 1, format!("expected key=value, got `{line}`")));
        };
        let (key, value) = (key.trim(), value.trim());
        let num = || {
            value
                .replace(',', ".")
                .parse::<f64>()
                .map_err(|_| err(i + 1, format!("`{key}` is not a number: `{value}`")))
        };
        match key {
            "r2" => r2 = Some(num()?),
            "r3" => r3 = Some(num()?),
            "r4_review" => r4 = Some(num()?),
            "notes" => notes = value.to_owned(),
            other => return Err(err(i + 1, format!("unknown key `{other}`"))),
        }
    }
    let need = |v: Option<f64>, key: &str| v.ok_or_else(|| err(0, format!("missing `{key}`")));
    let marks = ManualMarks {
        r2_structure: need(r2, "r2")?,
        r3_technical: need(r3, "r3")?,
        r4_review_answers_quality: need(r4, "r4_review")?,
        notes,
    };
    marks.validate()?;
    Ok(marks)
}

/// `Ok(None)` when the student folder has no marks file yet.
pub fn load_marks(student_dir: &Path) -> Result<Option<ManualMarks>> {
    let path = student_dir.join(MARKS_FILE);
    match std::fs::read_to_string(&path) {
        Ok(text) => parse_marks(&text, &path).map(Some),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(AuditError::io(path, e)),
    }
}
