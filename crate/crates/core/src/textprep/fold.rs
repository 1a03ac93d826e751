//! Case and diacritic folding with an offset map back to the source text.

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

/// Lowercases `c` and, when `strip_marks` is set, removes combining marks
/// after canonical decomposition (`á` → `a`, `Ñ` → `n`).
pub fn fold_char(c: char, strip_marks: bool, out: &mut String) {
    if strip_marks {
        for d in std::iter::once(c).nfd() {
            if is_combining_mark(d) {
                continue;
            }
            out.extend(d.to_lowercase());
        }
    } else {
        out.extend(c.to_lowercase());
    }
}

/// Lowercase + diacritic-stripped copy of `text`.
pub fn fold(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        fold_char(c, true, &mut out);
    }
    out
}

/// A folded string that remembers which source character produced each
/// folded character, so regex matches on the folded form can be reported
/// as character offsets into the original.
#[derive(Debug, Clone)]
pub struct FoldedText {
    pub text: String,
    // (byte offset in `text`, char index in source), plus a trailing sentinel.
    origin: Vec<(usize, usize)>,
}

impl FoldedText {
    pub fn new(source: &str) -> Self {
        let mut text = String::with_capacity(source.len());
        let mut origin = Vec::with_capacity(source.len() + 1);
        let mut n_chars = 0;
        for (ci, c) in source.chars().enumerate() {
            let before = text.len();
            fold_char(c, true, &mut text);
            let mut off = before;
            for fc in text[before..].chars() {
                origin.push((off, ci));
                off += fc.len_utf8();
            }
            n_chars = ci + 1;
        }
        origin.push((text.len(), n_chars));
        FoldedText { text, origin }
    }

    /// Maps a byte offset in the folded text to a char offset in the source.
    pub fn source_char(&self, folded_byte: usize) -> usize {
        let idx = self
            .origin
            .partition_point(|&(b, _)| b <= folded_byte)
            .saturating_sub(1);
        self.origin[idx].1
    }

    /// Maps an exclusive folded byte end to an exclusive source char end.
    pub fn source_char_end(&self, folded_byte_end: usize) -> usize {
        if folded_byte_end == 0 {
            return 0;
        }
        // the char that produced the last folded byte, plus one
        self.source_char(folded_byte_end - 1) + 1
    }
}

/// Converts a byte offset in `s` into a char offset.
pub fn byte_to_char(s: &str, byte: usize) -> usize {
    s[..byte].chars().count()
}

/// Slices `s` by char offsets `[start, end)`.
pub fn char_slice(s: &str, start: usize, end: usize) -> &str {
    let mut it = s
        .char_indices()
        .map(|(b, _)| b)
        .chain(std::iter::once(s.len()));
    let b0 = it.nth(start).unwrap_or(s.len());
    let b1 = if end > start {
        it.nth(end - start - 1).unwrap_or(s.len())
    } else {
        b0
    };
    &s[b0..b1]
}
