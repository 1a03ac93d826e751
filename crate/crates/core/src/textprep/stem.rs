//! Light Spanish suffix stripping.
//!
//! Removes plural `-es`/`-s` and gender `-a`/`-o` endings while the word is
//! longer than four characters, repeating until nothing more can be removed.
//! Running to a fixpoint makes the stemmer idempotent.

const MIN_LEN: usize = 4;

fn strip_once(word: &str) -> Option<&str> {
    if word.chars().count() <= MIN_LEN {
        return None;
    }
    if let Some(w) = word.strip_suffix("es") {
        return Some(w);
    }
    word.strip_suffix('s')
        .or_else(|| word.strip_suffix('a'))
        .or_else(|| word.strip_suffix('o'))
}

pub fn stem(word: &str) -> &str {
    let mut w = word;
    while let Some(shorter) = strip_once(w) {
        w = shorter;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::stem;

    #[test]
    fn strips_plural_and_gender() {
        assert_eq!(stem("precipitaciones"), "precipitacion");
        assert_eq!(stem("caudales"), "caudal");
        assert_eq!(stem("cuencas"), "cuenc");
        assert_eq!(stem("cuenca"), "cuenc");
        assert_eq!(stem("modelos"), stem("modelo"));
    }

    #[test]
    fn short_words_untouched() {
        assert_eq!(stem("mes"), "mes");
        assert_eq!(stem("casa"), "casa");
        assert_eq!(stem("datos"), "dato");
    }

    #[test]
    fn idempotent() {
        for w in [
            "clases",
            "efectivas",
            "hidrogramas",
            "abstracciones",
            "oasis",
        ] {
            let once = stem(w);
            assert_eq!(stem(once), once);
        }
    }
}
