#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cohort_audit::rubric::RubricScore;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const ONSETS: [&str; 14] = [
    "b", "c", "d", "f", "g", "l", "m", "n", "p", "r", "t", "v", "ch", "br",
];
const VOWELS: [&str; 5] = ["a", "e", "i", "o", "u"];
const CODAS: [&str; 4] = ["n", "r", "l", "z"];

/// Distinct pseudo-words that survive normalization unchanged: lowercase
/// ASCII ending in a consonant the stemmer never strips.
pub fn word_pool(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    let mut seen = std::collections::BTreeSet::new();
    while seen.len() < n {
        let syllables = rng.random_range(2..=4);
        let mut w = String::new();
        for _ in 0..syllables {
            w.push_str(ONSETS.choose(rng).unwrap());
            w.push_str(VOWELS.choose(rng).unwrap());
        }
        w.push_str(CODAS.choose(rng).unwrap());
        seen.insert(w);
    }
    let mut v: Vec<String> = seen.into_iter().collect();
    for i in (1..v.len()).rev() {
        let j = rng.random_range(0..=i);
        v.swap(i, j);
    }
    v
}

pub fn draw(rng: &mut ChaCha8Rng, pool: &[String], n: usize) -> Vec<String> {
    (0..n).map(|_| pool.choose(rng).unwrap().clone()).collect()
}

/// Replaces each token with probability `rate` by a draw from `pool`.
pub fn mutate(rng: &mut ChaCha8Rng, tokens: &[String], pool: &[String], rate: f64) -> Vec<String> {
    tokens
        .iter()
        .map(|t| {
            if rng.random::<f64>() < rate {
                pool.choose(rng).unwrap().clone()
            } else {
                t.clone()
            }
        })
        .collect()
}

/// Tokens as prose: sentences of 8-14 words.
pub fn prose(rng: &mut ChaCha8Rng, tokens: &[String]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < tokens.len() {
        let len = rng.random_range(8..=14).min(tokens.len() - i);
        let mut sentence = tokens[i..i + len].join(" ");
        if let Some(first) = sentence.get(..1) {
            let upper = first.to_uppercase();
            sentence.replace_range(..1, &upper);
        }
        out.push_str(&sentence);
        out.push_str(". ");
        i += len;
    }
    out.trim_end().to_owned()
}

/// A session of `minutes` length with one exchange every `step` minutes.
pub fn transcript(date: &str, start_min: u32, minutes: u32, step: u32, topics: &[&str]) -> String {
    let mut out = String::new();
    let mut m = 0;
    let mut k = 0;
    loop {
        let at = start_min + m;
        let topic = topics
            .get(k % topics.len().max(1))
            .copied()
            .unwrap_or("cuencas");
        if k == 0 {
            writeln!(
                out,
                "[{date} {:02}:{:02}] Usuario: Consulta sobre {topic}.",
                at / 60,
                at % 60
            )
            .unwrap();
        } else {
            writeln!(
                out,
                "[{:02}:{:02}] Usuario: Sigo con {topic}.",
                at / 60,
                at % 60
            )
            .unwrap();
        }
        writeln!(
            out,
            "[{:02}:{:02}] Asistente: Respuesta sobre {topic}.",
            at / 60,
            at % 60
        )
        .unwrap();
        if m >= minutes {
            break;
        }
        m = (m + step).min(minutes);
        k += 1;
    }
    out
}

pub fn seventeen_minute_transcript() -> String {
    transcript(
        "2025-03-10",
        10 * 60,
        17,
        4,
        &["balance hídrico", "precipitación"],
    )
}

pub const NUMERIC_BLOCK: &str = "P = 100 mm, CN = 75, Q = 41,14 mm";

pub struct Phase1Plan {
    pub ids: Vec<String>,
    pub copy_pairs: Vec<(String, String)>,
    pub template_ids: Vec<String>,
    pub transcript_ids: Vec<String>,
    pub numeric_ids: Vec<String>,
    pub placeholder_ids: Vec<String>,
}

/// Writes a 23-submission cohort: one 17-minute transcript, two planted
/// copy pairs, nine documents sharing a template, three numeric exercises
/// and placeholders in five reports. Everyone gets maximal manual marks.
pub fn write_phase1_cohort(root: &Path, seed: u64) -> Phase1Plan {
    let mut rng = rng(seed);
    let pool = word_pool(&mut rng, 6000);
    let ids: Vec<String> = (1..=23).map(|i| format!("s{i:02}")).collect();
    let template_vocab = &pool[..120];
    let pool = &pool[120..];
    let template = draw(&mut rng, template_vocab, 300);

    let copy_pairs = vec![
        (ids[0].clone(), ids[1].clone()),
        (ids[2].clone(), ids[3].clone()),
    ];
    let template_ids: Vec<String> = ids[4..13].to_vec();
    let transcript_ids = vec![ids[13].clone()];
    let numeric_ids = vec![ids[14].clone(), ids[15].clone(), ids[4].clone()];
    let placeholder_ids: Vec<String> = ids[17..22].to_vec();

    let mut reports: Vec<String> = Vec::new();
    for (i, id) in ids.iter().enumerate() {
        let body = if template_ids.contains(id) {
            let mut t = mutate(&mut rng, &template, pool, 0.05);
            t.extend(draw(&mut rng, pool, 80));
            t
        } else {
            draw(&mut rng, pool, 360)
        };
        let numeric = draw(&mut rng, pool, 50);
        let review = draw(&mut rng, pool, 60);
        let mut text = String::new();
        writeln!(text, "Informe final\n\n{}\n", prose(&mut rng, &body)).unwrap();
        writeln!(text, "Ejercicio numérico\n").unwrap();
        if numeric_ids.contains(id) {
            writeln!(text, "{NUMERIC_BLOCK}").unwrap();
        }
        writeln!(text, "{}\n", prose(&mut rng, &numeric)).unwrap();
        writeln!(text, "Preguntas de repaso\n\n{}", prose(&mut rng, &review)).unwrap();
        if placeholder_ids.contains(id) {
            writeln!(text, "\n[Aquí insertar conclusión personal]").unwrap();
        }
        let copy_of = copy_pairs.iter().find(|(_, b)| b == id).map(|(a, _)| a);
        if let Some(a) = copy_of {
            let src = &reports[ids.iter().position(|x| x == a).unwrap()];
            text = src.clone();
            let words: Vec<String> = text.split(' ').map(str::to_owned).collect();
            let n = words.len();
            let mut out = words;
            for _ in 0..n / 25 {
                let k = rng.random_range(0..n);
                if out[k].chars().all(|c| c.is_ascii_lowercase()) {
                    out[k] = pool.choose(&mut rng).unwrap().clone();
                }
            }
            text = out.join(" ");
        }
        reports.push(text.clone());

        let dir = root.join(id);
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join("report.txt"), &text).unwrap();
        fs::write(dir.join("marks.txt"), "r2=20\nr3=35\nr4_review=15\n").unwrap();
        if transcript_ids.contains(id) {
            fs::write(dir.join("anexo_a.txt"), seventeen_minute_transcript()).unwrap();
        }
        let _ = i;
    }
    Phase1Plan {
        ids,
        copy_pairs,
        template_ids,
        transcript_ids,
        numeric_ids,
        placeholder_ids,
    }
}

/// 27 totals: mean 72.89, population std 26.80, median 88, 13 at or above
/// 90, 18 at or above 60. The six lowest are the invalidated entries.
pub const GRADE_VECTOR: [f64; 27] = [
    20.0, 26.0, 29.0, 35.0, 38.0, 41.0, 44.0, 55.0, 58.0, 62.0, 70.0, 75.0, 80.0, 88.0, 90.0, 92.0,
    93.0, 94.0, 95.0, 95.0, 96.0, 97.0, 98.0, 98.0, 99.0, 100.0, 100.0,
];
pub const INVALID_COUNT: usize = 6;

/// Splits a total into rubric components. Invalidated entries carry R1 = 0
/// and their total in the remaining components.
pub fn score_for(total: f64, valid: bool) -> RubricScore {
    let r1 = if valid {
        (total * 0.2).clamp(10.0, 20.0)
    } else {
        0.0
    };
    let rest = total - r1;
    let r2 = rest * 20.0 / 80.0;
    let r3 = rest * 35.0 / 80.0;
    let r4 = rest - r2 - r3;
    RubricScore {
        r1,
        r2,
        r3,
        r4,
        total: if valid { total } else { 0.0 },
        valid,
        invalidation_reasons: if valid {
            Vec::new()
        } else {
            vec!["No adjuntó el Anexo A".to_owned()]
        },
        pass: valid && total >= 60.0,
    }
}

pub fn grade_fixture() -> Vec<RubricScore> {
    GRADE_VECTOR
        .iter()
        .enumerate()
        .map(|(i, &t)| score_for(t, i >= INVALID_COUNT))
        .collect()
}
