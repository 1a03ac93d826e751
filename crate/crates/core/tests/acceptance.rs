mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use rand::Rng;
use statrs::statistics::{Data, Median, Statistics};

use cohort_audit::cli::cmd_audit;
use cohort_audit::evidence::{
    parse_transcript, scs_cn_runoff, session_duration, transcript_evidence, EvidenceConfig,
};
use cohort_audit::report::{cohort_stats, StatsOptions};
use cohort_audit::rubric::{combine, score_r1, score_r4, ManualMarks, RubricConfig};
use cohort_audit::similarity::{
    build_lsh, classify_level, cosine, fit_tfidf, jaccard_estimate, minhash, SimilarityLevel,
    ThresholdConfig,
};
use cohort_audit::textprep::{shingles, ShingleSet, TokenStream};
use cohort_audit::{run_audit, Config};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Documents in families: each family mutates one base at rates spread over
/// [0, 0.6], so pairwise overlap spans the whole range.
fn family_corpus(seed: u64, docs: usize, family: usize, len: usize) -> Vec<Vec<String>> {
    let mut rng = common::rng(seed);
    let pool = common::word_pool(&mut rng, 3000);
    let mut out = Vec::with_capacity(docs);
    while out.len() < docs {
        let base = common::draw(&mut rng, &pool, len);
        for j in 0..family {
            if out.len() == docs {
                break;
            }
            let rate = 0.6 * j as f64 / family as f64;
            out.push(common::mutate(&mut rng, &base, &pool, rate));
        }
    }
    out
}

fn dense_cosines(docs: &[Vec<String>]) -> Vec<Vec<f64>> {
    let vocab: BTreeSet<&str> = docs.iter().flatten().map(String::as_str).collect();
    let index: BTreeMap<&str, usize> = vocab.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let n = docs.len() as f64;
    let mut df = vec![0.0; vocab.len()];
    for d in docs {
        let uniq: BTreeSet<&str> = d.iter().map(String::as_str).collect();
        for t in uniq {
            df[index[t]] += 1.0;
        }
    }
    let vectors: Vec<Vec<f64>> = docs
        .iter()
        .map(|d| {
            let mut v = vec![0.0; vocab.len()];
            for t in d {
                v[index[t.as_str()]] += 1.0;
            }
            for (i, x) in v.iter_mut().enumerate() {
                *x *= ((1.0 + n) / (1.0 + df[i])).ln() + 1.0;
            }
            v
        })
        .collect();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    vectors
        .iter()
        .map(|a| {
            vectors
                .iter()
                .map(|b| {
                    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                    dot / (norm(a) * norm(b))
                })
                .collect()
        })
        .collect()
}

fn shingle_sets(docs: &[Vec<String>]) -> Vec<ShingleSet> {
    docs.iter()
        .map(|d| shingles(&TokenStream::new(d.clone()), 3).unwrap())
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let docs = family_corpus(101, 50, 5, 500);
    let streams: Vec<TokenStream> = docs.iter().map(|d| TokenStream::new(d.clone())).collect();
    let model = fit_tfidf::<f64>(&streams).map_err(|e| e.to_string())?;
    let vecs: Vec<_> = streams.iter().map(|s| model.vectorize(s)).collect();
    let sets = shingle_sets(&docs);
    let sigs: Vec<_> = sets
        .iter()
        .map(|s| minhash(s, 128, 0xACCE).unwrap())
        .collect();
    let oracle = dense_cosines(&docs);

    let (mut max_dev, mut within, mut pairs, mut spread) =
        (0.0f64, 0usize, 0usize, BTreeSet::new());
    for i in 0..docs.len() {
        for j in i + 1..docs.len() {
            max_dev = max_dev.max((cosine(&vecs[i], &vecs[j]) - oracle[i][j]).abs());
            let exact = sets[i].jaccard(&sets[j]);
            let est = jaccard_estimate(&sigs[i], &sigs[j]).unwrap();
            let bound = 3.0 * (exact * (1.0 - exact) / 128.0).sqrt();
            pairs += 1;
            if (est - exact).abs() <= bound {
                within += 1;
            }
            spread.insert((exact * 10.0) as u32);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let share = within as f64 / pairs as f64;
    ensure(max_dev <= 1e-9, || {
        format!("max |cosine - dense oracle| = {max_dev:e} > 1e-9")
    })?;
    ensure(share >= 0.95, || {
        format!(
            "only {:.1}% of MinHash estimates within 3 sigma",
            share * 100.0
        )
    })?;
    ensure(elapsed < 10.0, || format!("runtime {elapsed:.2} s >= 10 s"))?;
    ensure(spread.len() >= 5, || {
        "corpus does not span the Jaccard range".to_owned()
    })?;
    Ok(format!(
        "{pairs} pairs, max |dcos| = {max_dev:.1e}, {:.1}% of estimates within 3 sigma, {elapsed:.2} s",
        share * 100.0
    ))
}

fn criterion_2() -> Outcome {
    let (mut high_pairs, mut found) = (0usize, 0usize);
    for trial in 0..20u64 {
        let mut rng = common::rng(200 + trial);
        let pool = common::word_pool(&mut rng, 3000);
        let mut docs = Vec::new();
        for _ in 0..8 {
            let base = common::draw(&mut rng, &pool, 300);
            for _ in 0..4 {
                let rate = rng.random_range(0.0..0.12);
                docs.push(common::mutate(&mut rng, &base, &pool, rate));
            }
        }
        let sets = shingle_sets(&docs);
        let seed = rng.random::<u64>();
        let sigs: BTreeMap<String, _> = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (format!("d{i:02}"), minhash(s, 128, seed).unwrap()))
            .collect();
        let index = build_lsh(&sigs, 32, 4).map_err(|e| e.to_string())?;
        let candidates = index.candidate_pairs();
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                if sets[i].jaccard(&sets[j]) >= 0.75 {
                    high_pairs += 1;
                    if candidates.contains(&(format!("d{i:02}"), format!("d{j:02}"))) {
                        found += 1;
                    }
                }
            }
        }
    }
    ensure(high_pairs > 0, || {
        "no pairs at Jaccard >= 0.75 were generated".to_owned()
    })?;
    ensure(found == high_pairs, || {
        format!("recall {found}/{high_pairs}")
    })?;
    Ok(format!(
        "recall {found}/{high_pairs} over 20 trials (b=32, r=4)"
    ))
}

fn criterion_3() -> Outcome {
    use SimilarityLevel::*;
    let cases = [
        (0.29, Noise),
        (0.30, Low),
        (0.449, Low),
        (0.45, Medium),
        (0.65, Medium),
        (0.749, Medium),
        (0.75, High),
        (0.80, Copy),
        (0.82, Copy),
    ];
    let t = ThresholdConfig::default();
    for (score, want) in cases {
        let got = classify_level(score, &t).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("{score} -> {got}, expected {want}"))?;
    }
    Ok(format!("{} band edges classified exactly", cases.len()))
}

fn criterion_4() -> Outcome {
    let scores = common::grade_fixture();
    let headline = vec![0.0; scores.len()];
    let stats =
        cohort_stats(&scores, &headline, &StatsOptions::default()).map_err(|e| e.to_string())?;

    let v = common::GRADE_VECTOR.to_vec();
    let oracle_mean = v.iter().mean();
    let oracle_std = v.iter().population_std_dev();
    let oracle_median = Data::new(v.clone()).median();
    ensure((oracle_mean - 72.9).abs() <= 0.05, || {
        format!("oracle mean {oracle_mean}")
    })?;
    ensure((oracle_std - 26.8).abs() <= 0.05, || {
        format!("oracle std {oracle_std}")
    })?;
    ensure(oracle_median == 88.0, || {
        format!("oracle median {oracle_median}")
    })?;

    ensure((stats.mean - oracle_mean).abs() <= 1e-12, || {
        format!("mean {} vs oracle {oracle_mean}", stats.mean)
    })?;
    ensure((stats.std - oracle_std).abs() <= 1e-12, || {
        format!("std {} vs oracle {oracle_std}", stats.std)
    })?;
    ensure(stats.median == 88.0, || format!("median {}", stats.median))?;
    ensure(stats.count_ge_90 == 13, || {
        format!("{} at or above 90", stats.count_ge_90)
    })?;
    ensure(stats.count_ge_60 == 18, || {
        format!("{} at or above 60", stats.count_ge_60)
    })?;
    ensure(stats.count_invalid == 6, || {
        format!("{} invalid", stats.count_invalid)
    })?;
    ensure(format!("{:.1}", stats.mean) == "72.9", || {
        format!("mean renders as {:.1}", stats.mean)
    })?;
    ensure(format!("{:.1}", stats.std) == "26.8", || {
        format!("std renders as {:.1}", stats.std)
    })?;
    Ok(format!(
        "n=27 mean {:.4} std {:.4} (population) median {} >=90: {} >=60: {} invalid: {}",
        stats.mean,
        stats.std,
        stats.median,
        stats.count_ge_90,
        stats.count_ge_60,
        stats.count_invalid
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = common::rng(5);
    let ev_cfg = EvidenceConfig::default();
    let rub = RubricConfig::default();
    let mut worst = 0.0f64;
    let mut cohorts = 0;
    for _ in 0..200 {
        let n = rng.random_range(1..=40);
        let mut scores = Vec::with_capacity(n);
        for _ in 0..n {
            let minutes = rng.random_range(120..=200);
            let text = common::transcript(
                "2025-05-01",
                8 * 60,
                minutes,
                10,
                &["idr", "hietograma", "scs-cn"],
            );
            let ev = transcript_evidence(Some(&text), &ev_cfg);
            let marks = ManualMarks::new(
                rng.random_range(0.0..=20.0),
                rng.random_range(0.0..=35.0),
                rng.random_range(0.0..=15.0),
            );
            let r4 = score_r4(
                rng.random_range(0.0..=1.0),
                marks.r4_review_answers_quality,
                false,
                0,
                &rub,
            );
            let score =
                combine(score_r1(&ev, &rub), &marks, r4, &ev, &rub).map_err(|e| e.to_string())?;
            ensure(score.valid, || {
                "generated submission unexpectedly invalid".to_owned()
            })?;
            scores.push(score);
        }
        let stats = cohort_stats(&scores, &vec![0.0; n], &StatsOptions::default())
            .map_err(|e| e.to_string())?;
        worst = worst.max((stats.mean - stats.component_means.sum()).abs());
        cohorts += 1;
    }
    ensure(worst <= 1e-9, || {
        format!("max |mean - sum of component means| = {worst:e}")
    })?;
    Ok(format!(
        "{cohorts} valid cohorts, max |mean - sum(component means)| = {worst:.1e}"
    ))
}

fn criterion_6() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let plan = common::write_phase1_cohort(dir.path(), 7);
    let report = run_audit(dir.path(), &Config::default()).map_err(|e| e.to_string())?;
    let n = report.rows.len();
    let present = report.rows.iter().filter(|r| r.evidence.present).count();
    let copies: Vec<(String, String)> = report
        .copy_pairs()
        .into_iter()
        .map(|(a, b)| (a.to_owned(), b.to_owned()))
        .collect();
    let medium: BTreeSet<&str> = report
        .pairwise
        .iter()
        .filter(|f| f.level == SimilarityLevel::Medium)
        .flat_map(|f| [f.id_a.as_str(), f.id_b.as_str()])
        .collect();
    let placeholders = report
        .rows
        .iter()
        .filter(|r| r.evidence.certain_placeholders() > 0)
        .count();
    let numeric = report
        .rows
        .iter()
        .filter(|r| r.evidence.numeric_exercise.is_some())
        .count();
    let seventeen = report
        .rows
        .iter()
        .find(|r| r.evidence.present)
        .map(|r| r.evidence.raw_duration_min);

    ensure(n == 23, || format!("{n} submissions"))?;
    ensure(report.pass_count() == 0, || {
        format!("pass count {}", report.pass_count())
    })?;
    ensure(present == 1, || format!("transcript share {present}/{n}"))?;
    ensure(seventeen == Some(17), || {
        format!("transcript duration {seventeen:?}")
    })?;
    ensure(copies == plan.copy_pairs, || {
        format!("copy-level pairs {copies:?}")
    })?;
    ensure(medium.len() >= 9, || {
        format!("{} students in medium findings", medium.len())
    })?;
    ensure(placeholders >= 5, || {
        format!("placeholders in {placeholders} reports")
    })?;
    ensure(numeric == 3, || format!("{numeric} numeric exercises read"))?;
    Ok(format!(
        "pass 0/{n}, transcripts {present}/{n} (17 min), copy pairs {}, {} students at medium, placeholders in {placeholders}, numeric {numeric}",
        copies.len(),
        medium.len()
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = common::rng(7);
    let ev_cfg = EvidenceConfig::default();
    let rub = RubricConfig::default();
    let marks = ManualMarks::new(20.0, 35.0, 15.0);
    let (mut absent, mut short, mut long_raw) = (0, 0, 0);
    for _ in 0..1000 {
        let text = if rng.random_bool(0.4) {
            absent += 1;
            None
        } else {
            let mut t = String::from("[2025-06-01 08:00] Usuario: idr\n");
            let (mut at, mut capped) = (8 * 60u32, 0u32);
            let widest = rng.random_range(5..=90u32);
            loop {
                let gap = rng.random_range(1..=widest);
                if capped + gap.min(15) >= 120 {
                    break;
                }
                capped += gap.min(15);
                at += gap;
                t.push_str(&format!(
                    "[{:02}:{:02}] Asistente: hietograma\n",
                    (at / 60) % 24,
                    at % 60
                ));
            }
            short += 1;
            Some(t)
        };
        let ev = transcript_evidence(text.as_deref(), &ev_cfg);
        if ev.raw_duration_min >= 120 {
            long_raw += 1;
        }
        let r4 = score_r4(0.0, 15.0, false, 0, &rub);
        let score =
            combine(score_r1(&ev, &rub), &marks, r4, &ev, &rub).map_err(|e| e.to_string())?;
        ensure(!score.valid && !score.pass, || {
            format!(
                "valid={} pass={} at capped {} min",
                score.valid, score.pass, ev.capped_duration_min
            )
        })?;
    }
    Ok(format!(
        "1000 submissions ({absent} absent, {short} short, {long_raw} with raw >= 120 but capped < 120): all invalid, none pass"
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = common::rng(8);
    for _ in 0..100 {
        let p: f64 = rng.random_range(0.0..1000.0);
        let q = scs_cn_runoff(p, 100.0).map_err(|e| e.to_string())?;
        ensure(q == p, || format!("Q({p}, 100) = {q}"))?;
    }
    let (mut zero_checks, mut mono_checks) = (0, 0);
    let grid_p: Vec<f64> = (0..50).map(|i| i as f64 * 6.0).collect();
    let grid_cn: Vec<f64> = (0..50).map(|i| 30.0 + i as f64 * 70.0 / 49.0).collect();
    for &cn in &grid_cn {
        let s = 25400.0 / cn - 254.0;
        for &p in &grid_p {
            let q = scs_cn_runoff(p, cn).unwrap();
            if p <= 0.2 * s {
                ensure(q == 0.0, || format!("Q({p}, {cn}) = {q} below abstraction"))?;
                zero_checks += 1;
            }
        }
    }
    for (i, &cn) in grid_cn.iter().enumerate() {
        for (j, &p) in grid_p.iter().enumerate() {
            let q = scs_cn_runoff(p, cn).unwrap();
            if j > 0 {
                let prev = scs_cn_runoff(grid_p[j - 1], cn).unwrap();
                ensure(q >= prev, || format!("not monotone in P at CN {cn}, P {p}"))?;
                mono_checks += 1;
            }
            if i > 0 {
                let prev = scs_cn_runoff(p, grid_cn[i - 1]).unwrap();
                ensure(q >= prev, || {
                    format!("not monotone in CN at CN {cn}, P {p}")
                })?;
                mono_checks += 1;
            }
        }
    }
    let oracle: f64 = 388129.0 / 9435.0;
    let q: f64 = scs_cn_runoff(100.0, 75.0).unwrap();
    ensure((q - oracle).abs() <= 1e-6, || {
        format!("Q(100, 75) = {q}, oracle {oracle}")
    })?;
    Ok(format!(
        "Q(P,100)=P x100, {zero_checks} below-abstraction zeros, {mono_checks} monotonicity checks, Q(100,75) = {q:.6}"
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = common::rng(9);
    let fragments: [&[u8]; 8] = [
        b"[2025-01-01 10:00] Usuario: ",
        b"[23:59] Asistente: ",
        b"[00:01] IA: ",
        b"[2025-02-30 10:00] Usuario: ",
        b"[25:61] X: ",
        b"\n",
        b"\xc3\xa1\xff\xfe",
        b"]: [",
    ];
    for case in 0..10_000 {
        let len = rng.random_range(0..400);
        let mut bytes = Vec::with_capacity(len);
        while bytes.len() < len {
            if rng.random_bool(0.2) {
                bytes.extend_from_slice(fragments[rng.random_range(0..fragments.len())]);
            } else {
                bytes.push(rng.random());
            }
        }
        let text = String::from_utf8_lossy(&bytes).into_owned();
        let parsed = catch_unwind(AssertUnwindSafe(|| {
            let t = parse_transcript(&text);
            let d = session_duration(&t, 15);
            (t, d)
        }));
        let Ok((t, (raw, capped))) = parsed else {
            return Err(format!("panic on case {case}: {text:?}"));
        };
        let lines = text.lines().count();
        ensure(capped <= raw, || {
            format!("case {case}: capped {capped} > raw {raw}")
        })?;
        let mut prev = 0;
        for m in &t.messages {
            ensure(!m.text.trim().is_empty(), || {
                format!("case {case}: empty message")
            })?;
            ensure(m.line > prev && m.line <= lines, || {
                format!("case {case}: bad line {}", m.line)
            })?;
            prev = m.line;
        }
    }
    let t = parse_transcript(&common::seventeen_minute_transcript());
    let (raw, _) = session_duration(&t, 15);
    ensure(raw == 17, || format!("17-minute fixture reports {raw}"))?;
    Ok(
        "10000 random inputs parsed without panic, all well-formed; fixture duration 17 min"
            .to_owned(),
    )
}

fn criterion_10() -> Outcome {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/demo_cohort");
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let out = tempfile::tempdir().map_err(|e| e.to_string())?;
        let code = cmd_audit(&root, None, Some(out.path()), false, &mut Vec::new())
            .map_err(|e| e.to_string())?;
        ensure(code == 0, || format!("demo cohort exit code {code}"))?;
        outputs.push(std::fs::read(out.path().join("report.json")).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || {
        "report.json differs between runs".to_owned()
    })?;
    Ok(format!(
        "two runs produced identical report.json ({} bytes)",
        outputs[0].len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("similarity oracle equivalence", criterion_1),
        ("LSH recall at Jaccard >= 0.75", criterion_2),
        ("threshold classifier band edges", criterion_3),
        ("27-entry statistics fixture", criterion_4),
        ("component-mean linearity", criterion_5),
        ("23-submission failure profile", criterion_6),
        ("eliminatory dominance", criterion_7),
        ("SCS-CN properties", criterion_8),
        ("transcript fuzz", criterion_9),
        ("determinism", criterion_10),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(run).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
