//! Cohort text similarity.
//!
//! Whole reports are compared with TF-IDF cosine. The personal zones
//! (numeric exercise, review answers) are compared with MinHash estimates
//! over token shingles, restricted to LSH candidate pairs. Every score is
//! mapped onto the noise/low/medium/high/copy bands; the bands only
//! prioritize human review.

mod levels;
mod lsh;
mod minhash;
mod tfidf;

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{AuditError, Result};
use crate::ingest::{Submission, ZoneLabel};
use crate::textprep::{normalize, shingles, TextPrepConfig, DEFAULT_SHINGLE_K};

pub use levels::{classify_level, SimilarityLevel, ThresholdConfig};
pub use lsh::{band_key, build_lsh, candidate_pairs, lsh_threshold, LshIndex};
pub use minhash::{jaccard_estimate, minhash, MinHashSignature, MinHasher, EMPTY_ROW};
pub use tfidf::{cosine, fit_tfidf, TfIdfModel, TfIdfVector};

pub const DEFAULT_SEED: u64 = 0x00C0_4A0D_17A0_D175;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityConfig {
    pub thresholds: ThresholdConfig,
    pub hash_count: usize,
    pub bands: usize,
    pub rows: usize,
    pub seed: u64,
    pub shingle_k: usize,
    /// Above this many documents, full-document cosine is computed only for
    /// LSH candidate pairs instead of all pairs.
    pub brute_force_cap: usize,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        SimilarityConfig {
            thresholds: ThresholdConfig::default(),
            hash_count: 128,
            bands: 32,
            rows: 4,
            seed: DEFAULT_SEED,
            shingle_k: DEFAULT_SHINGLE_K,
            brute_force_cap: 500,
        }
    }
}

impl SimilarityConfig {
    pub fn validate(&self) -> Result<()> {
        self.thresholds.validate()?;
        if self.hash_count == 0 {
            return Err(AuditError::invalid("minhash.H must be positive"));
        }
        if self.bands * self.rows != self.hash_count {
            return Err(AuditError::invalid(format!(
                "lsh.bands x lsh.rows = {} must equal minhash.H = {}",
                self.bands * self.rows,
                self.hash_count
            )));
        }
        if self.shingle_k == 0 {
            return Err(AuditError::invalid("shingle width must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    FullDocument,
    PersonalNumeric,
    PersonalReviewAnswers,
}

impl Scope {
    pub const PERSONAL: [Scope; 2] = [Scope::PersonalNumeric, Scope::PersonalReviewAnswers];

    pub fn zone(self) -> Option<ZoneLabel> {
        match self {
            Scope::FullDocument => None,
            Scope::PersonalNumeric => Some(ZoneLabel::PersonalNumeric),
            Scope::PersonalReviewAnswers => Some(ZoneLabel::PersonalReviewAnswers),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scope::FullDocument => "full_document",
            Scope::PersonalNumeric => "personal_numeric",
            Scope::PersonalReviewAnswers => "personal_review_answers",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityFinding {
    /// `id_a < id_b`.
    pub id_a: String,
    pub id_b: String,
    pub scope: Scope,
    /// Only for `full_document`.
    pub cosine: Option<f64>,
    pub jaccard_est: f64,
    pub level: SimilarityLevel,
}

impl SimilarityFinding {
    /// The score the level was derived from: cosine for whole documents,
    /// the MinHash estimate for personal zones.
    pub fn governing_score(&self) -> f64 {
        self.cosine.unwrap_or(self.jaccard_est)
    }

    pub fn involves(&self, id: &str) -> bool {
        self.id_a == id || self.id_b == id
    }
}

fn canonical(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_owned(), b.to_owned())
    } else {
        (b.to_owned(), a.to_owned())
    }
}

/// Pairwise comparison of a cohort. Noise-level findings are kept; callers
/// decide what to display. The result is sorted by `(id_a, id_b, scope)`.
pub fn pairwise_audit(
    cohort: &[Submission],
    prep: &TextPrepConfig,
    config: &SimilarityConfig,
) -> Result<Vec<SimilarityFinding>> {
    config.validate()?;
    let mut seen = HashSet::new();
    for s in cohort {
        if !seen.insert(s.student_id.as_str()) {
            return Err(AuditError::invalid(format!(
                "duplicate student id `{}`",
                s.student_id
            )));
        }
    }
    if cohort.len() < 2 {
        return Ok(Vec::new());
    }

    let hasher = MinHasher::new(config.hash_count, config.seed)?;
    let mut findings = full_document_findings(cohort, prep, config, &hasher)?;
    for scope in Scope::PERSONAL {
        findings.extend(zone_findings(cohort, scope, prep, config, &hasher)?);
    }
    findings.sort_by(|x, y| (&x.id_a, &x.id_b, x.scope).cmp(&(&y.id_a, &y.id_b, y.scope)));
    Ok(findings)
}

fn signatures_for(
    ids: &[&str],
    streams: &[crate::textprep::TokenStream],
    k: usize,
    hasher: &MinHasher,
) -> Result<BTreeMap<String, MinHashSignature>> {
    let sigs = streams
        .par_iter()
        .map(|s| shingles(s, k).map(|set| hasher.sign(&set)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ids.iter().map(|s| s.to_string()).zip(sigs).collect())
}

fn full_document_findings(
    cohort: &[Submission],
    prep: &TextPrepConfig,
    config: &SimilarityConfig,
    hasher: &MinHasher,
) -> Result<Vec<SimilarityFinding>> {
    let ids: Vec<&str> = cohort.iter().map(|s| s.student_id.as_str()).collect();
    let streams: Vec<_> = cohort
        .par_iter()
        .map(|s| normalize(&s.report.raw_text, prep).with_source(s.student_id.clone(), None))
        .collect();
    let model: TfIdfModel<f64> = fit_tfidf(&streams)?;
    let vectors: Vec<_> = streams.par_iter().map(|s| model.vectorize(s)).collect();
    let sigs = signatures_for(&ids, &streams, config.shingle_k, hasher)?;
    let index_of: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();

    let pairs: Vec<(usize, usize)> = if cohort.len() <= config.brute_force_cap {
        (0..ids.len())
            .flat_map(|i| (i + 1..ids.len()).map(move |j| (i, j)))
            .collect()
    } else {
        build_lsh(&sigs, config.bands, config.rows)?
            .candidate_pairs()
            .into_iter()
            .map(|(a, b)| (index_of[a.as_str()], index_of[b.as_str()]))
            .collect()
    };

    pairs
        .into_par_iter()
        .map(|(i, j)| {
            let c = cosine(&vectors[i], &vectors[j]);
            let jac = jaccard_estimate(&sigs[ids[i]], &sigs[ids[j]])?;
            let (id_a, id_b) = canonical(ids[i], ids[j]);
            Ok(SimilarityFinding {
                id_a,
                id_b,
                scope: Scope::FullDocument,
                cosine: Some(c),
                jaccard_est: jac,
                level: classify_level(c, &config.thresholds)?,
            })
        })
        .collect()
}

fn zone_findings(
    cohort: &[Submission],
    scope: Scope,
    prep: &TextPrepConfig,
    config: &SimilarityConfig,
    hasher: &MinHasher,
) -> Result<Vec<SimilarityFinding>> {
    let label = scope.zone().expect("personal scope has a zone");
    let with_zone: Vec<&Submission> = cohort.iter().filter(|s| s.report.has_zone(label)).collect();
    let ids: Vec<&str> = with_zone.iter().map(|s| s.student_id.as_str()).collect();
    let streams: Vec<_> = with_zone
        .par_iter()
        .map(|s| {
            normalize(&s.report.zone_text(label), prep)
                .with_source(s.student_id.clone(), Some(label))
        })
        .collect();
    let sigs = signatures_for(&ids, &streams, config.shingle_k, hasher)?;
    let index = build_lsh(&sigs, config.bands, config.rows)?;

    index
        .candidate_pairs()
        .into_iter()
        .map(|(a, b)| {
            let jac = jaccard_estimate(&sigs[&a], &sigs[&b])?;
            Ok(SimilarityFinding {
                id_a: a,
                id_b: b,
                scope,
                cosine: None,
                jaccard_est: jac,
                level: classify_level(jac, &config.thresholds)?,
            })
        })
        .collect()
}

/// A student's headline similarity: the highest full-document cosine
/// against any other student (0 when there is none).
pub fn headline_similarity(findings: &[SimilarityFinding], student_id: &str) -> f64 {
    findings
        .iter()
        .filter(|f| f.scope == Scope::FullDocument && f.involves(student_id))
        .filter_map(|f| f.cosine)
        .fold(0.0, f64::max)
}

/// Highest MinHash estimate over the student's personal-zone findings.
pub fn personal_zone_max(findings: &[SimilarityFinding], student_id: &str) -> f64 {
    findings
        .iter()
        .filter(|f| f.scope != Scope::FullDocument && f.involves(student_id))
        .map(|f| f.jaccard_est)
        .fold(0.0, f64::max)
}
