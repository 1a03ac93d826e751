//! Flat `key=value` configuration.
//!
//! One setting per line, `#` starts a comment line, UTF-8. Every key has a
//! default and an unknown key is an error. Relative paths are resolved
//! against the directory of the config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{AuditError, Result};
use crate::evidence::{EvidenceConfig, ModuleMarkers, DEFAULT_TOPIC_MARKERS};
use crate::ingest::{
    IngestConfig, ZoneLabel, ZoneMarkerConfig, DEFAULT_NUMERIC_MARKER, DEFAULT_REVIEW_MARKER,
    DEFAULT_TUTOR_MARKER,
};
use crate::report::{InvalidTotals, StatsOptions, StdConvention};
use crate::rubric::RubricConfig;
use crate::similarity::{SimilarityConfig, ThresholdConfig, DEFAULT_SEED};
use crate::textprep::{StopWords, TextPrepConfig, DEFAULT_SHINGLE_K};

pub const SEED_ENV: &str = "COHORT_AUDIT_SEED";

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub thresholds: ThresholdConfig,
    pub hash_count: usize,
    pub bands: usize,
    pub rows: usize,
    pub seed: u64,
    pub shingle_k: usize,
    pub brute_force_cap: usize,

    pub fold_diacritics: bool,
    pub stem: bool,
    pub stopwords: Option<PathBuf>,

    pub min_minutes: u64,
    pub gap_cap: u64,
    pub numeric_tol: f64,
    pub module_topics: [String; 5],

    pub zone_numeric: String,
    pub zone_review: String,
    pub zone_tutor: String,

    pub r1_base: f64,
    pub r1_per_module: f64,
    pub r4_originality: f64,
    pub placeholder_penalty: f64,
    pub identity_penalty: f64,
    pub numeric_fail_penalty: f64,
    pub pass_mark: f64,

    pub std: StdConvention,
    pub invalid_totals: InvalidTotals,

    pub roster: Option<PathBuf>,
    pub output: Option<PathBuf>,

    /// Directory relative paths are resolved against.
    pub base_dir: PathBuf,
}

impl Default for Config {
    fn default() -> Self {
        let sim = SimilarityConfig::default();
        let ev = EvidenceConfig::default();
        let rub = RubricConfig::default();
        Config {
            thresholds: sim.thresholds,
            hash_count: sim.hash_count,
            bands: sim.bands,
            rows: sim.rows,
            seed: DEFAULT_SEED,
            shingle_k: DEFAULT_SHINGLE_K,
            brute_force_cap: sim.brute_force_cap,
            fold_diacritics: true,
            stem: true,
            stopwords: None,
            min_minutes: ev.min_minutes,
            gap_cap: ev.gap_cap,
            numeric_tol: ev.numeric_tol,
            module_topics: DEFAULT_TOPIC_MARKERS.map(str::to_owned),
            zone_numeric: DEFAULT_NUMERIC_MARKER.to_owned(),
            zone_review: DEFAULT_REVIEW_MARKER.to_owned(),
            zone_tutor: DEFAULT_TUTOR_MARKER.to_owned(),
            r1_base: rub.r1_base,
            r1_per_module: rub.r1_per_module,
            r4_originality: rub.r4_originality_points,
            placeholder_penalty: rub.placeholder_penalty,
            identity_penalty: rub.identity_penalty,
            numeric_fail_penalty: rub.numeric_fail_penalty,
            pass_mark: rub.pass_mark,
            std: StdConvention::Population,
            invalid_totals: InvalidTotals::Nominal,
            roster: None,
            output: None,
            base_dir: PathBuf::from("."),
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| AuditError::config(key, format!("cannot parse `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(AuditError::config(
            key,
            format!("expected true/false, got `{value}`"),
        )),
    }
}

pub fn parse_seed(key: &str, value: &str) -> Result<u64> {
    let v = value.trim();
    let parsed = match v.strip_prefix("0x").or_else(|| v.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => v.parse(),
    };
    parsed.map_err(|_| AuditError::config(key, format!("seed must be a u64, got `{value}`")))
}

fn opt_path(value: &str) -> Option<PathBuf> {
    (!value.is_empty()).then(|| PathBuf::from(value))
}

fn module_index(key: &str) -> Option<usize> {
    let n: usize = key.strip_prefix("evidence.module.M")?.parse().ok()?;
    (1..=5).contains(&n).then(|| n - 1)
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(AuditError::config(
                    line,
                    format!("line {}: expected key=value", i + 1),
                ));
            };
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AuditError::io(path, e))?;
        let mut cfg = Self::parse(&text)?;
        cfg.base_dir = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .map_or_else(|| PathBuf::from("."), Path::to_path_buf);
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "sim.noise" => self.thresholds.noise = parse_num(key, value)?,
            "sim.medium" => self.thresholds.medium = parse_num(key, value)?,
            "sim.high" => self.thresholds.high = parse_num(key, value)?,
            "sim.copy" => self.thresholds.copy = parse_num(key, value)?,
            "minhash.H" => self.hash_count = parse_num(key, value)?,
            "lsh.bands" => self.bands = parse_num(key, value)?,
            "lsh.rows" => self.rows = parse_num(key, value)?,
            "seed" => self.seed = parse_seed(key, value)?,
            "shingle.k" => self.shingle_k = parse_num(key, value)?,
            "sim.brute_force_cap" => self.brute_force_cap = parse_num(key, value)?,
            "textprep.fold_diacritics" => self.fold_diacritics = parse_bool(key, value)?,
            "textprep.stem" => self.stem = parse_bool(key, value)?,
            "textprep.stopwords" => self.stopwords = opt_path(value),
            "evidence.min_minutes" => self.min_minutes = parse_num(key, value)?,
            "evidence.gap_cap" => self.gap_cap = parse_num(key, value)?,
            "evidence.numeric_tol" => self.numeric_tol = parse_num(key, value)?,
            "zones.personal_numeric" => self.zone_numeric = value.to_owned(),
            "zones.personal_review_answers" => self.zone_review = value.to_owned(),
            "zones.tutor_text" => self.zone_tutor = value.to_owned(),
            "rubric.r1_base" => self.r1_base = parse_num(key, value)?,
            "rubric.r1_per_module" => self.r1_per_module = parse_num(key, value)?,
            "rubric.r4_originality" => self.r4_originality = parse_num(key, value)?,
            "rubric.placeholder_penalty" => self.placeholder_penalty = parse_num(key, value)?,
            "rubric.identity_penalty" => self.identity_penalty = parse_num(key, value)?,
            "rubric.numeric_fail_penalty" => self.numeric_fail_penalty = parse_num(key, value)?,
            "rubric.pass_mark" => self.pass_mark = parse_num(key, value)?,
            "report.std" => {
                self.std = match value {
                    "population" => StdConvention::Population,
                    "sample" => StdConvention::Sample,
                    _ => return Err(AuditError::config(key, "expected population or sample")),
                }
            }
            "report.invalid_totals" => {
                self.invalid_totals = match value {
                    "nominal" => InvalidTotals::Nominal,
                    "zero" => InvalidTotals::Zero,
                    _ => return Err(AuditError::config(key, "expected nominal or zero")),
                }
            }
            "roster" => self.roster = opt_path(value),
            "output" => self.output = opt_path(value),
            _ => match module_index(key) {
                Some(i) => self.module_topics[i] = value.to_owned(),
                None => return Err(AuditError::config(key, "unknown key")),
            },
        }
        Ok(())
    }

    /// Applies `COHORT_AUDIT_SEED` when set.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.seed = parse_seed(SEED_ENV, &v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.thresholds
            .validate()
            .map_err(|e| AuditError::config("sim.*", e.to_string()))?;
        if self.hash_count == 0 {
            return Err(AuditError::config("minhash.H", "must be positive"));
        }
        if self.bands * self.rows != self.hash_count {
            return Err(AuditError::config(
                "lsh.bands",
                format!(
                    "lsh.bands x lsh.rows = {} but minhash.H = {}",
                    self.bands * self.rows,
                    self.hash_count
                ),
            ));
        }
        if self.shingle_k == 0 {
            return Err(AuditError::config("shingle.k", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.numeric_tol) {
            return Err(AuditError::config(
                "evidence.numeric_tol",
                "must lie in [0, 1]",
            ));
        }
        self.rubric_config().validate()?;
        self.zone_markers()?;
        self.module_markers()?;
        Ok(())
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    pub fn textprep_config(&self) -> Result<TextPrepConfig> {
        let stopwords = match &self.stopwords {
            Some(p) => StopWords::from_file(&self.resolve(p), self.fold_diacritics)?,
            None => StopWords::bundled(self.fold_diacritics),
        };
        Ok(TextPrepConfig {
            fold_diacritics: self.fold_diacritics,
            stem: self.stem,
            stopwords: Arc::new(stopwords),
        })
    }

    pub fn similarity_config(&self) -> SimilarityConfig {
        SimilarityConfig {
            thresholds: self.thresholds,
            hash_count: self.hash_count,
            bands: self.bands,
            rows: self.rows,
            seed: self.seed,
            shingle_k: self.shingle_k,
            brute_force_cap: self.brute_force_cap,
        }
    }

    fn zone_markers(&self) -> Result<ZoneMarkerConfig> {
        ZoneMarkerConfig::new(&[
            (ZoneLabel::PersonalNumeric, self.zone_numeric.as_str()),
            (ZoneLabel::PersonalReviewAnswers, self.zone_review.as_str()),
            (ZoneLabel::TutorText, self.zone_tutor.as_str()),
        ])
        .map_err(|e| AuditError::config("zones.*", e.to_string()))
    }

    fn module_markers(&self) -> Result<ModuleMarkers> {
        ModuleMarkers::new(&self.module_topics)
    }

    pub fn ingest_config(&self) -> Result<IngestConfig> {
        Ok(IngestConfig {
            markers: self.zone_markers()?,
        })
    }

    pub fn evidence_config(&self) -> Result<EvidenceConfig> {
        Ok(EvidenceConfig {
            min_minutes: self.min_minutes,
            gap_cap: self.gap_cap,
            numeric_tol: self.numeric_tol,
            modules: self.module_markers()?,
        })
    }

    pub fn rubric_config(&self) -> RubricConfig {
        RubricConfig {
            min_minutes: self.min_minutes,
            r1_base: self.r1_base,
            r1_per_module: self.r1_per_module,
            r4_originality_points: self.r4_originality,
            originality_full_below: self.thresholds.medium,
            originality_zero_at: self.thresholds.high,
            placeholder_penalty: self.placeholder_penalty,
            identity_penalty: self.identity_penalty,
            numeric_fail_penalty: self.numeric_fail_penalty,
            pass_mark: self.pass_mark,
        }
    }

    pub fn stats_options(&self) -> StatsOptions {
        StatsOptions {
            std: self.std,
            invalid_totals: self.invalid_totals,
            medium_line: self.thresholds.medium,
        }
    }

    /// Every key with its effective value, as it would be written in a
    /// config file.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let path = |p: &Option<PathBuf>| {
            p.as_ref()
                .map_or(String::new(), |p| p.display().to_string())
        };
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_owned(), v);
        };
        put("sim.noise", self.thresholds.noise.to_string());
        put("sim.medium", self.thresholds.medium.to_string());
        put("sim.high", self.thresholds.high.to_string());
        put("sim.copy", self.thresholds.copy.to_string());
        put("minhash.H", self.hash_count.to_string());
        put("lsh.bands", self.bands.to_string());
        put("lsh.rows", self.rows.to_string());
        put("seed", self.seed.to_string());
        put("shingle.k", self.shingle_k.to_string());
        put("sim.brute_force_cap", self.brute_force_cap.to_string());
        put("textprep.fold_diacritics", self.fold_diacritics.to_string());
        put("textprep.stem", self.stem.to_string());
        put("textprep.stopwords", path(&self.stopwords));
        put("evidence.min_minutes", self.min_minutes.to_string());
        put("evidence.gap_cap", self.gap_cap.to_string());
        put("evidence.numeric_tol", self.numeric_tol.to_string());
        for (i, t) in self.module_topics.iter().enumerate() {
            put(&format!("evidence.module.M{}", i + 1), t.clone());
        }
        put("zones.personal_numeric", self.zone_numeric.clone());
        put("zones.personal_review_answers", self.zone_review.clone());
        put("zones.tutor_text", self.zone_tutor.clone());
        put("rubric.r1_base", self.r1_base.to_string());
        put("rubric.r1_per_module", self.r1_per_module.to_string());
        put("rubric.r4_originality", self.r4_originality.to_string());
        put(
            "rubric.placeholder_penalty",
            self.placeholder_penalty.to_string(),
        );
        put("rubric.identity_penalty", self.identity_penalty.to_string());
        put(
            "rubric.numeric_fail_penalty",
            self.numeric_fail_penalty.to_string(),
        );
        put("rubric.pass_mark", self.pass_mark.to_string());
        put(
            "report.std",
            match self.std {
                StdConvention::Population => "population",
                StdConvention::Sample => "sample",
            }
            .to_owned(),
        );
        put(
            "report.invalid_totals",
            match self.invalid_totals {
                InvalidTotals::Nominal => "nominal",
                InvalidTotals::Zero => "zero",
            }
            .to_owned(),
        );
        put("roster", path(&self.roster));
        put("output", path(&self.output));
        m
    }
}
