//! End-to-end audit of one cohort directory.

use std::path::{Path, PathBuf};

use log::{info, warn};

use crate::config::Config;
use crate::error::{AuditError, Result};
use crate::evidence::build_evidence;
use crate::ingest::{load_cohort, Roster, ZoneLabel};
use crate::report::{CohortReport, StudentRow};
use crate::rubric::{combine, load_marks, score_r1, score_r4, ManualMarks};
use crate::similarity::{
    classify_level, headline_similarity, pairwise_audit, personal_zone_max, SimilarityLevel,
};

pub const DEFAULT_ROSTER_FILE: &str = "roster.tsv";

fn roster_path(root: &Path, config: &Config) -> Option<PathBuf> {
    match &config.roster {
        Some(p) => Some(config.resolve(p)),
        None => {
            let p = root.join(DEFAULT_ROSTER_FILE);
            p.is_file().then_some(p)
        }
    }
}

fn conventions(config: &Config) -> Vec<String> {
    let gap = if config.gap_cap == 0 {
        "Interaction time is the raw span between first and last stamped message.".to_owned()
    } else {
        format!(
            "Interaction time sums gaps between stamped messages, each capped at {} min.",
            config.gap_cap
        )
    };
    let std = match config.std {
        crate::report::StdConvention::Population => "population (divide by n)",
        crate::report::StdConvention::Sample => "sample (divide by n-1)",
    };
    let totals = match config.invalid_totals {
        crate::report::InvalidTotals::Nominal => {
            "invalidated submissions enter statistics at their component sum"
        }
        crate::report::InvalidTotals::Zero => "invalidated submissions enter statistics at 0",
    };
    vec![
        gap,
        format!("Standard deviation is {std}; {totals}."),
        "Headline similarity is the highest full-document cosine against any other student."
            .to_owned(),
        "Similarity findings are advisory and require human review.".to_owned(),
    ]
}

pub fn run_audit(root: &Path, config: &Config) -> Result<CohortReport> {
    let roster = match roster_path(root, config) {
        Some(p) => Roster::load(&p)?,
        None => Roster::default(),
    };
    let mut warnings = Vec::new();
    if roster.is_empty() {
        warnings.push("no roster provided; identity checks disabled".to_owned());
    }

    let cohort = load_cohort(root, &roster, &config.ingest_config()?)?;
    warnings.extend(cohort.warnings);
    if cohort.submissions.is_empty() {
        return Err(AuditError::invalid(format!(
            "no submissions found under {}",
            root.display()
        )));
    }
    info!("loaded {} submissions", cohort.submissions.len());

    let textprep = config.textprep_config()?;
    let sim = config.similarity_config();
    let findings = pairwise_audit(&cohort.submissions, &textprep, &sim)?;
    let ev_cfg = config.evidence_config()?;
    let rub_cfg = config.rubric_config();

    let mut rows = Vec::with_capacity(cohort.submissions.len());
    for sub in &cohort.submissions {
        let id = sub.student_id.as_str();
        let ev = build_evidence(sub, &roster, &ev_cfg);
        let (manual, pending) = match load_marks(&sub.source_dir)? {
            Some(m) => (m, false),
            None => (ManualMarks::zero(), true),
        };
        let headline = headline_similarity(&findings, id);
        let personal = personal_zone_max(&findings, id);
        let r1 = score_r1(&ev, &rub_cfg);
        let r4 = score_r4(
            personal,
            manual.r4_review_answers_quality,
            !ev.foreign_identities.is_empty(),
            ev.certain_placeholders(),
            &rub_cfg,
        );
        let score = combine(r1, &manual, r4, &ev, &rub_cfg)?;

        let mut flags = Vec::new();
        if sub.unreadable {
            flags.push("report unreadable".to_owned());
        }
        if !sub.report.has_zone(ZoneLabel::PersonalNumeric)
            && !sub.report.has_zone(ZoneLabel::PersonalReviewAnswers)
        {
            flags.push("no personal zones detected".to_owned());
        }
        if pending {
            flags.push("pending manual review".to_owned());
        }
        match &ev.numeric_exercise {
            None => flags.push("numeric exercise not machine-checkable".to_owned()),
            Some(c) if !c.pass => flags.push(format!(
                "numeric exercise mismatch: claimed {:.2} mm, computed {:.2} mm",
                c.claimed_runoff_mm, c.computed_runoff_mm
            )),
            Some(_) => {}
        }
        for f in &ev.foreign_identities {
            flags.push(format!("transcript names {}", f.other_student_id));
        }
        let certain = ev.certain_placeholders();
        if certain > 0 {
            flags.push(format!("{certain} unfilled placeholder(s)"));
        }
        for f in findings
            .iter()
            .filter(|f| f.level == SimilarityLevel::Copy && f.involves(id))
        {
            let other = if f.id_a == id { &f.id_b } else { &f.id_a };
            let flag = format!("copy-level similarity with {other}");
            if !flags.contains(&flag) {
                flags.push(flag);
            }
        }
        if !score.valid {
            warn!(
                "{id}: invalidated ({})",
                score.invalidation_reasons.join("; ")
            );
        }

        rows.push(StudentRow {
            student_id: sub.student_id.clone(),
            headline_level: classify_level(headline, &sim.thresholds)?,
            score,
            evidence: ev,
            headline_similarity: headline,
            personal_zone_max_similarity: personal,
            pending_manual_review: pending,
            flags,
        });
    }

    CohortReport::assemble(
        rows,
        findings,
        config.stats_options(),
        config.echo(),
        warnings,
        conventions(config),
    )
}
