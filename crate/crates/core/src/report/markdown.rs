use std::fmt::Write;

use super::{CohortReport, StudentRow};
use crate::similarity::SimilarityLevel;

fn scaled(value: f64, scale_10: bool) -> String {
    if scale_10 {
        format!("{:.2}", value / 10.0)
    } else {
        format!("{value:.1}")
    }
}

fn evidence_cell(row: &StudentRow) -> String {
    let ev = &row.evidence;
    if !ev.present {
        return "no transcript".to_owned();
    }
    let modules: Vec<String> = ev.modules_covered.iter().map(|m| m.to_string()).collect();
    let modules = if modules.is_empty() {
        "no modules".to_owned()
    } else {
        modules.join(",")
    };
    format!(
        "{} min (capped {}), {} msgs, {}",
        ev.raw_duration_min, ev.capped_duration_min, ev.message_count, modules
    )
}

fn notes_cell(row: &StudentRow) -> String {
    let mut notes: Vec<String> = row.score.invalidation_reasons.clone();
    notes.extend(row.flags.iter().cloned());
    notes.join("; ").replace('|', "\\|")
}

/// Human-readable report: cohort statistics, one row per student, pairwise
/// flags at `medium` and above (omitted for single-student cohorts), and
/// the conventions in force.
pub fn emit_markdown(report: &CohortReport) -> String {
    let s = &report.stats;
    let sc = report.scale_10;
    let scale_label = if sc { "/10" } else { "/100" };
    let mut out = String::new();

    let _ = writeln!(out, "# Cohort audit report\n");
    let _ = writeln!(out, "## Cohort statistics\n");
    let _ = writeln!(out, "| Metric | Value |");
    let _ = writeln!(out, "|---|---|");
    let _ = writeln!(out, "| Students | {} |", s.n);
    let _ = writeln!(out, "| Mean | {} {scale_label} |", scaled(s.mean, sc));
    let _ = writeln!(
        out,
        "| Standard deviation ({:?}) | {} |",
        report.stats_options.std,
        scaled(s.std, sc)
    );
    let _ = writeln!(out, "| Median | {} {scale_label} |", scaled(s.median, sc));
    let pct = |k: usize| 100.0 * k as f64 / s.n as f64;
    let _ = writeln!(
        out,
        "| Totals >= 90/100 | {} of {} ({:.1}%) |",
        s.count_ge_90,
        s.n,
        pct(s.count_ge_90)
    );
    let _ = writeln!(
        out,
        "| Totals >= 60/100 | {} of {} ({:.1}%) |",
        s.count_ge_60,
        s.n,
        pct(s.count_ge_60)
    );
    let _ = writeln!(out, "| Passing | {} of {} |", report.pass_count(), s.n);
    let _ = writeln!(out, "| Invalidated | {} |", s.count_invalid);
    let _ = writeln!(
        out,
        "| Headline similarity >= medium | {:.1}% |",
        100.0 * s.share_sim_ge_medium
    );
    let c = &s.component_means;
    let _ = writeln!(
        out,
        "| Component means R1/R2/R3/R4 | {:.2} / {:.2} / {:.2} / {:.2} |\n",
        c.r1, c.r2, c.r3, c.r4
    );

    let _ = writeln!(out, "## Students\n");
    let _ = writeln!(
        out,
        "| Student | Total | Pass | R1 | R2 | R3 | R4 | Evidence | Headline similarity | Notes |"
    );
    let _ = writeln!(out, "|---|---|---|---|---|---|---|---|---|---|");
    for row in &report.rows {
        let sc_ = &row.score;
        let _ = writeln!(
            out,
            "| {} | {} | {} | {:.1} | {:.1} | {:.1} | {:.1} | {} | {:.2} ({}) | {} |",
            row.student_id,
            scaled(sc_.total, sc),
            if sc_.pass { "yes" } else { "no" },
            sc_.r1,
            sc_.r2,
            sc_.r3,
            sc_.r4,
            evidence_cell(row),
            row.headline_similarity,
            row.headline_level,
            notes_cell(row),
        );
    }
    out.push('\n');

    if report.rows.len() >= 2 {
        let _ = writeln!(out, "## Pairwise flags\n");
        let flagged: Vec<_> = report
            .pairwise
            .iter()
            .filter(|f| f.level >= SimilarityLevel::Medium)
            .collect();
        if flagged.is_empty() {
            let _ = writeln!(out, "No pairs at medium level or above.\n");
        } else {
            let _ = writeln!(
                out,
                "| Student A | Student B | Scope | Cosine | Jaccard (est.) | Level |"
            );
            let _ = writeln!(out, "|---|---|---|---|---|---|");
            for f in flagged {
                let cos = f.cosine.map_or("-".to_owned(), |c| format!("{c:.3}"));
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {:.3} | {} |",
                    f.id_a,
                    f.id_b,
                    f.scope.as_str(),
                    cos,
                    f.jaccard_est,
                    f.level
                );
            }
            out.push('\n');
        }
    }

    let _ = writeln!(out, "## Notes\n");
    for (i, note) in report.conventions.iter().enumerate() {
        let _ = writeln!(out, "{}. {}", i + 1, note);
    }
    for w in &report.warnings {
        let _ = writeln!(out, "- warning: {w}");
    }
    out
}
