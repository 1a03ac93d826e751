//! Command-line front end. Commands write to caller-supplied sinks and
//! return the process exit code.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::Config;
use crate::error::{AuditError, Result};
use crate::evidence::transcript_evidence;
use crate::ingest::{load_cohort, Roster};
use crate::pipeline::{run_audit, DEFAULT_ROSTER_FILE};
use crate::report::{emit_json, emit_markdown};
use crate::similarity::{pairwise_audit, SimilarityLevel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FLAGGED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cohort-audit",
    version,
    about = "Audit a cohort of course reports"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full audit: writes report.json and report.md.
    Audit {
        root: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory; defaults to the `output` key, then the cohort root.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Show totals on a 0-10 scale in the Markdown report.
        #[arg(long)]
        scale_10: bool,
    },
    /// Transcript evidence for a single file, as JSON.
    Evidence {
        file: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Pairwise similarity table at level `low` and above.
    Similarity {
        root: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load_config(path: Option<&Path>) -> Result<Config> {
    let mut cfg = match path {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    cfg.apply_env()?;
    Ok(cfg)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| AuditError::io(path, e))
}

fn sink(e: std::io::Error) -> AuditError {
    AuditError::io("<output>", e)
}

pub fn cmd_audit(
    root: &Path,
    config: Option<&Path>,
    out: Option<&Path>,
    scale_10: bool,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let cfg = load_config(config)?;
    let mut report = run_audit(root, &cfg)?;
    report.scale_10 = scale_10;
    let out_dir = match (out, &cfg.output) {
        (Some(o), _) => o.to_path_buf(),
        (None, Some(o)) => cfg.resolve(o),
        (None, None) => root.to_path_buf(),
    };
    std::fs::create_dir_all(&out_dir).map_err(|e| AuditError::io(&out_dir, e))?;
    write_file(&out_dir.join("report.json"), &emit_json(&report)?)?;
    write_file(
        &out_dir.join("report.md"),
        emit_markdown(&report).as_bytes(),
    )?;
    writeln!(
        stdout,
        "{} students, {} pass, {} invalidated, {} copy pair(s); mean {:.2}; reports in {}",
        report.rows.len(),
        report.pass_count(),
        report.rows.iter().filter(|r| !r.score.valid).count(),
        report.copy_pairs().len(),
        report.stats.mean,
        out_dir.display()
    )
    .map_err(sink)?;
    Ok(report.exit_code())
}

pub fn cmd_evidence(file: &Path, config: Option<&Path>, stdout: &mut dyn Write) -> Result<i32> {
    let cfg = load_config(config)?;
    let text = std::fs::read_to_string(file).map_err(|e| AuditError::io(file, e))?;
    let ev = transcript_evidence(Some(&text), &cfg.evidence_config()?);
    let mut json = serde_json::to_string_pretty(&ev)?;
    json.push('\n');
    stdout.write_all(json.as_bytes()).map_err(sink)?;
    Ok(EXIT_OK)
}

pub fn cmd_similarity(root: &Path, config: Option<&Path>, stdout: &mut dyn Write) -> Result<i32> {
    let cfg = load_config(config)?;
    let roster_file = cfg
        .roster
        .as_ref()
        .map(|p| cfg.resolve(p))
        .or_else(|| Some(root.join(DEFAULT_ROSTER_FILE)).filter(|p| p.is_file()));
    let roster = match roster_file {
        Some(p) => Roster::load(&p)?,
        None => Roster::default(),
    };
    let cohort = load_cohort(root, &roster, &cfg.ingest_config()?)?;
    let findings = pairwise_audit(
        &cohort.submissions,
        &cfg.textprep_config()?,
        &cfg.similarity_config(),
    )?;
    writeln!(stdout, "id_a\tid_b\tscope\tcosine\tjaccard_est\tlevel").map_err(sink)?;
    let mut copy = false;
    for f in findings.iter().filter(|f| f.level > SimilarityLevel::Noise) {
        copy |= f.level == SimilarityLevel::Copy;
        let cos = f.cosine.map_or("-".to_owned(), |c| format!("{c:.4}"));
        writeln!(
            stdout,
            "{}\t{}\t{}\t{}\t{:.4}\t{}",
            f.id_a,
            f.id_b,
            f.scope.as_str(),
            cos,
            f.jaccard_est,
            f.level
        )
        .map_err(sink)?;
    }
    Ok(if copy { EXIT_FLAGGED } else { EXIT_OK })
}

/// Runs a parsed command; errors are printed to `stderr` and map to exit 1.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Audit {
            root,
            config,
            out,
            scale_10,
        } => cmd_audit(root, config.as_deref(), out.as_deref(), *scale_10, stdout),
        Command::Evidence { file, config } => cmd_evidence(file, config.as_deref(), stdout),
        Command::Similarity { root, config } => cmd_similarity(root, config.as_deref(), stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}
