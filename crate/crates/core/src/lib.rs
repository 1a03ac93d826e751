//! Audit tooling for cohorts of course reports: text normalization,
//! pairwise similarity, transcript evidence, rubric scoring and reporting.
//!
//! The numeric core is generic over [`Real`]; the aliases below fix the
//! scalar type for the common cases.

pub mod cli;
pub mod config;
pub mod error;
pub mod evidence;
pub mod hashing;
pub mod ingest;
pub mod pipeline;
pub mod report;
pub mod rubric;
pub mod scalar;
pub mod similarity;
pub mod textprep;

pub use config::Config;
pub use error::{AuditError, Result};
pub use pipeline::run_audit;
pub use scalar::Real;

pub type TfIdfModel = similarity::TfIdfModel<f64>;
pub type TfIdfVector = similarity::TfIdfVector<f64>;
pub type Summary = report::Summary<f64>;

pub type TfIdfModel32 = similarity::TfIdfModel<f32>;
pub type TfIdfVector32 = similarity::TfIdfVector<f32>;
pub type Summary32 = report::Summary<f32>;
