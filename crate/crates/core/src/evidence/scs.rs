//! SCS curve-number direct runoff, in millimetres.
//!
//! `S = 25400 / CN - 254`, `Ia = 0.2 S`, and
//! `Q = (P - Ia)^2 / (P - Ia + S)` when `P > Ia`, otherwise 0.

use serde::{Deserialize, Serialize};

use crate::error::{AuditError, Result};
use crate::scalar::Real;

/// Potential maximum retention `S` for a curve number.
pub fn retention<F: Real>(curve_number: F) -> F {
    F::lit(25400.0) / curve_number - F::lit(254.0)
}

pub fn scs_cn_runoff<F: Real>(precipitation_mm: F, curve_number: F) -> Result<F> {
    if !(curve_number > F::zero() && curve_number <= F::lit(100.0)) {
        return Err(AuditError::invalid(format!(
            "curve number {curve_number:?} outside (0, 100]"
        )));
    }
    if !precipitation_mm.is_finite() || precipitation_mm < F::zero() {
        return Err(AuditError::invalid(format!(
            "precipitation {precipitation_mm:?} must be finite and non-negative"
        )));
    }
    let s = retention(curve_number);
    let ia = F::lit(0.2) * s;
    if precipitation_mm <= ia {
        return Ok(F::zero());
    }
    let excess = precipitation_mm - ia;
    Ok(excess * (excess / (excess + s)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScsCnCheck {
    pub precipitation_mm: f64,
    pub curve_number: f64,
    pub claimed_runoff_mm: f64,
    pub computed_runoff_mm: f64,
    pub pass: bool,
}
