//! Scalar abstraction for the numeric kernels.
//!
//! TF-IDF weighting, cosine similarity, the curve-number runoff formula and
//! the cohort summary statistics are written once over [`Real`] and
//! instantiated for `f32` and `f64`. The audit pipeline itself runs on `f64`;
//! see the aliases at the crate root.

use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Default + Debug + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal or count.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable in every Real")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count is representable in every Real")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
