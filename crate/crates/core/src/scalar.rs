//! Scalar types used for ratios and metrics.
//!
//! Every ratio in the toolkit is a quotient of two integer counts, so the
//! metric code is written once over [`Scalar`] and instantiated with `f64`
//! for reports or with [`ExactRatio`] when exact arithmetic is wanted.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Exact rational scalar.
pub type ExactRatio = Ratio<i64>;

/// Numeric type a ratio of counts can be expressed in.
pub trait Scalar: Num + Copy + PartialOrd + Debug + FromPrimitive + ToPrimitive {
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count not representable in scalar type")
    }

    /// `num / den`, defined as zero when `den == 0`.
    fn ratio(num: u64, den: u64) -> Self {
        if den == 0 {
            Self::zero()
        } else {
            Self::from_count(num) / Self::from_count(den)
        }
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
impl Scalar for ExactRatio {}
