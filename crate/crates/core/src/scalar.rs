//! Scalar types usable as flow/distance weights and objective values.
//!
//! QAPLIB instances are integral, so the crate root aliases everything to
//! `i64`. The model and every solver are generic over [`Weight`] so the same
//! code runs on `f64` instances (or wider integers when needed).

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Bounded, NumAssign, Signed, ToPrimitive};

/// A signed numeric type that can hold flows, distances, costs and deltas.
pub trait Weight:
    Copy
    + Send
    + Sync
    + 'static
    + Debug
    + Display
    + PartialOrd
    + Signed
    + NumAssign
    + Bounded
    + ToPrimitive
    + Sum
{
    /// `true` when arithmetic on this type is exact, so accumulated deltas
    /// must agree bit-for-bit with a full re-evaluation.
    const EXACT: bool;

    /// Lossy conversion used for temperature arithmetic and reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Rejects values a weight matrix may not contain (NaN, infinities).
    fn is_admissible_entry(self) -> bool;
}

macro_rules! impl_int_weight {
    ($($t:ty),*) => {$(
        impl Weight for $t {
            const EXACT: bool = true;
            fn is_admissible_entry(self) -> bool {
                true
            }
        }
    )*};
}

macro_rules! impl_float_weight {
    ($($t:ty),*) => {$(
        impl Weight for $t {
            const EXACT: bool = false;
            fn is_admissible_entry(self) -> bool {
                self.is_finite()
            }
        }
    )*};
}

impl_int_weight!(i32, i64, i128);
impl_float_weight!(f32, f64);
