//! Scalar abstraction shared by the exact and floating-point code paths.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// A field element usable by the generic quaternion and matrix code.
///
/// Implemented for `f32`, `f64` and `BigRational`. Exact types compare with
/// `==`; floating types compare against a tolerance.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync
{
    /// `true` when arithmetic is exact.
    const EXACT: bool;

    /// Zero test: exact for exact types, `|x| <= tol` otherwise.
    fn is_negligible(&self, tol: f64) -> bool;

    /// Lossy conversion used when reporting.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Image of an exact rational in this scalar type.
    fn from_rational(r: &BigRational) -> Self;

    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("i64 is representable")
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_rational(r: &BigRational) -> Self {
        r.to_f32().unwrap_or(f32::NAN)
    }

    fn is_negligible(&self, tol: f64) -> bool {
        (self.abs() as f64) <= tol
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

/// `|a - b| <= tol` for floats, `a == b` for exact scalars.
pub fn close<T: Scalar>(a: &T, b: &T, tol: f64) -> bool {
    (a.clone() - b.clone()).is_negligible(tol)
}
