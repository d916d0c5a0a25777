//! Exact and numeric verification of the constants in the Kodaira–Spencer
//! map over quaternionic Shimura curves.
//!
//! The quaternion, matrix and Kodaira–Spencer code is generic over a
//! [`Scalar`]: exact [`Rational`] arithmetic where an identity is integral,
//! `f64` where a real embedding (and hence a square root) is involved. The
//! aliases below fix the two instantiations used throughout.

pub mod elliptic;
pub mod hilbert;
pub mod ks;
pub mod linalg;
pub mod order;
pub mod padic;
pub mod quat;
pub mod riemann;
pub mod scalar;

pub use hilbert::{discriminant, hilbert_symbol, ramified_places, Place};
pub use linalg::Matrix;
pub use order::{MuElement, Order, OrderError, OrderReport};
pub use quat::{QuatAlgebra, QuatElement, QuatError};
pub use scalar::Scalar;

/// Exact rationals over arbitrary-precision integers.
pub type Rational = num_rational::BigRational;

pub type QuatAlgebraQ = QuatAlgebra<Rational>;
pub type QuatQ = QuatElement<Rational>;
pub type QuatAlgebraF64 = QuatAlgebra<f64>;
pub type QuatF64 = QuatElement<f64>;

pub type MatrixQ = Matrix<Rational>;
pub type MatrixF64 = Matrix<f64>;

pub type MuMatrixF64 = ks::MuMatrix<f64>;
pub type MuMatrixQ = ks::MuMatrix<Rational>;

pub type RealEmbeddingF64 = riemann::RealEmbedding<f64>;
pub type RealEmbeddingQ = riemann::RealEmbedding<Rational>;

/// Parses `"n"` or `"n/d"` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: num_bigint::BigInt = n.parse().ok()?;
    let d: num_bigint::BigInt = d.parse().ok()?;
    if num_traits::Zero::is_zero(&d) {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Renders a rational as `"n/d"` (always with a denominator).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
