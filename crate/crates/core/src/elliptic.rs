//! The modular-curve case `B = M₂(Q)` seen through a single elliptic curve
//! `C / (τZ + Z)`.
//!
//! Here the Kodaira–Spencer map is `φ(dz) = (i/2π) ∂/∂z ⊗ dτ` and the
//! metric identity reads `‖·‖²_Fal = ‖·‖_Pet`: the Petersson side is *not*
//! squared, unlike the quaternionic identity `‖·‖²_Fal = ‖·‖²_Pet` checked
//! in [`crate::ks`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::ks::MetricCheck;
use crate::riemann::{petersson_norm, RiemannError};

/// Sign convention of the principal polarization used for `φ`: the natural
/// Riemann form gives `λ = -i_can`. The sign does not affect any norm.
pub const POLARIZATION_CONVENTION: &str = "lambda = -i_can";

/// `Λ_τ = τZ + Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticLattice {
    tau: Complex64,
}

impl EllipticLattice {
    pub fn new(tau: Complex64) -> Result<Self, RiemannError> {
        if tau.im > 0.0 {
            Ok(EllipticLattice { tau })
        } else {
            Err(RiemannError::NotInUpperHalfPlane(tau.im))
        }
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// Area of the parallelogram spanned by `τ` and `1`.
    pub fn covolume(&self) -> f64 {
        (self.tau.re * 0.0 - self.tau.im * 1.0).abs()
    }

    pub fn point(&self, a: i64, b: i64) -> Complex64 {
        self.tau * a as f64 + b as f64
    }
}

/// `E(aτ + b, a'τ + b') = ab' - a'b`.
pub fn e_riemann(a: i64, b: i64, a2: i64, b2: i64) -> i64 {
    a * b2 - a2 * b
}

/// Gram matrix of `E` on the basis `(τ, 1)`.
pub fn riemann_matrix() -> [[i64; 2]; 2] {
    [
        [e_riemann(1, 0, 1, 0), e_riemann(1, 0, 0, 1)],
        [e_riemann(0, 1, 1, 0), e_riemann(0, 1, 0, 1)],
    ]
}

/// `i / 2π`.
pub fn ks_elliptic_constant() -> Complex64 {
    Complex64::new(0.0, 1.0 / (2.0 * PI))
}

/// `(1/2π) |∫ dz ∧ dz̄|` with `|dz ∧ dz̄| = 2 dx∧dy`, i.e. `Im(τ)/π`.
pub fn faltings_norm_sq_elliptic(tau: Complex64) -> Result<f64, RiemannError> {
    let lattice = EllipticLattice::new(tau)?;
    Ok(2.0 * lattice.covolume() / (2.0 * PI))
}

/// `‖dz‖²_Fal` against `|i/2π| · ‖dτ‖_Pet`.
pub fn check_metric_identity_elliptic(tau: Complex64, tol: f64) -> Result<MetricCheck, RiemannError> {
    let lhs = faltings_norm_sq_elliptic(tau)?;
    let rhs = ks_elliptic_constant().norm() * petersson_norm(tau)?;
    Ok(MetricCheck::compare(lhs, rhs, tol))
}
