//! Kodaira–Spencer coefficients over the upper half plane.
//!
//! With `σ(μ) = [[a, b], [c, d]]`, the map sends
//!
//! ```text
//! dz₁ ↦  (1/2πi) (b ∂/∂z₁ + d ∂/∂z₂) ⊗ dτ
//! dz₂ ↦ -(1/2πi) (a ∂/∂z₁ + c ∂/∂z₂) ⊗ dτ
//! ```
//!
//! and its determinant `ψ` is `(ad - bc)/(2πi)² = d_B/(2πi)²`. The vectors
//! `w_j = β_j (τ, 1)ᵗ` come from solving the linear system
//! `E(β', β_j) = ℓ_{j1}(β')` for all `β' ∈ M₂(R)`, where
//! `E(x, y) = -tr(μ⁻¹ x y^ι)` and `ℓ_{jk}` reads the `(j, k)` matrix entry.
//!
//! The `w_j` sit in the second slot of `E`. Putting them in the first slot
//! gives `-β_j`; both choices are exposed through [`PairingSlot`].

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use thiserror::Error;

use crate::hilbert::exact_sqrt;
use crate::linalg::Matrix;
use crate::order::MuElement;
use crate::riemann::RealEmbedding;
use crate::scalar::{close, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KsError {
    #[error("σ(μ) is singular")]
    Singular,
    #[error("trace of σ(μ) is {0}, expected 0")]
    NonZeroTrace(f64),
    #[error("det σ(μ) = {det} does not match d_B = {d_b}")]
    DeterminantMismatch { det: f64, d_b: u64 },
}

/// Entries of `σ(μ) = [[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MuMatrix<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Scalar> MuMatrix<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        MuMatrix { a, b, c, d }
    }

    pub fn from_matrix(m: &Matrix<T>) -> Self {
        MuMatrix::new(
            m[(0, 0)].clone(),
            m[(0, 1)].clone(),
            m[(1, 0)].clone(),
            m[(1, 1)].clone(),
        )
    }

    /// `σ(μ)` for a polarization element.
    pub fn from_embedding(sigma: &RealEmbedding<T>, mu: &MuElement) -> Self {
        Self::from_matrix(&sigma.apply(mu.element()))
    }

    pub fn to_matrix(&self) -> Matrix<T> {
        Matrix::from_rows(vec![
            vec![self.a.clone(), self.b.clone()],
            vec![self.c.clone(), self.d.clone()],
        ])
    }

    pub fn trace(&self) -> T {
        self.a.clone() + self.d.clone()
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    /// Trace 0 within `trace_tol`, determinant `d_B` within `det_tol`.
    pub fn check(&self, d_b: u64, trace_tol: f64, det_tol: f64) -> Result<(), KsError> {
        if !self.trace().is_negligible(trace_tol) {
            return Err(KsError::NonZeroTrace(self.trace().to_f64_lossy()));
        }
        let target = T::from_u64(d_b).expect("d_B is representable");
        if !close(&self.det(), &target, det_tol) {
            return Err(KsError::DeterminantMismatch {
                det: self.det().to_f64_lossy(),
                d_b,
            });
        }
        Ok(())
    }
}

/// `ℓ_{jk}`: reads entry `(j, k)` (1-based) of a 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoefficientFunctional {
    pub row: usize,
    pub col: usize,
}

impl CoefficientFunctional {
    pub fn new(row: usize, col: usize) -> Self {
        assert!((1..=2).contains(&row) && (1..=2).contains(&col));
        CoefficientFunctional { row, col }
    }

    pub fn eval<T: Scalar>(&self, m: &Matrix<T>) -> T {
        m[(self.row - 1, self.col - 1)].clone()
    }
}

/// Which argument of `E` carries the unknown `β_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingSlot {
    /// `E(β_j, β') = ℓ_{j1}(β')`.
    First,
    /// `E(β', β_j) = ℓ_{j1}(β')`; reproduces the closed form.
    Second,
}

fn adjugate<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    Matrix::from_rows(vec![
        vec![m[(1, 1)].clone(), -m[(0, 1)].clone()],
        vec![-m[(1, 0)].clone(), m[(0, 0)].clone()],
    ])
}

fn trace<T: Scalar>(m: &Matrix<T>) -> T {
    m[(0, 0)].clone() + m[(1, 1)].clone()
}

/// `E(x, y) = -tr(μ⁻¹ x y^ι)` on `M₂(R)`.
pub fn pairing<T: Scalar>(mu_inv: &Matrix<T>, x: &Matrix<T>, y: &Matrix<T>) -> T {
    -trace(&(&(mu_inv * x) * &adjugate(y)))
}

/// Matrix units `e₁₁, e₁₂, e₂₁, e₂₂`.
pub fn matrix_units<T: Scalar>() -> [Matrix<T>; 4] {
    std::array::from_fn(|n| {
        let mut m = Matrix::zeros(2, 2);
        m[(n / 2, n % 2)] = T::one();
        m
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaPair<T> {
    pub beta1: Matrix<T>,
    pub beta2: Matrix<T>,
}

impl<T: Scalar> BetaPair<T> {
    pub fn get(&self, j: usize) -> &Matrix<T> {
        match j {
            1 => &self.beta1,
            2 => &self.beta2,
            _ => panic!("j must be 1 or 2"),
        }
    }
}

fn inverse_mu<T: Scalar>(mu: &MuMatrix<T>) -> Result<Matrix<T>, KsError> {
    mu.to_matrix().inverse().ok_or(KsError::Singular)
}

/// Solves the 4x4 system for `β_j` over the matrix-unit basis, for the
/// given slot.
pub fn solve_beta_in_slot<T: Scalar>(
    mu: &MuMatrix<T>,
    slot: PairingSlot,
) -> Result<BetaPair<T>, KsError> {
    let mu_inv = inverse_mu(mu)?;
    let units = matrix_units::<T>();
    // row n: equation for β' = units[n]; column m: unknown coefficient of units[m]
    let rows = units
        .iter()
        .map(|bp| {
            units
                .iter()
                .map(|u| match slot {
                    PairingSlot::First => pairing(&mu_inv, u, bp),
                    PairingSlot::Second => pairing(&mu_inv, bp, u),
                })
                .collect()
        })
        .collect();
    let system = Matrix::from_rows(rows);
    let solve_for = |j: usize| -> Result<Matrix<T>, KsError> {
        let ell = CoefficientFunctional::new(j, 1);
        let rhs: Vec<T> = units.iter().map(|u| ell.eval(u)).collect();
        let x = system.solve(&rhs).ok_or(KsError::Singular)?;
        Ok(Matrix::from_rows(vec![
            vec![x[0].clone(), x[1].clone()],
            vec![x[2].clone(), x[3].clone()],
        ]))
    };
    Ok(BetaPair {
        beta1: solve_for(1)?,
        beta2: solve_for(2)?,
    })
}

/// `β₁, β₂` by linear solve; equals [`closed_form_beta`].
pub fn solve_beta<T: Scalar>(mu: &MuMatrix<T>) -> Result<BetaPair<T>, KsError> {
    solve_beta_in_slot(mu, PairingSlot::Second)
}

/// `β₁ = [[0, b], [0, d]]`, `β₂ = [[0, -a], [0, -c]]`.
pub fn closed_form_beta<T: Scalar>(mu: &MuMatrix<T>) -> BetaPair<T> {
    let z = T::zero;
    BetaPair {
        beta1: Matrix::from_rows(vec![vec![z(), mu.b.clone()], vec![z(), mu.d.clone()]]),
        beta2: Matrix::from_rows(vec![vec![z(), -mu.a.clone()], vec![z(), -mu.c.clone()]]),
    }
}

/// Largest residual of the eight defining equations
/// `E(·,·) - ℓ_{j1}(β')` over the matrix units.
pub fn defining_residual<T: Scalar>(
    mu: &MuMatrix<T>,
    betas: &BetaPair<T>,
    slot: PairingSlot,
) -> Result<f64, KsError> {
    let mu_inv = inverse_mu(mu)?;
    let mut worst = 0.0f64;
    for j in 1..=2 {
        let ell = CoefficientFunctional::new(j, 1);
        for bp in matrix_units::<T>() {
            let lhs = match slot {
                PairingSlot::First => pairing(&mu_inv, betas.get(j), &bp),
                PairingSlot::Second => pairing(&mu_inv, &bp, betas.get(j)),
            };
            let r = lhs - ell.eval(&bp);
            worst = worst.max(r.to_f64_lossy().abs());
        }
    }
    Ok(worst)
}

/// `w = β (τ, 1)ᵗ ∈ C²`.
pub fn apply_beta<T: Scalar>(beta: &Matrix<T>, tau: Complex64) -> [Complex64; 2] {
    let f = |r: usize, c: usize| beta[(r, c)].to_f64_lossy();
    [tau * f(0, 0) + f(0, 1), tau * f(1, 0) + f(1, 1)]
}

/// Images of `dz₁`, `dz₂`: `φ(dz_j) = prefactor · (w_j · ∂/∂z) ⊗ dτ`.
#[derive(Debug, Clone, PartialEq)]
pub struct KsImage<T> {
    pub prefactor: Complex64,
    pub w1: [T; 2],
    pub w2: [T; 2],
}

impl<T: Scalar> KsImage<T> {
    /// `det(w₁ | w₂)`.
    pub fn w_determinant(&self) -> T {
        self.w1[0].clone() * self.w2[1].clone() - self.w2[0].clone() * self.w1[1].clone()
    }

    /// `det φ = prefactor² · det(w₁ | w₂)`.
    pub fn determinant(&self) -> Complex64 {
        self.prefactor * self.prefactor * self.w_determinant().to_f64_lossy()
    }
}

/// `1 / (2πi)`.
pub fn two_pi_i_inverse() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI).inv()
}

pub fn ks_images<T: Scalar>(mu: &MuMatrix<T>) -> KsImage<T> {
    KsImage {
        prefactor: two_pi_i_inverse(),
        w1: [mu.b.clone(), mu.d.clone()],
        w2: [-mu.a.clone(), -mu.c.clone()],
    }
}

/// `ψ((dz₁ ∧ dz₂)^⊗2) = d_B/(2πi)² (dτ)^⊗2`, kept as the exact integer
/// `d_B` times the symbolic factor `(2πi)⁻²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PsiConstant {
    pub d_b: u64,
}

impl PsiConstant {
    /// `d_B / (2πi)² = -d_B / 4π²`.
    pub fn value(&self) -> Complex64 {
        let f = two_pi_i_inverse();
        f * f * self.d_b as f64
    }

    pub fn modulus(&self) -> f64 {
        self.d_b as f64 / (4.0 * PI * PI)
    }

    /// Whether `d_B/(2πi)²` is the square of some `n/(2πi)` with `n ∈ Z`.
    pub fn has_integral_square_root(&self) -> bool {
        exact_sqrt(&BigInt::from(self.d_b)).is_some()
    }
}

/// Checks `ad - bc = d_B` within `tol` and returns the constant.
pub fn psi_constant<T: Scalar>(mu: &MuMatrix<T>, d_b: u64, tol: f64) -> Result<PsiConstant, KsError> {
    let target = T::from_u64(d_b).expect("d_B is representable");
    if !close(&mu.det(), &target, tol) {
        return Err(KsError::DeterminantMismatch {
            det: mu.det().to_f64_lossy(),
            d_b,
        });
    }
    Ok(PsiConstant { d_b })
}

/// One side-by-side comparison of two metric expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
    pub pass: bool,
}

impl MetricCheck {
    pub fn compare(lhs: f64, rhs: f64, tol: f64) -> Self {
        let rel_error = (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE);
        MetricCheck {
            lhs,
            rhs,
            rel_error,
            pass: rel_error < tol,
        }
    }
}

/// `‖dz₁∧dz₂‖²_Fal = |ψ| · ‖dτ‖²_Pet`, i.e.
/// `d_B Im(τ)²/π² = (d_B/4π²) (2 Im τ)²`.
pub fn check_metric_identity(tau: Complex64, d_b: u64, tol: f64) -> Result<MetricCheck, crate::riemann::RiemannError> {
    let lhs = crate::riemann::faltings_norm_sq_closed(tau, d_b)?;
    let pet = crate::riemann::petersson_norm(tau)?;
    let rhs = PsiConstant { d_b }.modulus() * pet * pet;
    Ok(MetricCheck::compare(lhs, rhs, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::FromPrimitive;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }

    #[test]
    fn rotation_mu_exact() {
        let mu = MuMatrix::new(q(0), q(1), q(-1), q(0));
        let betas = solve_beta(&mu).unwrap();
        assert_eq!(
            betas.beta1,
            Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(0), q(0)]])
        );
        assert_eq!(
            betas.beta2,
            Matrix::from_rows(vec![vec![q(0), q(0)], vec![q(0), q(1)]])
        );
        assert_eq!(betas, closed_form_beta(&mu));
        assert_eq!(defining_residual(&mu, &betas, PairingSlot::Second).unwrap(), 0.0);
    }

    #[test]
    fn first_slot_gives_negated_solution() {
        let mu = MuMatrix::new(q(2), q(5), q(-2), q(-2));
        let second = solve_beta(&mu).unwrap();
        let first = solve_beta_in_slot(&mu, PairingSlot::First).unwrap();
        assert_eq!(first.beta1, second.beta1.map(|x| -x.clone()));
        assert_eq!(first.beta2, second.beta2.map(|x| -x.clone()));
        // The closed form read in the first slot misses by exactly ℓ twice over.
        let closed = closed_form_beta(&mu);
        assert_eq!(defining_residual(&mu, &closed, PairingSlot::First).unwrap(), 2.0);
    }

    #[test]
    fn singular_mu_rejected() {
        let mu = MuMatrix::new(1.0, 2.0, 2.0, 4.0);
        assert_eq!(solve_beta(&mu).unwrap_err(), KsError::Singular);
    }

    #[test]
    fn ks_images_of_rotation() {
        let mu = MuMatrix::new(0.0, 1.0, -1.0, 0.0);
        let img = ks_images(&mu);
        assert_eq!(img.w1, [1.0, 0.0]);
        assert_eq!(img.w2, [0.0, 1.0]);
        assert_eq!(img.w_determinant(), 1.0);
        assert!((img.prefactor - Complex64::new(0.0, -1.0 / (2.0 * PI))).norm() < 1e-15);
        let w = apply_beta(&closed_form_beta(&mu).beta1, Complex64::new(0.0, 1.0));
        assert_eq!(w, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    }

    #[test]
    fn psi_values() {
        let mu = MuMatrix::new(q(0), q(6), q(-1), q(0));
        let psi = psi_constant(&mu, 6, 0.0).unwrap();
        assert!((psi.value().re + 0.151_982_1).abs() < 1e-6);
        assert!(psi.value().im.abs() < 1e-18);
        assert!((psi.modulus() - 6.0 / (4.0 * PI * PI)).abs() < 1e-15);
        assert!(!psi.has_integral_square_root());
        assert!(PsiConstant { d_b: 1 }.has_integral_square_root());
        assert!(matches!(
            psi_constant(&mu, 5, 0.0),
            Err(KsError::DeterminantMismatch { .. })
        ));
        let unit = PsiConstant { d_b: 1 };
        assert!((unit.value().re + 1.0 / (4.0 * PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn metric_identity_examples() {
        let i = Complex64::new(0.0, 1.0);
        let c = check_metric_identity(i, 6, 1e-12).unwrap();
        assert!(c.pass);
        assert!((c.lhs - 6.0 / (PI * PI)).abs() < 1e-15);
        let c = check_metric_identity(Complex64::new(1.0, 2.0), 10, 1e-12).unwrap();
        assert!(c.pass && (c.rhs - 40.0 / (PI * PI)).abs() < 1e-12);
        assert!(check_metric_identity(Complex64::new(-0.3, 0.7), 1, 1e-12).unwrap().pass);
    }

    #[test]
    fn mu_matrix_invariants() {
        let mu = MuMatrix::new(1.0, 2.0, -3.5, -1.0);
        assert!(mu.check(6, 1e-12, 1e-9).is_ok());
        assert!(matches!(mu.check(5, 1e-12, 1e-9), Err(KsError::DeterminantMismatch { .. })));
        let bad = MuMatrix::new(1.0, 2.0, -3.5, 0.0);
        assert!(matches!(bad.check(6, 1e-12, 1e-9), Err(KsError::NonZeroTrace(_))));
    }
}
