//! The Riemann form `E(β(τ,1)ᵗ, β'(τ,1)ᵗ) = -trd(μ⁻¹ β β'^ι)` on the
//! period lattice `Λ_τ = O_B(τ,1)ᵗ ⊂ C²`, the real embedding
//! `σ : B ⊗ R ≅ M₂(R)`, and the covolume/metric identities built on them.
//!
//! `C² ≅ R⁴` is flattened as `(Re z₁, Im z₁, Re z₂, Im z₂)`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed};
use rand::Rng;
use thiserror::Error;

use crate::hilbert::exact_sqrt;
use crate::linalg::Matrix;
use crate::order::{MuElement, Order};
use crate::quat::QuatAlgebra;
use crate::scalar::Scalar;
use crate::{QuatQ, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RiemannError {
    #[error("E(e{i}, e{j}) = {value} is not an integer")]
    NonIntegral { i: usize, j: usize, value: String },
    #[error("algebra is definite; no real embedding into M2(R)")]
    Definite,
    #[error("Im(tau) = {0} is not positive")]
    NotInUpperHalfPlane(f64),
    #[error("period lattice is degenerate")]
    Degenerate,
}

/// Integer matrix `m[i][j] = E(eᵢ, eⱼ)` on an order basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticGram {
    m: [[BigInt; 4]; 4],
}

impl SymplecticGram {
    pub fn entries(&self) -> &[[BigInt; 4]; 4] {
        &self.m
    }

    pub fn is_skew(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.m[i][j] == -&self.m[j][i]))
    }

    pub fn pfaffian(&self) -> BigInt {
        let m = &self.m;
        &m[0][1] * &m[2][3] - &m[0][2] * &m[1][3] + &m[0][3] * &m[1][2]
    }

    pub fn determinant(&self) -> BigInt {
        let rows = self
            .m
            .iter()
            .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect();
        Matrix::from_rows(rows).determinant().to_integer()
    }

    /// Self-dual: `det = 1`.
    pub fn is_unimodular(&self) -> bool {
        self.determinant().is_one()
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        let rows = self
            .m
            .iter()
            .map(|r| r.iter().map(|x| x.to_string().parse::<f64>().unwrap()).collect())
            .collect();
        Matrix::from_rows(rows)
    }
}

/// `E(x, y) = -trd(μ⁻¹ x y^ι)`, exact in B.
pub fn riemann_form(x: &QuatQ, y: &QuatQ, mu: &MuElement) -> Rational {
    -(&(&mu.inverse() * x) * &y.conjugate_main()).reduced_trace()
}

pub fn riemann_gram(order: &Order, mu: &MuElement) -> Result<SymplecticGram, RiemannError> {
    let basis = order.basis();
    let mut m: [[BigInt; 4]; 4] = Default::default();
    for i in 0..4 {
        for j in 0..4 {
            let e = riemann_form(&basis[i], &basis[j], mu);
            if !e.is_integer() {
                return Err(RiemannError::NonIntegral {
                    i,
                    j,
                    value: e.to_string(),
                });
            }
            m[i][j] = e.to_integer();
        }
    }
    Ok(SymplecticGram { m })
}

/// `σ : B ⊗ R → M₂(R)` given by the images of `i` and `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealEmbedding<T> {
    img_i: Matrix<T>,
    img_j: Matrix<T>,
}

fn mat2<T: Scalar>(a: T, b: T, c: T, d: T) -> Matrix<T> {
    Matrix::from_rows(vec![vec![a, b], vec![c, d]])
}

/// `i ↦ diag(r, -r)` with `r² = first`, `j ↦ [[0,1],[second,0]]`.
fn recipe<T: Scalar>(root: T, second: T) -> (Matrix<T>, Matrix<T>) {
    let x = mat2(root.clone(), T::zero(), T::zero(), -root);
    let y = mat2(T::zero(), T::one(), second, T::zero());
    (x, y)
}

impl<T: Scalar> RealEmbedding<T> {
    pub fn from_images(img_i: Matrix<T>, img_j: Matrix<T>) -> Self {
        RealEmbedding { img_i, img_j }
    }

    pub fn img_i(&self) -> &Matrix<T> {
        &self.img_i
    }

    pub fn img_j(&self) -> &Matrix<T> {
        &self.img_j
    }

    pub fn img_k(&self) -> Matrix<T> {
        &self.img_i * &self.img_j
    }

    /// `σ(x0 + x1 i + x2 j + x3 k)`.
    pub fn apply(&self, q: &QuatQ) -> Matrix<T> {
        let [x0, x1, x2, x3] = q.coords().clone().map(|c| T::from_rational(&c));
        let k = self.img_k();
        let mut out = Matrix::zeros(2, 2);
        for r in 0..2 {
            for c in 0..2 {
                let id = if r == c { T::one() } else { T::zero() };
                out[(r, c)] = x0.clone() * id
                    + x1.clone() * self.img_i[(r, c)].clone()
                    + x2.clone() * self.img_j[(r, c)].clone()
                    + x3.clone() * k[(r, c)].clone();
            }
        }
        out
    }

    /// `g σ g⁻¹`.
    pub fn conjugated(&self, g: &Matrix<T>) -> Option<Self> {
        let inv = g.inverse()?;
        Some(RealEmbedding {
            img_i: &(g * &self.img_i) * &inv,
            img_j: &(g * &self.img_j) * &inv,
        })
    }

    /// Largest deviation in the relations `σ(i)² = a`, `σ(j)² = b`,
    /// `σ(i)σ(j) = -σ(j)σ(i)`.
    pub fn relation_defect(&self, algebra: &QuatAlgebra<Rational>) -> f64 {
        let a = T::from_rational(algebra.a());
        let b = T::from_rational(algebra.b());
        let ii = &self.img_i * &self.img_i;
        let jj = &self.img_j * &self.img_j;
        let ij = &self.img_i * &self.img_j;
        let ji = &self.img_j * &self.img_i;
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                let id = if r == c { T::one() } else { T::zero() };
                let d1 = ii[(r, c)].clone() - a.clone() * id.clone();
                let d2 = jj[(r, c)].clone() - b.clone() * id;
                let d3 = ij[(r, c)].clone() + ji[(r, c)].clone();
                for d in [d1, d2, d3] {
                    worst = worst.max(d.to_f64_lossy().abs());
                }
            }
        }
        worst
    }
}

/// `σ` with `f64` entries, following the `(a, b)` recipe when `a > 0` and
/// the swapped recipe otherwise.
pub fn real_embedding(algebra: &QuatAlgebra<Rational>) -> Result<RealEmbedding<f64>, RiemannError> {
    let a = f64::from_rational(algebra.a());
    let b = f64::from_rational(algebra.b());
    if a > 0.0 {
        let (img_i, img_j) = recipe(a.sqrt(), b);
        Ok(RealEmbedding { img_i, img_j })
    } else if b > 0.0 {
        let (img_j, img_i) = recipe(b.sqrt(), a);
        Ok(RealEmbedding { img_i, img_j })
    } else {
        Err(RiemannError::Definite)
    }
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if !r.is_positive() {
        return None;
    }
    Some(Rational::new(exact_sqrt(r.numer())?, exact_sqrt(r.denom())?))
}

/// The same recipe over Q, available when the square root it needs is
/// rational (e.g. `a = 1` for `M₂(Q)`).
pub fn exact_real_embedding(algebra: &QuatAlgebra<Rational>) -> Option<RealEmbedding<Rational>> {
    if algebra.a().is_positive() {
        let (img_i, img_j) = recipe(rational_sqrt(algebra.a())?, algebra.b().clone());
        Some(RealEmbedding { img_i, img_j })
    } else if algebra.b().is_positive() {
        let (img_j, img_i) = recipe(rational_sqrt(algebra.b())?, algebra.a().clone());
        Some(RealEmbedding { img_i, img_j })
    } else {
        None
    }
}

/// `Λ_τ` as four real column vectors in R⁴.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodLattice {
    tau: Complex64,
    columns: Vec<[f64; 4]>,
}

fn check_tau(tau: Complex64) -> Result<(), RiemannError> {
    if tau.im > 0.0 {
        Ok(())
    } else {
        Err(RiemannError::NotInUpperHalfPlane(tau.im))
    }
}

/// Flattens `g (τ,1)ᵗ` for a real 2x2 matrix `g`.
pub fn apply_to_tau(g: &Matrix<f64>, tau: Complex64) -> [f64; 4] {
    let z1 = tau * g[(0, 0)] + g[(0, 1)];
    let z2 = tau * g[(1, 0)] + g[(1, 1)];
    [z1.re, z1.im, z2.re, z2.im]
}

impl PeriodLattice {
    /// Builds a lattice from explicit columns (must be full rank).
    pub fn from_columns(tau: Complex64, columns: Vec<[f64; 4]>) -> Result<Self, RiemannError> {
        let l = PeriodLattice { tau, columns };
        if l.columns.len() != 4 || l.matrix().determinant() == 0.0 {
            return Err(RiemannError::Degenerate);
        }
        Ok(l)
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn columns(&self) -> &[[f64; 4]] {
        &self.columns
    }

    /// The 4x4 real matrix whose columns are the lattice generators.
    pub fn matrix(&self) -> Matrix<f64> {
        let cols: Vec<Vec<f64>> = self.columns.iter().map(|c| c.to_vec()).collect();
        Matrix::from_columns(&cols)
    }

    /// Lebesgue volume of `C² / Λ_τ`.
    pub fn covolume(&self) -> f64 {
        self.matrix().determinant().abs()
    }
}

pub fn period_lattice(
    order: &Order,
    sigma: &RealEmbedding<f64>,
    tau: Complex64,
) -> Result<PeriodLattice, RiemannError> {
    check_tau(tau)?;
    let columns = order
        .basis()
        .iter()
        .map(|e| apply_to_tau(&sigma.apply(e), tau))
        .collect();
    PeriodLattice::from_columns(tau, columns)
}

pub fn covolume(lattice: &PeriodLattice) -> f64 {
    lattice.covolume()
}

/// `vol(M₂(R) / σ(O))` with Lebesgue measure on the four matrix entries.
pub fn matrix_lattice_covolume(order: &Order, sigma: &RealEmbedding<f64>) -> f64 {
    let cols: Vec<Vec<f64>> = order
        .basis()
        .iter()
        .map(|e| {
            let g = sigma.apply(e);
            vec![g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]]
        })
        .collect();
    Matrix::from_columns(&cols).determinant().abs()
}

pub fn dual_lattice_index(order: &Order) -> BigInt {
    order.dual_lattice_index()
}

/// `‖dz₁ ∧ dz₂‖²_Fal = d_B · Im(τ)² / π²`.
pub fn faltings_norm_sq_closed(tau: Complex64, d_b: u64) -> Result<f64, RiemannError> {
    check_tau(tau)?;
    Ok(d_b as f64 * tau.im * tau.im / (PI * PI))
}

/// `(2π)⁻² |∫ dz₁∧dz₂∧dz̄₁∧dz̄₂| = vol(C²/Λ_τ) / π²`; the integrand is a
/// constant top form, so the integral is `4 ·` covolume.
pub fn faltings_norm_sq_numeric(lattice: &PeriodLattice) -> f64 {
    lattice.covolume() / (PI * PI)
}

/// `‖dτ‖_Pet = 2 Im(τ)`.
pub fn petersson_norm(tau: Complex64) -> Result<f64, RiemannError> {
    check_tau(tau)?;
    Ok(2.0 * tau.im)
}

/// Multiplication by `i` on `C²` in flattened coordinates.
fn complex_structure() -> Matrix<f64> {
    Matrix::from_rows(vec![
        vec![0.0, -1.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, -1.0],
        vec![0.0, 0.0, 1.0, 0.0],
    ])
}

/// `E` and multiplication by `i`, both in lattice coordinates.
struct RealForms {
    gram: Matrix<f64>,
    i_action: Matrix<f64>,
}

fn real_forms(
    order: &Order,
    mu: &MuElement,
    sigma: &RealEmbedding<f64>,
    tau: Complex64,
) -> Result<RealForms, RiemannError> {
    let lattice = period_lattice(order, sigma, tau)?;
    let p = lattice.matrix();
    let p_inv = p.inverse().ok_or(RiemannError::Degenerate)?;
    let i_action = &(&p_inv * &complex_structure()) * &p;
    let gram = riemann_gram(order, mu)?.to_f64();
    Ok(RealForms { gram, i_action })
}

fn bilinear(g: &Matrix<f64>, x: &[f64], y: &[f64]) -> f64 {
    let gy = g.mul_vec(y);
    x.iter().zip(&gy).map(|(a, b)| a * b).sum()
}

/// Largest `|E(iz, iw) - E(z, w)|` over the lattice basis.
pub fn complex_invariance_defect(
    order: &Order,
    mu: &MuElement,
    sigma: &RealEmbedding<f64>,
    tau: Complex64,
) -> Result<f64, RiemannError> {
    let f = real_forms(order, mu, sigma, tau)?;
    let m = &(&f.i_action.transpose() * &f.gram) * &f.i_action;
    let mut worst = 0.0f64;
    for r in 0..4 {
        for c in 0..4 {
            worst = worst.max((m[(r, c)] - f.gram[(r, c)]).abs());
        }
    }
    Ok(worst)
}

/// Samples `samples` nonzero `z ∈ C²` (in lattice real coordinates) and
/// checks `H(z, z) = E(iz, z) > 0`.
pub fn check_positivity<R: Rng + ?Sized>(
    order: &Order,
    mu: &MuElement,
    sigma: &RealEmbedding<f64>,
    tau: Complex64,
    samples: usize,
    rng: &mut R,
) -> Result<bool, RiemannError> {
    let f = real_forms(order, mu, sigma, tau)?;
    let mut drawn = 0;
    while drawn < samples {
        let z: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        if z.iter().all(|v| v.abs() < 1e-9) {
            continue;
        }
        drawn += 1;
        let iz = f.i_action.mul_vec(&z);
        if bilinear(&f.gram, &iz, &z) <= 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which of `μ`, `-μ` gives a positive form. Exactly one should.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignSweep {
    pub plus_positive: bool,
    pub minus_positive: bool,
}

pub fn positivity_sign_sweep<R: Rng + ?Sized>(
    order: &Order,
    mu: &MuElement,
    sigma: &RealEmbedding<f64>,
    tau: Complex64,
    samples: usize,
    rng: &mut R,
) -> Result<SignSweep, RiemannError> {
    Ok(SignSweep {
        plus_positive: check_positivity(order, mu, sigma, tau, samples, rng)?,
        minus_positive: check_positivity(order, &mu.negated(), sigma, tau, samples, rng)?,
    })
}

/// Returns whichever of `±μ` makes `E` positive at `τ = i`, by evaluating
/// `H` on the lattice basis vectors.
pub fn sign_normalized_mu(
    order: &Order,
    mu: &MuElement,
    sigma: &RealEmbedding<f64>,
) -> Result<MuElement, RiemannError> {
    let f = real_forms(order, mu, sigma, Complex64::new(0.0, 1.0))?;
    let e0 = [1.0, 0.0, 0.0, 0.0];
    let h = bilinear(&f.gram, &f.i_action.mul_vec(&e0), &e0);
    Ok(if h > 0.0 { mu.clone() } else { mu.negated() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{FromPrimitive, Zero};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }

    fn half(n: i64) -> Rational {
        Rational::new(n.into(), 2.into())
    }

    fn catalog_6() -> (Order, MuElement) {
        let b = QuatAlgebra::new(q(-1), q(3)).unwrap();
        let o = Order::new([
            b.one(),
            b.i(),
            b.j(),
            b.element([half(1), half(1), half(1), half(1)]),
        ])
        .unwrap();
        let mu = MuElement::new(&o, b.element([q(0), q(3), q(1), q(0)])).unwrap();
        (o, mu)
    }

    #[test]
    fn gram_is_integral_skew_unimodular() {
        let (o, mu) = catalog_6();
        let g = riemann_gram(&o, &mu).unwrap();
        assert!(g.is_skew());
        for i in 0..4 {
            assert!(g.entries()[i][i].is_zero());
        }
        assert_eq!(g.determinant(), BigInt::from(1));
        assert_eq!(&g.pfaffian() * &g.pfaffian(), g.determinant());
    }

    #[test]
    fn non_maximal_order_is_not_self_dual() {
        let b = QuatAlgebra::new(q(-1), q(3)).unwrap();
        let o = Order::standard(&b).unwrap();
        let mu = MuElement::new(&o, b.element([q(0), q(3), q(1), q(0)])).unwrap();
        let g = riemann_gram(&o, &mu).unwrap();
        assert_eq!(g.determinant(), BigInt::from(4));
    }

    #[test]
    fn embedding_recipes() {
        let split = QuatAlgebra::new(q(1), q(1)).unwrap();
        let s = real_embedding(&split).unwrap();
        assert_eq!(s.img_i(), &mat2(1.0, 0.0, 0.0, -1.0));
        assert_eq!(s.img_j(), &mat2(0.0, 1.0, 1.0, 0.0));

        let b = QuatAlgebra::new(q(-1), q(3)).unwrap();
        let s = real_embedding(&b).unwrap();
        assert!(s.relation_defect(&b) < 1e-12);
        let jj = s.img_j() * s.img_j();
        assert!((jj[(0, 0)] - 3.0).abs() < 1e-12 && (jj[(1, 1)] - 3.0).abs() < 1e-12);

        let definite = QuatAlgebra::new(q(-1), q(-1)).unwrap();
        assert_eq!(real_embedding(&definite).unwrap_err(), RiemannError::Definite);
    }

    #[test]
    fn exact_embedding_only_when_root_is_rational() {
        let split = QuatAlgebra::new(q(1), q(1)).unwrap();
        let s = exact_real_embedding(&split).unwrap();
        assert_eq!(s.relation_defect(&split), 0.0);
        let b = QuatAlgebra::new(q(-1), q(3)).unwrap();
        assert!(exact_real_embedding(&b).is_none());
        let b = QuatAlgebra::new(q(-1), q(4)).unwrap();
        assert!(exact_real_embedding(&b).is_some());
    }

    #[test]
    fn covolume_examples() {
        let (o, _) = catalog_6();
        let s = real_embedding(o.algebra()).unwrap();
        let l = period_lattice(&o, &s, Complex64::new(0.0, 1.0)).unwrap();
        assert!((l.covolume() - 6.0).abs() < 1e-9);
        let l2 = period_lattice(&o, &s, Complex64::new(0.0, 2.0)).unwrap();
        assert!((l2.covolume() / l.covolume() - 4.0).abs() < 1e-9);
        assert!((matrix_lattice_covolume(&o, &s) - 6.0).abs() < 1e-9);
    }

    #[test]
    fn identity_and_permuted_columns() {
        let tau = Complex64::new(0.0, 1.0);
        let e = |n: usize| {
            let mut v = [0.0; 4];
            v[n] = 1.0;
            v
        };
        let l = PeriodLattice::from_columns(tau, (0..4).map(e).collect()).unwrap();
        assert_eq!(l.covolume(), 1.0);
        assert!((faltings_norm_sq_numeric(&l) - 1.0 / (PI * PI)).abs() < 1e-15);
        let p = PeriodLattice::from_columns(tau, vec![e(2), e(0), e(3), e(1)]).unwrap();
        assert_eq!(p.covolume(), 1.0);
        let mut doubled = vec![e(0), e(1), e(2), e(3)];
        doubled[1][1] = 2.0;
        let d = PeriodLattice::from_columns(tau, doubled).unwrap();
        assert!((faltings_norm_sq_numeric(&d) - 2.0 / (PI * PI)).abs() < 1e-15);
        assert_eq!(
            PeriodLattice::from_columns(tau, vec![e(0), e(0), e(2), e(3)]).unwrap_err(),
            RiemannError::Degenerate
        );
    }

    #[test]
    fn tau_must_be_in_upper_half_plane() {
        let (o, _) = catalog_6();
        let s = real_embedding(o.algebra()).unwrap();
        assert!(matches!(
            period_lattice(&o, &s, Complex64::new(1.0, 0.0)),
            Err(RiemannError::NotInUpperHalfPlane(_))
        ));
        assert!(petersson_norm(Complex64::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn closed_forms() {
        let i = Complex64::new(0.0, 1.0);
        assert!((faltings_norm_sq_closed(i, 1).unwrap() - 0.101_321_183_6).abs() < 1e-9);
        assert_eq!(faltings_norm_sq_closed(i, 6).unwrap(), 6.0 / (PI * PI));
        assert_eq!(
            faltings_norm_sq_closed(Complex64::new(0.0, 2.0), 6).unwrap(),
            24.0 / (PI * PI)
        );
        assert_eq!(petersson_norm(i).unwrap(), 2.0);
        assert_eq!(petersson_norm(Complex64::new(0.0, 3.0)).unwrap(), 6.0);
        assert_eq!(petersson_norm(Complex64::new(1.0, 1.0)).unwrap(), 2.0);
    }

    #[test]
    fn exactly_one_sign_is_positive() {
        let (o, mu) = catalog_6();
        let s = real_embedding(o.algebra()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let tau = Complex64::new(0.0, 1.0);
        let sweep = positivity_sign_sweep(&o, &mu, &s, tau, 1000, &mut rng).unwrap();
        assert!(sweep.plus_positive != sweep.minus_positive);
        let normalized = sign_normalized_mu(&o, &mu, &s).unwrap();
        assert!(check_positivity(&o, &normalized, &s, tau, 1000, &mut rng).unwrap());
        assert!(complex_invariance_defect(&o, &mu, &s, tau).unwrap() < 1e-9);
    }
}
