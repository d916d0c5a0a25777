//! Orders in a rational quaternion algebra: validity checks, reduced
//! discriminants, maximality, the polarization element `μ` and the positive
//! involution `β* = μ⁻¹ β^ι μ`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::hilbert::{discriminant, exact_sqrt};
use crate::linalg::Matrix;
use crate::quat::{QuatAlgebra, QuatError};
use crate::{QuatQ, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrderError {
    #[error("basis is linearly dependent over Q")]
    LinearlyDependent,
    #[error("basis elements belong to different algebras")]
    MismatchedAlgebras,
    #[error("not an order: {0:?} fails")]
    NotAnOrder(Vec<OrderProperty>),
    #[error("|det| of the trace form is {0}, not a perfect square")]
    NonSquareDiscriminant(BigInt),
    #[error("order is not maximal (reduced discriminant {reduced} != d_B {d_b})")]
    NotMaximal { reduced: BigInt, d_b: u64 },
    #[error("algebra is definite")]
    Definite,
    #[error("no element with trace 0 and norm {d_b} within coordinate bound {bound}")]
    MuNotFound { d_b: u64, bound: i64 },
    #[error("invalid polarization element: {0}")]
    InvalidMu(String),
    #[error(transparent)]
    Quat(#[from] QuatError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OrderProperty {
    ContainsOne,
    MultiplicativelyClosed,
    TraceIntegral,
    NormIntegral,
}

impl OrderProperty {
    pub const ALL: [OrderProperty; 4] = [
        OrderProperty::ContainsOne,
        OrderProperty::MultiplicativelyClosed,
        OrderProperty::TraceIntegral,
        OrderProperty::NormIntegral,
    ];
}

impl std::fmt::Display for OrderProperty {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OrderProperty::ContainsOne => "contains_one",
            OrderProperty::MultiplicativelyClosed => "multiplicatively_closed",
            OrderProperty::TraceIntegral => "trace_integral",
            OrderProperty::NormIntegral => "norm_integral",
        })
    }
}

/// Outcome of [`verify_order`]: every failing property with a witness.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderReport {
    pub failures: Vec<(OrderProperty, QuatQ)>,
}

impl OrderReport {
    pub fn holds(&self, property: OrderProperty) -> bool {
        self.failures.iter().all(|(p, _)| *p != property)
    }

    pub fn is_order(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn witness(&self, property: OrderProperty) -> Option<&QuatQ> {
        self.failures
            .iter()
            .find(|(p, _)| *p == property)
            .map(|(_, w)| w)
    }
}

fn is_integer(r: &Rational) -> bool {
    r.is_integer()
}

fn check_same_algebra(basis: &[QuatQ; 4]) -> Result<QuatAlgebra<Rational>, OrderError> {
    let alg = basis[0].algebra().clone();
    if basis.iter().any(|e| *e.algebra() != alg) {
        return Err(OrderError::MismatchedAlgebras);
    }
    Ok(alg)
}

/// Columns are the basis coordinates over `1, i, j, k`.
fn basis_matrix(basis: &[QuatQ; 4]) -> Matrix<Rational> {
    let cols: Vec<Vec<Rational>> = basis.iter().map(|e| e.coords().to_vec()).collect();
    Matrix::from_columns(&cols)
}

fn coords_in(inv: &Matrix<Rational>, q: &QuatQ) -> [Rational; 4] {
    let v = inv.mul_vec(q.coords());
    std::array::from_fn(|n| v[n].clone())
}

/// Checks whether the Z-span of `basis` is an order.
pub fn verify_order(basis: &[QuatQ; 4]) -> Result<OrderReport, OrderError> {
    let alg = check_same_algebra(basis)?;
    let inv = basis_matrix(basis)
        .inverse()
        .ok_or(OrderError::LinearlyDependent)?;
    let in_lattice = |q: &QuatQ| coords_in(&inv, q).iter().all(is_integer);
    let mut failures = Vec::new();

    if !in_lattice(&alg.one()) {
        failures.push((OrderProperty::ContainsOne, alg.one()));
    }
    'closure: for x in basis {
        for y in basis {
            let p = x * y;
            if !in_lattice(&p) {
                failures.push((OrderProperty::MultiplicativelyClosed, p));
                break 'closure;
            }
        }
    }
    if let Some(e) = basis.iter().find(|e| !is_integer(&e.reduced_trace())) {
        failures.push((OrderProperty::TraceIntegral, e.clone()));
    }
    // nrd(Σ xᵢeᵢ) = Σ xᵢ² nrd(eᵢ) + Σ_{i<j} xᵢxⱼ trd(eᵢ eⱼ^ι)
    'norm: for (n, x) in basis.iter().enumerate() {
        if !is_integer(&x.reduced_norm()) {
            failures.push((OrderProperty::NormIntegral, x.clone()));
            break;
        }
        for y in &basis[n + 1..] {
            if !is_integer(&(x * &y.conjugate_main()).reduced_trace()) {
                failures.push((OrderProperty::NormIntegral, x + y));
                break 'norm;
            }
        }
    }
    Ok(OrderReport { failures })
}

/// A Z-lattice of rank 4 that is a ring: the candidate for `O_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct Order {
    algebra: QuatAlgebra<Rational>,
    basis: [QuatQ; 4],
    to_coords: Matrix<Rational>,
}

impl Order {
    pub fn new(basis: [QuatQ; 4]) -> Result<Self, OrderError> {
        let report = verify_order(&basis)?;
        if !report.is_order() {
            return Err(OrderError::NotAnOrder(
                report.failures.iter().map(|(p, _)| *p).collect(),
            ));
        }
        let to_coords = basis_matrix(&basis)
            .inverse()
            .ok_or(OrderError::LinearlyDependent)?;
        Ok(Order {
            algebra: basis[0].algebra().clone(),
            basis,
            to_coords,
        })
    }

    /// The standard lattice `Z + Zi + Zj + Zk`.
    pub fn standard(algebra: &QuatAlgebra<Rational>) -> Result<Self, OrderError> {
        Order::new([algebra.one(), algebra.i(), algebra.j(), algebra.k()])
    }

    pub fn algebra(&self) -> &QuatAlgebra<Rational> {
        &self.algebra
    }

    pub fn basis(&self) -> &[QuatQ; 4] {
        &self.basis
    }

    /// Coordinates of `q` in the order basis.
    pub fn coordinates(&self, q: &QuatQ) -> [Rational; 4] {
        coords_in(&self.to_coords, q)
    }

    pub fn contains(&self, q: &QuatQ) -> bool {
        self.coordinates(q).iter().all(is_integer)
    }

    pub fn element_from_coords(&self, c: &[BigInt; 4]) -> QuatQ {
        let mut acc = self.algebra.zero();
        for (e, x) in self.basis.iter().zip(c) {
            acc = &acc + &e.scale(&Rational::from_integer(x.clone()));
        }
        acc
    }

    /// New basis `e'_i = Σ_j u[i][j] e_j`. The result is the same lattice
    /// when `u` is unimodular.
    pub fn change_basis(&self, u: &[[i64; 4]; 4]) -> Result<Self, OrderError> {
        let basis = std::array::from_fn(|i| {
            let c: [BigInt; 4] = std::array::from_fn(|j| BigInt::from(u[i][j]));
            self.element_from_coords(&c)
        });
        Order::new(basis)
    }

    /// Gram matrix `(f(eᵢ, eⱼ))`.
    pub fn gram(&self, f: impl Fn(&QuatQ, &QuatQ) -> Rational) -> Matrix<Rational> {
        let rows = self
            .basis
            .iter()
            .map(|x| self.basis.iter().map(|y| f(x, y)).collect())
            .collect();
        Matrix::from_rows(rows)
    }

    /// `D` with `D² = |det(trd(eᵢ eⱼ))|`.
    pub fn reduced_discriminant(&self) -> Result<BigInt, OrderError> {
        let det = self.gram(|x, y| (x * y).reduced_trace()).determinant();
        debug_assert!(det.is_integer());
        let abs = det.to_integer().abs();
        exact_sqrt(&abs).ok_or(OrderError::NonSquareDiscriminant(abs))
    }

    /// Maximal iff the reduced discriminant equals `d_B`.
    pub fn is_maximal(&self) -> Result<bool, OrderError> {
        let d_b = discriminant(&self.algebra)?;
        Ok(self.reduced_discriminant()? == BigInt::from(d_b))
    }

    /// `[Λ^# : Λ]` for the pairing `(x, y) ↦ trd(x y^ι)`, i.e.
    /// `|det(trd(eᵢ eⱼ^ι))|`.
    pub fn dual_lattice_index(&self) -> BigInt {
        self.gram(|x, y| (x * &y.conjugate_main()).reduced_trace())
            .determinant()
            .to_integer()
            .abs()
    }

    /// Integer matrices of the trace and norm forms in order coordinates:
    /// `trd(x) = t·x` and `2 nrd(x) = xᵀ G x`.
    fn integral_forms(&self) -> ([i128; 4], [[i128; 4]; 4]) {
        let to_i = |r: Rational| -> i128 {
            r.to_integer()
                .to_i128()
                .expect("order forms fit in i128")
        };
        let t = std::array::from_fn(|i| to_i(self.basis[i].reduced_trace()));
        let g = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                to_i((&self.basis[i] * &self.basis[j].conjugate_main()).reduced_trace())
            })
        });
        (t, g)
    }

    /// Searches for `μ` with `trd(μ) = 0` and `nrd(μ) = d_B`.
    ///
    /// Candidates are scanned by increasing sup-norm of their order
    /// coordinates (up to `bound`), lexicographically within a shell, so the
    /// result is deterministic and small.
    pub fn find_mu(&self, bound: i64) -> Result<MuElement, OrderError> {
        if !self.algebra.is_indefinite() {
            return Err(OrderError::Definite);
        }
        let d_b = discriminant(&self.algebra)?;
        let reduced = self.reduced_discriminant()?;
        if reduced != BigInt::from(d_b) {
            return Err(OrderError::NotMaximal { reduced, d_b });
        }
        let (t, g) = self.integral_forms();
        let target = 2 * i128::from(d_b);
        for shell in 1..=bound {
            if let Some(c) = search_shell(shell, &t, &g, target) {
                let coords = c.map(BigInt::from);
                let mu = self.element_from_coords(&coords);
                return MuElement::new(self, mu);
            }
        }
        Err(OrderError::MuNotFound { d_b, bound })
    }

    /// `find_mu` with the default box `10·d_B`.
    pub fn find_mu_default(&self) -> Result<MuElement, OrderError> {
        let d_b = discriminant(&self.algebra)?;
        self.find_mu(default_mu_bound(d_b))
    }

    /// Whether `β ↦ β*` maps every basis element back into the order.
    pub fn check_star_stabilizes(&self, mu: &MuElement) -> bool {
        self.basis
            .iter()
            .all(|e| self.contains(&star_involution(e, mu)))
    }
}

pub fn default_mu_bound(d_b: u64) -> i64 {
    10 * d_b as i64
}

fn search_shell(s: i64, t: &[i128; 4], g: &[[i128; 4]; 4], target: i128) -> Option<[i64; 4]> {
    let range = -s..=s;
    for x0 in range.clone() {
        for x1 in range.clone() {
            for x2 in range.clone() {
                for x3 in range.clone() {
                    let x = [x0, x1, x2, x3];
                    if x.iter().all(|v| v.abs() < s) {
                        continue;
                    }
                    let xi = x.map(i128::from);
                    let tr: i128 = (0..4).map(|n| t[n] * xi[n]).sum();
                    if tr != 0 {
                        continue;
                    }
                    let mut q = 0i128;
                    for i in 0..4 {
                        for j in 0..4 {
                            q += xi[i] * g[i][j] * xi[j];
                        }
                    }
                    if q == target {
                        return Some(x);
                    }
                }
            }
        }
    }
    None
}

/// An order element with `trd(μ) = 0` and `μ² = -d_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct MuElement {
    mu: QuatQ,
    d_b: u64,
}

impl MuElement {
    /// Validates `mu` against `order`.
    pub fn new(order: &Order, mu: QuatQ) -> Result<Self, OrderError> {
        let d_b = discriminant(order.algebra())?;
        if !mu.reduced_trace().is_zero() {
            return Err(OrderError::InvalidMu("reduced trace is not 0".into()));
        }
        if mu.reduced_norm() != Rational::from_integer(d_b.into()) {
            return Err(OrderError::InvalidMu(format!(
                "reduced norm {} != d_B {d_b}",
                mu.reduced_norm()
            )));
        }
        if !order.contains(&mu) {
            return Err(OrderError::InvalidMu("not in the order".into()));
        }
        Ok(MuElement { mu, d_b })
    }

    pub fn element(&self) -> &QuatQ {
        &self.mu
    }

    pub fn d_b(&self) -> u64 {
        self.d_b
    }

    pub fn negated(&self) -> Self {
        MuElement {
            mu: -&self.mu,
            d_b: self.d_b,
        }
    }

    /// `μ⁻¹ = -μ / d_B`.
    pub fn inverse(&self) -> QuatQ {
        self.mu.inverse().expect("nrd(μ) = d_B is nonzero")
    }
}

/// `β* = μ⁻¹ β^ι μ`.
pub fn star_involution(q: &QuatQ, mu: &MuElement) -> QuatQ {
    &(&mu.inverse() * &q.conjugate_main()) * mu.element()
}
