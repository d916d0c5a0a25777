//! Arithmetic in a quaternion algebra `(a, b | F)` with basis `1, i, j, k`,
//! `i² = a`, `j² = b`, `ij = -ji = k`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuatError {
    #[error("structure constants must be nonzero")]
    ZeroStructureConstant,
    #[error("operands belong to different quaternion algebras")]
    MismatchedAlgebras,
    #[error("element has zero reduced norm and is not invertible")]
    NotInvertible,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("integer {0} exceeds the supported range")]
    TooLarge(String),
}

/// The algebra `(a, b | F)`.
#[derive(Clone, PartialEq)]
pub struct QuatAlgebra<T> {
    a: T,
    b: T,
}

impl<T: fmt::Debug> fmt::Debug for QuatAlgebra<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.a, self.b)
    }
}

impl<T: Scalar> QuatAlgebra<T> {
    pub fn new(a: T, b: T) -> Result<Self, QuatError> {
        if a.is_zero() || b.is_zero() {
            return Err(QuatError::ZeroStructureConstant);
        }
        Ok(QuatAlgebra { a, b })
    }

    pub fn a(&self) -> &T {
        &self.a
    }

    pub fn b(&self) -> &T {
        &self.b
    }

    /// Split at the real place, i.e. `a > 0` or `b > 0`.
    pub fn is_indefinite(&self) -> bool {
        self.a.is_positive() || self.b.is_positive()
    }

    pub fn element(&self, coords: [T; 4]) -> QuatElement<T> {
        QuatElement {
            algebra: self.clone(),
            coords,
        }
    }

    pub fn scalar(&self, t: T) -> QuatElement<T> {
        self.element([t, T::zero(), T::zero(), T::zero()])
    }

    pub fn zero(&self) -> QuatElement<T> {
        self.scalar(T::zero())
    }

    pub fn one(&self) -> QuatElement<T> {
        self.scalar(T::one())
    }

    pub fn i(&self) -> QuatElement<T> {
        self.element([T::zero(), T::one(), T::zero(), T::zero()])
    }

    pub fn j(&self) -> QuatElement<T> {
        self.element([T::zero(), T::zero(), T::one(), T::zero()])
    }

    pub fn k(&self) -> QuatElement<T> {
        self.element([T::zero(), T::zero(), T::zero(), T::one()])
    }

    /// Same algebra over another scalar type.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> QuatAlgebra<U> {
        QuatAlgebra {
            a: f(&self.a),
            b: f(&self.b),
        }
    }
}

/// `x0 + x1 i + x2 j + x3 k`.
#[derive(Clone, PartialEq)]
pub struct QuatElement<T> {
    algebra: QuatAlgebra<T>,
    coords: [T; 4],
}

impl<T: fmt::Debug> fmt::Debug for QuatElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x0, x1, x2, x3] = &self.coords;
        write!(f, "{x0:?} + {x1:?}i + {x2:?}j + {x3:?}k")
    }
}

impl<T: Scalar> QuatElement<T> {
    pub fn algebra(&self) -> &QuatAlgebra<T> {
        &self.algebra
    }

    pub fn coords(&self) -> &[T; 4] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, QuatError> {
        if self.algebra != rhs.algebra {
            return Err(QuatError::MismatchedAlgebras);
        }
        let (a, b) = (&self.algebra.a, &self.algebra.b);
        let [x0, x1, x2, x3] = &self.coords;
        let [y0, y1, y2, y3] = &rhs.coords;
        let ab = a.clone() * b.clone();
        let m = |u: &T, v: &T| u.clone() * v.clone();
        let z0 = m(x0, y0) + a.clone() * m(x1, y1) + b.clone() * m(x2, y2) - ab * m(x3, y3);
        let z1 = m(x0, y1) + m(x1, y0) - b.clone() * m(x2, y3) + b.clone() * m(x3, y2);
        let z2 = m(x0, y2) + m(x2, y0) + a.clone() * m(x1, y3) - a.clone() * m(x3, y1);
        let z3 = m(x0, y3) + m(x3, y0) + m(x1, y2) - m(x2, y1);
        Ok(self.algebra.element([z0, z1, z2, z3]))
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, QuatError> {
        if self.algebra != rhs.algebra {
            return Err(QuatError::MismatchedAlgebras);
        }
        let c = std::array::from_fn(|n| self.coords[n].clone() + rhs.coords[n].clone());
        Ok(self.algebra.element(c))
    }

    /// Main involution `q ↦ trd(q) - q`.
    pub fn conjugate_main(&self) -> Self {
        let [x0, x1, x2, x3] = self.coords.clone();
        self.algebra.element([x0, -x1, -x2, -x3])
    }

    pub fn reduced_trace(&self) -> T {
        self.coords[0].clone() + self.coords[0].clone()
    }

    pub fn reduced_norm(&self) -> T {
        let (a, b) = (&self.algebra.a, &self.algebra.b);
        let [x0, x1, x2, x3] = &self.coords;
        let sq = |u: &T| u.clone() * u.clone();
        sq(x0) - a.clone() * sq(x1) - b.clone() * sq(x2) + a.clone() * b.clone() * sq(x3)
    }

    pub fn scale(&self, t: &T) -> Self {
        let c = std::array::from_fn(|n| self.coords[n].clone() * t.clone());
        self.algebra.element(c)
    }

    /// `q⁻¹ = q^ι / nrd(q)`.
    pub fn inverse(&self) -> Result<Self, QuatError> {
        let n = self.reduced_norm();
        if n.is_zero() {
            return Err(QuatError::NotInvertible);
        }
        Ok(self.conjugate_main().scale(&(T::one() / n)))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> QuatElement<U> {
        QuatElement {
            algebra: self.algebra.map(&f),
            coords: std::array::from_fn(|n| f(&self.coords[n])),
        }
    }
}

impl<T: Scalar> Mul for &QuatElement<T> {
    type Output = QuatElement<T>;

    /// Panics if the operands live in different algebras; use
    /// [`QuatElement::try_mul`] to get an error instead.
    fn mul(self, rhs: &QuatElement<T>) -> QuatElement<T> {
        self.try_mul(rhs).expect("quaternion product across algebras")
    }
}

impl<T: Scalar> Add for &QuatElement<T> {
    type Output = QuatElement<T>;
    fn add(self, rhs: &QuatElement<T>) -> QuatElement<T> {
        self.try_add(rhs).expect("quaternion sum across algebras")
    }
}

impl<T: Scalar> Sub for &QuatElement<T> {
    type Output = QuatElement<T>;
    fn sub(self, rhs: &QuatElement<T>) -> QuatElement<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Neg for &QuatElement<T> {
    type Output = QuatElement<T>;
    fn neg(self) -> QuatElement<T> {
        self.scale(&-T::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::FromPrimitive;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }

    fn alg(a: i64, b: i64) -> QuatAlgebra<Rational> {
        QuatAlgebra::new(q(a), q(b)).unwrap()
    }

    #[test]
    fn defining_relations() {
        let b = alg(-1, 3);
        assert_eq!(&b.i() * &b.j(), b.k());
        assert_eq!(&b.j() * &b.i(), -&b.k());
        assert_eq!(&b.i() * &b.i(), b.scalar(q(-1)));
        assert_eq!(&b.j() * &b.j(), b.scalar(q(3)));
        assert_eq!(&b.k() * &b.k(), b.scalar(q(3)));
    }

    #[test]
    fn difference_of_squares() {
        let b = alg(5, -2);
        let p = &b.one() + &b.i();
        let m = &b.one() - &b.i();
        assert_eq!(&p * &m, b.scalar(q(1 - 5)));
    }

    #[test]
    fn conjugation_examples() {
        let b = alg(-1, 3);
        assert_eq!(b.one().conjugate_main(), b.one());
        assert_eq!(b.i().conjugate_main(), -&b.i());
        let x = b.element([q(2), q(0), q(3), q(0)]);
        assert_eq!(x.conjugate_main(), b.element([q(2), q(0), q(-3), q(0)]));
    }

    #[test]
    fn trace_and_norm_examples() {
        let b = alg(-1, 3);
        assert_eq!(b.one().reduced_trace(), q(2));
        assert_eq!(b.i().reduced_trace(), q(0));
        assert_eq!(b.element([q(3), q(0), q(1), q(0)]).reduced_trace(), q(6));
        assert_eq!(b.one().reduced_norm(), q(1));
        assert_eq!(b.i().reduced_norm(), q(1));
        assert_eq!(b.j().reduced_norm(), q(-3));
    }

    #[test]
    fn zero_constant_rejected() {
        assert_eq!(
            QuatAlgebra::new(q(0), q(1)).unwrap_err(),
            QuatError::ZeroStructureConstant
        );
    }

    #[test]
    fn mismatched_algebras() {
        let x = alg(-1, 3).i();
        let y = alg(-1, 7).i();
        assert_eq!(x.try_mul(&y).unwrap_err(), QuatError::MismatchedAlgebras);
    }

    #[test]
    fn indefiniteness() {
        assert!(alg(-1, 3).is_indefinite());
        assert!(!alg(-1, -1).is_indefinite());
        assert!(alg(1, 1).is_indefinite());
    }

    #[test]
    fn zero_norm_not_invertible() {
        let b = alg(1, 1);
        let x = &b.one() + &b.i();
        assert_eq!(x.inverse().unwrap_err(), QuatError::NotInvertible);
    }
}
