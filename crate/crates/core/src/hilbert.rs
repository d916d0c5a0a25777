//! Hilbert symbols over Q and the discriminant of a rational quaternion
//! algebra.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::quat::{QuatAlgebra, QuatError};
use crate::Rational;

/// A place of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `|n|`, ascending.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<u64>, QuatError> {
    let mut m = n
        .abs()
        .to_u64()
        .ok_or_else(|| QuatError::TooLarge(n.to_string()))?;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    Ok(out)
}

/// An integer in the same square class as `r` (`num·den`).
fn integral_representative(r: &Rational) -> BigInt {
    r.numer() * r.denom()
}

/// Splits `n = p^v · u` with `p ∤ u`.
fn split_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut u = n.clone();
    let mut v = 0;
    while !u.is_zero() && (&u % &p).is_zero() {
        u /= &p;
        v += 1;
    }
    (v, u)
}

/// Legendre symbol `(u / p)` for odd prime `p ∤ u`, via Euler's criterion.
fn legendre(u: &BigInt, p: u64) -> i8 {
    let pb = BigInt::from(p);
    let r = u.mod_floor(&pb).modpow(&BigInt::from((p - 1) / 2), &pb);
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// The Hilbert symbol `(a, b)_v ∈ {+1, -1}`.
pub fn hilbert_symbol(a: &Rational, b: &Rational, v: Place) -> Result<i8, QuatError> {
    if a.is_zero() || b.is_zero() {
        return Err(QuatError::ZeroStructureConstant);
    }
    let a = integral_representative(a);
    let b = integral_representative(b);
    match v {
        Place::Real => Ok(if a.is_negative() && b.is_negative() {
            -1
        } else {
            1
        }),
        Place::Prime(p) if !is_prime(p) => Err(QuatError::NotPrime(p)),
        Place::Prime(2) => {
            let (alpha, u) = split_valuation(&a, 2);
            let (beta, w) = split_valuation(&b, 2);
            let eps = |x: &BigInt| -> u32 {
                let r = x.mod_floor(&BigInt::from(4)).to_u32().unwrap();
                u32::from(r == 3)
            };
            let omega = |x: &BigInt| -> u32 {
                let r = x.mod_floor(&BigInt::from(8)).to_u32().unwrap();
                u32::from(r == 3 || r == 5)
            };
            let e = eps(&u) * eps(&w) + alpha * omega(&w) + beta * omega(&u);
            Ok(if e % 2 == 0 { 1 } else { -1 })
        }
        Place::Prime(p) => {
            let (alpha, u) = split_valuation(&a, p);
            let (beta, w) = split_valuation(&b, p);
            let mut s: i8 = 1;
            if alpha % 2 == 1 && beta % 2 == 1 && (p - 1) / 2 % 2 == 1 {
                s = -s;
            }
            if beta % 2 == 1 {
                s *= legendre(&u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre(&w, p);
            }
            Ok(s)
        }
    }
}

/// Finite places at which the symbol can be nontrivial: 2 and the primes
/// dividing the numerators and denominators of `a` and `b`.
pub fn candidate_primes(algebra: &QuatAlgebra<Rational>) -> Result<Vec<u64>, QuatError> {
    let mut n = BigInt::from(2);
    for r in [algebra.a(), algebra.b()] {
        n *= r.numer() * r.denom();
    }
    prime_divisors(&n)
}

/// Places where the algebra is a division algebra, finite ones first
/// (ascending) followed by the real place if ramified.
pub fn ramified_places(algebra: &QuatAlgebra<Rational>) -> Result<Vec<Place>, QuatError> {
    let mut out = Vec::new();
    for p in candidate_primes(algebra)? {
        if hilbert_symbol(algebra.a(), algebra.b(), Place::Prime(p))? == -1 {
            out.push(Place::Prime(p));
        }
    }
    if hilbert_symbol(algebra.a(), algebra.b(), Place::Real)? == -1 {
        out.push(Place::Real);
    }
    Ok(out)
}

/// `d_B`: the product of the finite ramified primes.
pub fn discriminant(algebra: &QuatAlgebra<Rational>) -> Result<u64, QuatError> {
    Ok(ramified_places(algebra)?
        .into_iter()
        .filter_map(|v| match v {
            Place::Prime(p) => Some(p),
            Place::Real => None,
        })
        .product())
}

/// Whether `z² = a x² + b y²` has a solution modulo `p^k` with `x, y, z`
/// not all divisible by `p`, by exhaustive search.
///
/// For squarefree integers `a, b` this decides the local symbol with
/// `k = 3` at odd `p`; at `p = 2` an absent solution mod 8 already proves
/// ramification, but certifying a split place in general needs `k = 5`.
pub fn has_primitive_solution_mod(a: i64, b: i64, p: u64, k: u32) -> bool {
    let m = p.pow(k) as i128;
    let red = |v: i128| v.rem_euclid(m);
    let (a, b) = (red(a as i128), red(b as i128));
    let mut all_squares = vec![false; m as usize];
    let mut unit_squares = vec![false; m as usize];
    for z in 0..m {
        let s = red(z * z) as usize;
        all_squares[s] = true;
        if z % p as i128 != 0 {
            unit_squares[s] = true;
        }
    }
    for x in 0..m {
        let ax2 = red(a * red(x * x));
        for y in 0..m {
            let v = red(ax2 + b * red(y * y)) as usize;
            let primitive_xy = x % p as i128 != 0 || y % p as i128 != 0;
            if (primitive_xy && all_squares[v]) || unit_squares[v] {
                return true;
            }
        }
    }
    false
}

/// Integer square root of a perfect square, `None` otherwise.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }

    fn alg(a: i64, b: i64) -> QuatAlgebra<Rational> {
        QuatAlgebra::new(q(a), q(b)).unwrap()
    }

    #[test]
    fn symbol_examples() {
        for v in [Place::Real, Place::Prime(2), Place::Prime(3), Place::Prime(7)] {
            assert_eq!(hilbert_symbol(&q(1), &q(-5), v).unwrap(), 1);
        }
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), Place::Real).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(-1), &q(3), Place::Prime(3)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), Place::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(2), &q(3), Place::Prime(3)).unwrap(), -1);
    }

    #[test]
    fn rational_inputs_use_square_class() {
        let half = Rational::new(1.into(), 2.into());
        // 1/2 and 2 differ by a square.
        for p in [2, 3, 5] {
            assert_eq!(
                hilbert_symbol(&half, &q(3), Place::Prime(p)).unwrap(),
                hilbert_symbol(&q(2), &q(3), Place::Prime(p)).unwrap()
            );
        }
    }

    #[test]
    fn non_prime_place_rejected() {
        assert_eq!(
            hilbert_symbol(&q(1), &q(1), Place::Prime(9)).unwrap_err(),
            QuatError::NotPrime(9)
        );
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&alg(1, 1)).unwrap(), 1);
        assert_eq!(discriminant(&alg(-1, 3)).unwrap(), 6);
        assert_eq!(discriminant(&alg(-1, 7)).unwrap(), 14);
        assert_eq!(discriminant(&alg(-1, 11)).unwrap(), 22);
        assert_eq!(discriminant(&alg(-1, -1)).unwrap(), 2);
    }

    #[test]
    fn ramified_place_parity() {
        for (a, b) in [(-1, 3), (-1, -1), (2, 5), (-3, -7), (6, -35), (1, 1)] {
            let places = ramified_places(&alg(a, b)).unwrap();
            assert_eq!(places.len() % 2, 0, "({a},{b}) -> {places:?}");
        }
    }

    #[test]
    fn divisors() {
        assert_eq!(prime_divisors(&BigInt::from(-84)).unwrap(), vec![2, 3, 7]);
        assert_eq!(prime_divisors(&BigInt::from(1)).unwrap(), Vec::<u64>::new());
    }
}
