//! Truncated p-adic rings: `Z/p^N` and `Z_{p²}/p^N = (Z/p^N)[ω]`,
//! `ω² = s` for the least quadratic non-residue `s` mod `p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::PadicError;
use crate::hilbert::is_prime;

/// A truncated discrete valuation ring with uniformizer `p`.
pub trait LocalRing: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// `p`-adic valuation, `None` for zero.
    fn valuation(&self) -> Option<u32>;
    fn unit_inverse(&self) -> Option<Self>;
    /// A `q` with `q · p^k = self`; requires `valuation >= k`.
    fn div_p_pow(&self, k: u32) -> Self;
    fn prime(&self) -> u64;
    fn precision(&self) -> u32;
    fn from_i64_like(&self, v: i64) -> Self;

    fn is_zero_el(&self) -> bool {
        self.valuation().is_none()
    }

    fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }
}

/// Modulus data shared by all elements of a ring.
#[derive(Debug, PartialEq, Eq)]
pub struct Precision {
    p: u64,
    n: u32,
    modulus: BigInt,
}

impl Precision {
    pub fn new(p: u64, n: u32) -> Result<Arc<Self>, PadicError> {
        if !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        if n < 1 {
            return Err(PadicError::Precision(n));
        }
        Ok(Arc::new(Precision {
            p,
            n,
            modulus: BigInt::from(p).pow(n),
        }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    fn reduce(&self, v: BigInt) -> BigInt {
        v.mod_floor(&self.modulus)
    }

    fn valuation_of(&self, v: &BigInt) -> Option<u32> {
        if v.is_zero() {
            return None;
        }
        let p = BigInt::from(self.p);
        let mut x = v.clone();
        let mut k = 0;
        while (&x % &p).is_zero() {
            x /= &p;
            k += 1;
        }
        Some(k)
    }

    fn inverse_of(&self, v: &BigInt) -> Option<BigInt> {
        v.modinv(&self.modulus)
    }
}

/// Element of `Z/p^N`, kept in `[0, p^N)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Zpn {
    value: BigInt,
    prec: Arc<Precision>,
}

impl fmt::Debug for Zpn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.prec.p, self.prec.n)
    }
}

impl Zpn {
    pub fn new(value: impl Into<BigInt>, prec: &Arc<Precision>) -> Self {
        Zpn {
            value: prec.reduce(value.into()),
            prec: prec.clone(),
        }
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn context(&self) -> &Arc<Precision> {
        &self.prec
    }

    /// All `p^N` elements, ascending.
    pub fn enumerate(prec: &Arc<Precision>) -> impl Iterator<Item = Zpn> + '_ {
        let m = prec.modulus.to_u64().expect("enumeration needs p^N < 2^64");
        (0..m).map(move |v| Zpn::new(v, prec))
    }
}

impl LocalRing for Zpn {
    fn zero_like(&self) -> Self {
        Zpn::new(0, &self.prec)
    }
    fn one_like(&self) -> Self {
        Zpn::new(1, &self.prec)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        Zpn::new(&self.value + &rhs.value, &self.prec)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        Zpn::new(&self.value - &rhs.value, &self.prec)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        Zpn::new(&self.value * &rhs.value, &self.prec)
    }
    fn neg_ref(&self) -> Self {
        Zpn::new(-&self.value, &self.prec)
    }
    fn valuation(&self) -> Option<u32> {
        self.prec.valuation_of(&self.value)
    }
    fn unit_inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        Some(Zpn::new(self.prec.inverse_of(&self.value)?, &self.prec))
    }
    fn div_p_pow(&self, k: u32) -> Self {
        debug_assert!(self.valuation().map_or(true, |v| v >= k));
        Zpn::new(&self.value / BigInt::from(self.prec.p).pow(k), &self.prec)
    }
    fn prime(&self) -> u64 {
        self.prec.p
    }
    fn precision(&self) -> u32 {
        self.prec.n
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Zpn::new(v, &self.prec)
    }
}

/// The ring `Z_{p²}/p^N` for odd `p`.
#[derive(Debug, PartialEq, Eq)]
pub struct Zp2Ring {
    prec: Arc<Precision>,
    nonresidue: BigInt,
}

/// Least quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    let pb = BigInt::from(p);
    let e = BigInt::from((p - 1) / 2);
    (2..p)
        .find(|&s| !BigInt::from(s).modpow(&e, &pb).is_one())
        .expect("odd primes have non-residues")
}

impl Zp2Ring {
    pub fn new(p: u64, n: u32) -> Result<Arc<Self>, PadicError> {
        if p == 2 {
            return Err(PadicError::EvenPrime);
        }
        let prec = Precision::new(p, n)?;
        Ok(Arc::new(Zp2Ring {
            prec,
            nonresidue: BigInt::from(least_nonresidue(p)),
        }))
    }

    pub fn p(&self) -> u64 {
        self.prec.p
    }

    pub fn n(&self) -> u32 {
        self.prec.n
    }

    pub fn nonresidue(&self) -> &BigInt {
        &self.nonresidue
    }

    pub fn precision(&self) -> &Arc<Precision> {
        &self.prec
    }

    pub fn element(self: &Arc<Self>, u: impl Into<BigInt>, v: impl Into<BigInt>) -> Zp2 {
        Zp2 {
            u: self.prec.reduce(u.into()),
            v: self.prec.reduce(v.into()),
            ring: self.clone(),
        }
    }

    pub fn int(self: &Arc<Self>, u: impl Into<BigInt>) -> Zp2 {
        self.element(u, 0)
    }

    pub fn omega(self: &Arc<Self>) -> Zp2 {
        self.element(0, 1)
    }

    pub fn p_el(self: &Arc<Self>) -> Zp2 {
        self.int(self.prec.p)
    }
}

/// `u + v ω`.
#[derive(Clone, PartialEq, Eq)]
pub struct Zp2 {
    u: BigInt,
    v: BigInt,
    ring: Arc<Zp2Ring>,
}

impl fmt::Debug for Zp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}ω (mod {}^{})",
            self.u,
            self.v,
            self.ring.p(),
            self.ring.n()
        )
    }
}

impl Zp2 {
    pub fn u(&self) -> &BigInt {
        &self.u
    }

    pub fn v(&self) -> &BigInt {
        &self.v
    }

    pub fn ring(&self) -> &Arc<Zp2Ring> {
        &self.ring
    }

    /// `u + vω ↦ u - vω`.
    pub fn frobenius(&self) -> Self {
        self.ring.element(self.u.clone(), -&self.v)
    }

    /// `x · x̄ = u² - s v²`, an element of `Z/p^N`.
    pub fn norm(&self) -> Zpn {
        Zpn::new(
            &self.u * &self.u - &self.ring.nonresidue * &self.v * &self.v,
            &self.ring.prec,
        )
    }

    pub fn inverse(&self) -> Result<Self, PadicError> {
        self.unit_inverse().ok_or(PadicError::NotAUnit)
    }

    /// All `p^{2N}` elements.
    pub fn enumerate(ring: &Arc<Zp2Ring>) -> impl Iterator<Item = Zp2> + '_ {
        let m = ring.prec.modulus.to_u64().expect("enumeration needs p^N < 2^64");
        (0..m).flat_map(move |u| (0..m).map(move |v| ring.element(u, v)))
    }
}

impl LocalRing for Zp2 {
    fn zero_like(&self) -> Self {
        self.ring.int(0)
    }
    fn one_like(&self) -> Self {
        self.ring.int(1)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.ring.element(&self.u + &rhs.u, &self.v + &rhs.v)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.ring.element(&self.u - &rhs.u, &self.v - &rhs.v)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        let s = &self.ring.nonresidue;
        self.ring.element(
            &self.u * &rhs.u + s * &self.v * &rhs.v,
            &self.u * &rhs.v + &self.v * &rhs.u,
        )
    }
    fn neg_ref(&self) -> Self {
        self.ring.element(-&self.u, -&self.v)
    }
    fn valuation(&self) -> Option<u32> {
        let pr = &self.ring.prec;
        match (pr.valuation_of(&self.u), pr.valuation_of(&self.v)) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.min(b)),
        }
    }
    fn unit_inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        // (u + vω)⁻¹ = (u - vω) / (u² - s v²); the norm is a unit because s
        // is a non-residue.
        let n_inv = self.norm().unit_inverse()?;
        let conj = self.frobenius();
        Some(conj.mul_ref(&self.ring.int(n_inv.value().clone())))
    }
    fn div_p_pow(&self, k: u32) -> Self {
        debug_assert!(self.valuation().map_or(true, |v| v >= k));
        let d = BigInt::from(self.ring.p()).pow(k);
        self.ring.element(&self.u / &d, &self.v / &d)
    }
    fn prime(&self) -> u64 {
        self.ring.p()
    }
    fn precision(&self) -> u32 {
        self.ring.n()
    }
    fn from_i64_like(&self, v: i64) -> Self {
        self.ring.int(v)
    }
}

macro_rules! ring_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                self.add_ref(&rhs)
            }
        }
        impl<'a> Add<&'a $t> for &'a $t {
            type Output = $t;
            fn add(self, rhs: &'a $t) -> $t {
                self.add_ref(rhs)
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                self.sub_ref(&rhs)
            }
        }
        impl<'a> Sub<&'a $t> for &'a $t {
            type Output = $t;
            fn sub(self, rhs: &'a $t) -> $t {
                self.sub_ref(rhs)
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                self.mul_ref(&rhs)
            }
        }
        impl<'a> Mul<&'a $t> for &'a $t {
            type Output = $t;
            fn mul(self, rhs: &'a $t) -> $t {
                self.mul_ref(rhs)
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                self.neg_ref()
            }
        }
        impl<'a> Neg for &'a $t {
            type Output = $t;
            fn neg(self) -> $t {
                self.neg_ref()
            }
        }
    };
}

ring_ops!(Zpn);
ring_ops!(Zp2);
