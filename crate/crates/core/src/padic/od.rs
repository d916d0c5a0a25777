//! The local maximal order `O_D = Z_{p²} + Z_{p²} j` of the ramified
//! quaternion algebra at `p`, with `j² = p` and `j x = x̄ j`, and its
//! splitting `τ : O_D ⊗ Z_{p²} ≅ (R R; pR R)`.

use std::sync::Arc;

use super::linalg::Mat2;
use super::ring::{LocalRing, Zp2, Zp2Ring};

/// `x + y j`.
#[derive(Debug, Clone, PartialEq)]
pub struct OdElement {
    pub x: Zp2,
    pub y: Zp2,
}

impl OdElement {
    pub fn new(x: Zp2, y: Zp2) -> Self {
        OdElement { x, y }
    }

    pub fn scalar(x: Zp2) -> Self {
        let zero = x.zero_like();
        OdElement { x, y: zero }
    }

    pub fn j(ring: &Arc<Zp2Ring>) -> Self {
        OdElement::new(ring.int(0), ring.int(1))
    }

    pub fn one(ring: &Arc<Zp2Ring>) -> Self {
        OdElement::scalar(ring.int(1))
    }

    /// `(x₁ + y₁j)(x₂ + y₂j) = (x₁x₂ + p y₁ȳ₂) + (x₁y₂ + y₁x̄₂) j`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.x.ring().p_el();
        let x = &self.x * &rhs.x + &(&p * &self.y) * &rhs.y.frobenius();
        let y = &self.x * &rhs.y + &self.y * &rhs.x.frobenius();
        OdElement { x, y }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        OdElement {
            x: &self.x + &rhs.x,
            y: &self.y + &rhs.y,
        }
    }

    /// Main involution `x + yj ↦ x̄ - yj`.
    pub fn conjugate_main(&self) -> Self {
        OdElement {
            x: self.x.frobenius(),
            y: -&self.y,
        }
    }

    /// `nrd(x + yj) = x x̄ - p y ȳ` (lies in `Z_p`).
    pub fn reduced_norm(&self) -> Zp2 {
        let p = self.x.ring().p_el();
        &(&self.x * &self.x.frobenius()) - &(&p * &(&self.y * &self.y.frobenius()))
    }

    /// Generators `1, ω, j, ωj` of `O_D` as a `Z_p`-module.
    pub fn generators(ring: &Arc<Zp2Ring>) -> [OdElement; 4] {
        let (zero, one, w) = (ring.int(0), ring.int(1), ring.omega());
        [
            OdElement::new(one.clone(), zero.clone()),
            OdElement::new(w.clone(), zero.clone()),
            OdElement::new(zero.clone(), one),
            OdElement::new(zero, w),
        ]
    }
}

/// An element `[[α, β], [p γ, δ]]` of the matrix order, stored with the
/// lower-left entry already divided by `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderMatrix {
    pub a11: Zp2,
    pub a12: Zp2,
    pub a21_over_p: Zp2,
    pub a22: Zp2,
}

impl OrderMatrix {
    pub fn new(a11: Zp2, a12: Zp2, a21_over_p: Zp2, a22: Zp2) -> Self {
        OrderMatrix {
            a11,
            a12,
            a21_over_p,
            a22,
        }
    }

    pub fn from_i64(ring: &Arc<Zp2Ring>, m: [[i64; 2]; 2]) -> Self {
        OrderMatrix::new(ring.int(m[0][0]), ring.int(m[0][1]), ring.int(m[1][0]), ring.int(m[1][1]))
    }

    /// `e₁ = diag(1, 0)`.
    pub fn e1(ring: &Arc<Zp2Ring>) -> Self {
        OrderMatrix::from_i64(ring, [[1, 0], [0, 0]])
    }

    /// `e₂ = diag(0, 1)`.
    pub fn e2(ring: &Arc<Zp2Ring>) -> Self {
        OrderMatrix::from_i64(ring, [[0, 0], [0, 1]])
    }

    /// `[[0, 1], [p, 0]]`.
    pub fn j(ring: &Arc<Zp2Ring>) -> Self {
        OrderMatrix::from_i64(ring, [[0, 1], [1, 0]])
    }

    fn p(&self) -> Zp2 {
        self.a11.ring().p_el()
    }

    pub fn to_mat2(&self) -> Mat2<Zp2> {
        Mat2::new(
            self.a11.clone(),
            self.a12.clone(),
            &self.p() * &self.a21_over_p,
            self.a22.clone(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.p();
        OrderMatrix {
            a11: &self.a11 * &rhs.a11 + &(&p * &self.a12) * &rhs.a21_over_p,
            a12: &self.a11 * &rhs.a12 + &self.a12 * &rhs.a22,
            a21_over_p: &self.a21_over_p * &rhs.a11 + &self.a22 * &rhs.a21_over_p,
            a22: &(&p * &self.a21_over_p) * &rhs.a12 + &self.a22 * &rhs.a22,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        OrderMatrix {
            a11: &self.a11 + &rhs.a11,
            a12: &self.a12 + &rhs.a12,
            a21_over_p: &self.a21_over_p + &rhs.a21_over_p,
            a22: &self.a22 + &rhs.a22,
        }
    }

    pub fn det(&self) -> Zp2 {
        &self.a11 * &self.a22 - &(&self.p() * &self.a12) * &self.a21_over_p
    }

    /// `[[δ, -β], [-pγ, α]]`, again in the order.
    pub fn adjugate(&self) -> Self {
        OrderMatrix {
            a11: self.a22.clone(),
            a12: -&self.a12,
            a21_over_p: -&self.a21_over_p,
            a22: self.a11.clone(),
        }
    }

    pub fn entries(&self) -> [&Zp2; 4] {
        [&self.a11, &self.a12, &self.a21_over_p, &self.a22]
    }

    /// Divides every entry by `p^k`; entries must be divisible.
    pub fn div_p_pow(&self, k: u32) -> Option<Self> {
        if self.entries().iter().any(|e| e.valuation().map_or(false, |v| v < k)) {
            return None;
        }
        Some(OrderMatrix {
            a11: self.a11.div_p_pow(k),
            a12: self.a12.div_p_pow(k),
            a21_over_p: self.a21_over_p.div_p_pow(k),
            a22: self.a22.div_p_pow(k),
        })
    }

    pub fn scale(&self, s: &Zp2) -> Self {
        OrderMatrix {
            a11: &self.a11 * s,
            a12: &self.a12 * s,
            a21_over_p: &self.a21_over_p * s,
            a22: &self.a22 * s,
        }
    }
}

/// `τ((x + yj) ⊗ a) = [[a x, a y], [p a ȳ, a x̄]]`.
pub fn tau_isomorphism(d: &OdElement, scalar: &Zp2) -> OrderMatrix {
    OrderMatrix {
        a11: scalar * &d.x,
        a12: scalar * &d.y,
        a21_over_p: scalar * &d.y.frobenius(),
        a22: scalar * &d.x.frobenius(),
    }
}

/// A finite sum of simple tensors `Σ dᵢ ⊗ aᵢ` in `O_D ⊗_{Z_p} Z_{p²}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OdTensor {
    pub terms: Vec<(OdElement, Zp2)>,
}

impl OdTensor {
    pub fn simple(d: OdElement, a: Zp2) -> Self {
        OdTensor {
            terms: vec![(d, a)],
        }
    }

    /// `(d ⊗ a)(d' ⊗ a') = dd' ⊗ aa'`, extended bilinearly.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (d1, a1) in &self.terms {
            for (d2, a2) in &rhs.terms {
                terms.push((d1.mul(d2), a1 * a2));
            }
        }
        OdTensor { terms }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        OdTensor { terms }
    }

    pub fn tau(&self) -> OrderMatrix {
        let ring = self.terms[0].1.ring().clone();
        self.terms
            .iter()
            .map(|(d, a)| tau_isomorphism(d, a))
            .fold(OrderMatrix::from_i64(&ring, [[0, 0], [0, 0]]), |acc, m| acc.add(&m))
    }
}
