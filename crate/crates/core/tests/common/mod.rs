#![allow(dead_code)]

use num_traits::FromPrimitive;
use quatks_core::{Order, QuatAlgebraQ, QuatQ, Rational};

pub fn q(n: i64) -> Rational {
    Rational::from_i64(n).unwrap()
}

pub fn half(n: i64) -> Rational {
    Rational::new(n.into(), 2.into())
}

pub fn alg(a: i64, b: i64) -> QuatAlgebraQ {
    QuatAlgebraQ::new(q(a), q(b)).unwrap()
}

/// `Z⟨1, i, j, (1+i+j+k)/2⟩` in `(-1, b)`, `b ≡ 3 mod 4`.
pub fn half_integral_order(b: i64) -> Order {
    let h = alg(-1, b);
    let last = h.element([half(1), half(1), half(1), half(1)]);
    Order::new([h.one(), h.i(), h.j(), last]).unwrap()
}

/// Matrix units of `M₂(Z)` inside `(1, 1)`.
pub fn matrix_order() -> Order {
    let h = alg(1, 1);
    let e = |c: [i64; 4]| h.element(c.map(half));
    Order::new([e([1, 1, 0, 0]), e([1, -1, 0, 0]), e([0, 0, 1, 1]), e([0, 0, 1, -1])]).unwrap()
}

/// The four maximal orders used throughout, with `d_B`.
pub fn maximal_orders() -> Vec<(u64, Order)> {
    vec![
        (1, matrix_order()),
        (6, half_integral_order(3)),
        (14, half_integral_order(7)),
        (22, half_integral_order(11)),
    ]
}

pub fn element(h: &QuatAlgebraQ, c: [i64; 4]) -> QuatQ {
    h.element(c.map(q))
}
