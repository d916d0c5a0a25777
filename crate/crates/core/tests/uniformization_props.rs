mod common;

use common::maximal_orders;
use num_complex::Complex64;
use proptest::prelude::*;
use quatks_core::elliptic::check_metric_identity_elliptic;
use quatks_core::ks::{
    closed_form_beta, defining_residual, ks_images, psi_constant, solve_beta, solve_beta_in_slot, MetricCheck,
    PairingSlot,
};
use quatks_core::riemann::{
    check_positivity, faltings_norm_sq_closed, faltings_norm_sq_numeric, period_lattice, petersson_norm,
    real_embedding, sign_normalized_mu,
};
use quatks_core::{MatrixF64, MuMatrixF64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tau() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, 0.1f64..10.0).prop_map(|(re, im)| Complex64::new(re, im))
}

/// `[[a, b], [c, -a]]` with `-a² - bc = d_B`.
fn mu_matrix() -> impl Strategy<Value = (u64, MuMatrixF64)> {
    (prop::sample::select(vec![1u64, 6, 14, 22]), -5.0f64..5.0, 0.2f64..5.0, any::<bool>()).prop_map(
        |(d_b, a, b, neg)| {
            let b = if neg { -b } else { b };
            let c = -(a * a + d_b as f64) / b;
            (d_b, MuMatrixF64::new(a, b, c, -a))
        },
    )
}

fn max_entry_diff(x: &MatrixF64, y: &MatrixF64) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..2 {
        for c in 0..2 {
            worst = worst.max((x[(r, c)] - y[(r, c)]).abs());
        }
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn covolume_is_d_b_times_im_squared(k in 0usize..4, t in tau()) {
        let (d_b, o) = &maximal_orders()[k];
        let sigma = real_embedding(o.algebra()).unwrap();
        let lat = period_lattice(o, &sigma, t).unwrap();
        let ratio = lat.covolume() / (t.im * t.im);
        prop_assert!((ratio - *d_b as f64).abs() / (*d_b as f64) < 1e-9, "ratio {}", ratio);
    }

    #[test]
    fn covolume_is_embedding_independent(k in 0usize..4, t in tau(), s in -3i32..=3, swap in any::<bool>()) {
        let (_, o) = &maximal_orders()[k];
        let sigma = real_embedding(o.algebra()).unwrap();
        let g = if swap {
            MatrixF64::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]])
        } else {
            MatrixF64::from_rows(vec![vec![1.0, s as f64], vec![0.0, 1.0]])
        };
        let conj = sigma.conjugated(&g).unwrap();
        let v1 = period_lattice(o, &sigma, t).unwrap().covolume();
        let v2 = period_lattice(o, &conj, t).unwrap().covolume();
        prop_assert!((v1 - v2).abs() / v1 < 1e-9);
    }

    #[test]
    fn faltings_numeric_matches_closed_form(k in 0usize..4, t in tau()) {
        let (d_b, o) = &maximal_orders()[k];
        let sigma = real_embedding(o.algebra()).unwrap();
        let lat = period_lattice(o, &sigma, t).unwrap();
        let num = faltings_norm_sq_numeric(&lat);
        let closed = faltings_norm_sq_closed(t, *d_b).unwrap();
        prop_assert!(MetricCheck::compare(num, closed, 1e-9).pass);
        let psi = psi_constant(&MuMatrixF64::new(0.0, 1.0, -(*d_b as f64), 0.0), *d_b, 1e-9).unwrap();
        let pet = petersson_norm(t).unwrap();
        prop_assert!(MetricCheck::compare(num, psi.modulus() * pet * pet, 1e-9).pass);
    }

    #[test]
    fn solve_beta_matches_closed_form((d_b, mu) in mu_matrix()) {
        mu.check(d_b, 1e-9, 1e-9).unwrap();
        let solved = solve_beta(&mu).unwrap();
        let closed = closed_form_beta(&mu);
        for j in 1..=2 {
            prop_assert!(max_entry_diff(solved.get(j), closed.get(j)) < 1e-12);
        }
        prop_assert!(defining_residual(&mu, &solved, PairingSlot::Second).unwrap() < 1e-12);
        let first = solve_beta_in_slot(&mu, PairingSlot::First).unwrap();
        prop_assert!(defining_residual(&mu, &first, PairingSlot::First).unwrap() < 1e-12);
        let w = ks_images(&mu).w_determinant();
        prop_assert!((w - d_b as f64).abs() / (d_b as f64) < 1e-9);
    }

    #[test]
    fn elliptic_identity(t in tau()) {
        let c = check_metric_identity_elliptic(t, 1e-12).unwrap();
        prop_assert!(c.pass, "{:?}", c);
        let expected = t.im / std::f64::consts::PI;
        prop_assert!((c.lhs - expected).abs() / expected < 1e-12);
    }
}

#[test]
fn positivity_for_sign_normalized_mu() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (_, o) in maximal_orders() {
        let sigma = real_embedding(o.algebra()).unwrap();
        let mu = sign_normalized_mu(&o, &o.find_mu_default().unwrap(), &sigma).unwrap();
        for t in [Complex64::new(0.0, 1.0), Complex64::new(-1.3, 0.4), Complex64::new(1.7, 6.0)] {
            assert!(check_positivity(&o, &mu, &sigma, t, 500, &mut rng).unwrap());
            assert!(!check_positivity(&o, &mu.negated(), &sigma, t, 500, &mut rng).unwrap());
        }
    }
}

#[test]
fn split_case_agrees_with_squared_elliptic_identity() {
    // For d_B = 1 the quaternionic identity is the square of the elliptic one.
    for t in [Complex64::new(0.0, 1.0), Complex64::new(0.5, 2.5)] {
        let quat = faltings_norm_sq_closed(t, 1).unwrap();
        let ell = check_metric_identity_elliptic(t, 1e-12).unwrap().lhs;
        assert!((quat - ell * ell).abs() / quat < 1e-12);
    }
}

#[test]
fn psi_square_roots() {
    for d_b in [1u64, 6, 14, 22] {
        let mu = MuMatrixF64::new(0.0, 1.0, -(d_b as f64), 0.0);
        let psi = psi_constant(&mu, d_b, 1e-12).unwrap();
        assert_eq!(psi.has_integral_square_root(), d_b == 1);
    }
}
