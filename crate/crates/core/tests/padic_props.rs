use std::sync::Arc;

use proptest::prelude::*;
use quatks_core::padic::module::det_pairing_identity;
use quatks_core::padic::{
    det_image, hom_brute_force, hom_module, split_prime_check, tau_isomorphism, twist_by_ad_mu, LocalRing, Mat2,
    ModuleKind, OdElement, OdModule, OdTensor, PadicError, PairRelation, Precision, SplitModule, Zp2, Zp2Ring, Zpn,
};

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11])
}

fn ring() -> impl Strategy<Value = Arc<Zp2Ring>> {
    (prime(), 2u32..=20).prop_map(|(p, n)| Zp2Ring::new(p, n).unwrap())
}

fn zp2(r: &Arc<Zp2Ring>) -> impl Strategy<Value = Zp2> {
    let r = r.clone();
    (any::<i64>(), any::<i64>()).prop_map(move |(u, v)| r.element(u, v))
}

fn od(r: &Arc<Zp2Ring>) -> impl Strategy<Value = OdElement> {
    (zp2(r), zp2(r)).prop_map(|(x, y)| OdElement::new(x, y))
}

fn ring_with_ods() -> impl Strategy<Value = (Arc<Zp2Ring>, OdElement, OdElement, Zp2, Zp2)> {
    ring().prop_flat_map(|r| (Just(r.clone()), od(&r), od(&r), zp2(&r), zp2(&r)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tau_is_multiplicative((r, u, v, s, t) in ring_with_ods()) {
        let (tu, tv) = (OdTensor::simple(u.clone(), s.clone()), OdTensor::simple(v.clone(), t.clone()));
        let lhs = tu.mul(&tv).tau();
        let rhs = tu.tau().mul(&tv.tau());
        prop_assert_eq!(&lhs, &rhs);
        let sum = tu.add(&tv);
        prop_assert_eq!(sum.mul(&sum).tau(), sum.tau().mul(&sum.tau()));
        // the (2,1) entry is p times the stored entry
        let full = lhs.to_mat2();
        prop_assert!(full.m[1][0].valuation().map_or(true, |k| k >= 1));
        let one = r.int(1);
        prop_assert_eq!(tau_isomorphism(&u, &one).det(), u.reduced_norm());
    }

    #[test]
    fn od_norm_is_multiplicative((_r, u, v, _s, _t) in ring_with_ods()) {
        prop_assert_eq!(u.mul(&v).reduced_norm(), &u.reduced_norm() * &v.reduced_norm());
        prop_assert_eq!(u.mul(&v).conjugate_main(), v.conjugate_main().mul(&u.conjugate_main()));
    }

    #[test]
    fn zp2_ring_axioms((_r, u, v, s, t) in ring_with_ods()) {
        let (x, y, z) = (u.x, v.y, s);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(x.frobenius().frobenius(), x.clone());
        prop_assert_eq!((&x * &y).frobenius(), &x.frobenius() * &y.frobenius());
        if t.is_unit() {
            prop_assert_eq!(&t * &t.inverse().unwrap(), t.one_like());
        } else {
            prop_assert_eq!(t.inverse().unwrap_err(), PadicError::NotAUnit);
        }
    }

    #[test]
    fn determinant_condition_and_pairing((r, u, _v, s, t) in ring_with_ods(), standard in any::<bool>()) {
        let kind = if standard { ModuleKind::Standard } else { ModuleKind::Twisted };
        let m = OdModule::of_kind(&r, kind);
        prop_assert!(m.determinant_condition(&tau_isomorphism(&u, &r.int(1))));
        let x = [s.clone(), t.clone()];
        let y = [t, s];
        prop_assert!(det_pairing_identity(&m, &u, &x, &y));
    }

    #[test]
    fn twist_is_fixed_point_free_involution(r in ring(), standard in any::<bool>()) {
        let kind = if standard { ModuleKind::Standard } else { ModuleKind::Twisted };
        let m = OdModule::of_kind(&r, kind);
        let t = twist_by_ad_mu(&m, None).unwrap();
        prop_assert_eq!(t.kind().unwrap(), kind.other());
        prop_assert_eq!(twist_by_ad_mu(&t, None).unwrap().kind().unwrap(), kind);
        let j = OdElement::j(&r);
        prop_assert_eq!(twist_by_ad_mu(&m, Some(&j)).unwrap().kind().unwrap(), kind.other());
    }

    #[test]
    fn twist_by_general_mu_depends_on_parity((r, u, _v, _s, _t) in ring_with_ods(), standard in any::<bool>()) {
        let kind = if standard { ModuleKind::Standard } else { ModuleKind::Twisted };
        let m = OdModule::of_kind(&r, kind);
        // v(nrd(μ)) odd swaps the class, even keeps it
        let v = u.reduced_norm().valuation();
        prop_assume!(v.map_or(false, |v| v + 1 < r.n()));
        let expected = if v.unwrap() % 2 == 1 { kind.other() } else { kind };
        prop_assert_eq!(twist_by_ad_mu(&m, Some(&u)).unwrap().kind().unwrap(), expected);
    }

    #[test]
    fn unit_normalization(r in ring(), w in any::<i64>()) {
        let u = r.element(w, 1);
        prop_assume!(u.is_unit());
        let m = OdModule::new(&r.p_el() * &u, u.inverse().unwrap()).unwrap();
        prop_assert_eq!(m.kind().unwrap(), ModuleKind::Standard);
        let m = OdModule::new(u.inverse().unwrap(), &r.p_el() * &u).unwrap();
        prop_assert_eq!(m.kind().unwrap(), ModuleKind::Twisted);
    }
}

#[test]
fn hom_and_det_image_across_primes_and_precisions() {
    for p in [3u64, 5, 7, 11] {
        for n in [2u32, 5, 10, 20] {
            let r = Zp2Ring::new(p, n).unwrap();
            let (s, t) = (OdModule::standard(&r), OdModule::twisted(&r));
            let h = hom_module(&t, &s).unwrap();
            assert_eq!((h.rank, h.torsion, h.relation), (1, 0, PairRelation::Distinct));
            assert_eq!(h.generator, [r.int(1), r.p_el()]);
            assert_eq!(det_image(&t, &s).unwrap().valuation, 1);
            assert_eq!(det_image(&s, &t).unwrap().valuation, 1);
            for m in [&s, &t] {
                let h = hom_module(m, m).unwrap();
                assert_eq!((h.rank, h.relation), (1, PairRelation::SameClass));
                assert_eq!(det_image(m, m).unwrap().valuation, 0);
            }
        }
    }
}

#[test]
fn exhaustive_hom_count() {
    let r = Zp2Ring::new(3, 2).unwrap();
    for (tp, t) in [
        (OdModule::twisted(&r), OdModule::standard(&r)),
        (OdModule::standard(&r), OdModule::twisted(&r)),
        (OdModule::standard(&r), OdModule::standard(&r)),
    ] {
        let c = hom_brute_force(&tp, &t).unwrap();
        assert_eq!((c.candidates, c.solutions), (81, 9));
        assert!(c.all_multiples);
    }
}

#[test]
fn split_check_is_basis_independent() {
    for p in [3u64, 5, 7, 11] {
        for n in [2u32, 20] {
            let prec = Precision::new(p, n).unwrap();
            let z = Zpn::new(0, &prec);
            let base = split_prime_check(&SplitModule::standard(&prec)).unwrap();
            assert!(base.pass());
            assert_eq!(base.det_valuation, 0);
            for (g, mu) in [
                ([[1, 1], [0, 1]], [[0, 1], [1, 0]]),
                ([[2, 1], [1, 1]], [[1, 2], [3, 7]]),
                ([[5, 3], [3, 2]], [[1, 0], [1, 1]]),
            ] {
                let m = SplitModule::new(Mat2::from_i64(&z, g), Mat2::from_i64(&z, mu));
                let Ok(m) = m else { continue };
                assert_eq!(split_prime_check(&m).unwrap(), base, "p={p} g={g:?} mu={mu:?}");
            }
        }
    }
}

#[test]
fn even_prime_is_rejected() {
    assert_eq!(Zp2Ring::new(2, 5).unwrap_err(), PadicError::EvenPrime);
    assert_eq!(Zp2Ring::new(9, 5).unwrap_err(), PadicError::NotPrime(9));
}
