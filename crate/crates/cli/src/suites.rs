//! The verification suites run by `verify-all`, one catalog entry at a time
//! plus the catalog-independent elliptic and split-prime suites.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use quatks_core::elliptic::{check_metric_identity_elliptic, e_riemann};
use quatks_core::hilbert::{candidate_primes, has_primitive_solution_mod};
use quatks_core::ks::{closed_form_beta, defining_residual, ks_images, psi_constant, solve_beta, MetricCheck, PairingSlot};
use quatks_core::padic::{
    det_image, hom_brute_force, hom_module, split_prime_check, twist_by_ad_mu, Mat2, ModuleKind, OdModule,
    PadicError, PairRelation, Precision, SplitModule, Zp2Ring, Zpn,
};
use quatks_core::riemann::{
    faltings_norm_sq_numeric, period_lattice, petersson_norm, positivity_sign_sweep, real_embedding, riemann_gram,
    sign_normalized_mu, RealEmbedding,
};
use quatks_core::{
    discriminant, format_rational, hilbert_symbol, ramified_places, MuElement, MuMatrixF64, Order, Place,
    QuatAlgebraQ, Rational,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::catalog::CatalogEntry;
use crate::config::RunConfig;
use crate::report::*;

/// Exponent `k` for the brute-force solvability search modulo `p^k`.
pub fn brute_force_exponent(p: u64) -> u32 {
    if p == 2 {
        5
    } else {
        3
    }
}

fn squarefree_i64(r: &Rational) -> Option<i64> {
    if !r.is_integer() {
        return None;
    }
    let n = r.to_integer().to_i64()?;
    let m = n.unsigned_abs();
    let mut d = 2u64;
    while d * d <= m {
        if m % (d * d) == 0 {
            return None;
        }
        d += 1;
    }
    Some(n)
}

/// Compares the symbol at every candidate prime against exhaustive search.
/// `None` when `a, b` are not squarefree integers or a modulus is too big.
pub fn brute_force_agrees(algebra: &QuatAlgebraQ, exponent: impl Fn(u64) -> u32) -> Option<bool> {
    let a = squarefree_i64(algebra.a())?;
    let b = squarefree_i64(algebra.b())?;
    let mut agrees = true;
    for p in candidate_primes(algebra).ok()? {
        let k = exponent(p);
        if p.checked_pow(k)? > 5000 {
            return None;
        }
        let symbol = hilbert_symbol(algebra.a(), algebra.b(), Place::Prime(p)).ok()?;
        agrees &= (symbol == 1) == has_primitive_solution_mod(a, b, p, k);
    }
    Some(agrees)
}

fn error(id: &str, stage: &str, message: impl ToString) -> Record {
    Record::Error(ErrorRecord {
        order_id: id.to_string(),
        stage: stage.to_string(),
        message: message.to_string(),
        pass: false,
    })
}

fn entry_rng(cfg: &RunConfig, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    rng
}

/// Everything needed downstream of the order checks.
struct Polarized {
    order: Order,
    mu: MuElement,
    sigma: RealEmbedding<f64>,
    d_b: u64,
}

/// Runs every per-entry check. `stream` selects an independent random
/// stream so results do not depend on scheduling.
pub fn verify_entry(entry: &CatalogEntry, stream: u64, cfg: &RunConfig) -> Vec<Record> {
    let id = entry.id.as_str();
    let mut out = Vec::new();
    let parsed = match entry.parse() {
        Ok(p) => p,
        Err(e) => return vec![error(id, "parse", e)],
    };

    let d_b = match discriminant(&parsed.algebra) {
        Ok(d) => d,
        Err(e) => return vec![error(id, "discriminant", e)],
    };
    let ramified = ramified_places(&parsed.algebra)
        .map(|v| v.iter().map(Place::to_string).collect())
        .unwrap_or_default();
    let agrees = brute_force_agrees(&parsed.algebra, brute_force_exponent).unwrap_or(true);
    out.push(Record::Discriminant(DiscriminantRecord {
        order_id: id.into(),
        a: format_rational(parsed.algebra.a()),
        b: format_rational(parsed.algebra.b()),
        d_b,
        expected: entry.expected_d_b,
        ramified,
        brute_force_agrees: agrees,
        pass: agrees && d_b == entry.expected_d_b,
    }));

    let order = match parsed.order() {
        Ok(o) => o,
        Err(violated) => {
            out.push(Record::Order(OrderRecord {
                order_id: id.into(),
                reduced_disc: None,
                dual_index: None,
                maximal: false,
                violated,
                pass: false,
            }));
            return out;
        }
    };
    let reduced = order.reduced_discriminant();
    let dual = order.dual_lattice_index();
    let maximal = matches!(&reduced, Ok(r) if *r == BigInt::from(d_b));
    let squared = matches!(&reduced, Ok(r) if dual == r * r);
    let mut violated = Vec::new();
    if !maximal {
        violated.push("maximal".to_string());
    }
    if !squared {
        violated.push("dual_index_is_square".to_string());
    }
    out.push(Record::Order(OrderRecord {
        order_id: id.into(),
        reduced_disc: reduced.as_ref().ok().map(|r| r.to_string()),
        dual_index: Some(dual.to_string()),
        maximal,
        violated,
        pass: maximal && squared && d_b == entry.expected_d_b,
    }));
    if !maximal {
        return out;
    }

    let pol = match polarize(&order, parsed.mu.as_ref(), d_b) {
        Ok(p) => p,
        Err(e) => {
            out.push(error(id, "mu", e));
            return out;
        }
    };
    out.push(Record::Mu(MuRecord {
        order_id: id.into(),
        mu: pol.mu.element().coords().iter().map(format_rational).collect(),
        from_hint: parsed.mu.is_some(),
        star_stable: pol.order.check_star_stabilizes(&pol.mu),
        pass: pol.order.check_star_stabilizes(&pol.mu),
    }));

    let mut rng = entry_rng(cfg, stream);
    let taus: Vec<Complex64> = (0..cfg.tau_samples).map(|_| cfg.sample_tau(&mut rng)).collect();
    out.push(riemann_record(id, &pol));
    for tau in [Complex64::new(0.0, 1.0), taus[0]] {
        out.push(
            match positivity_sign_sweep(&pol.order, &pol.mu, &pol.sigma, tau, cfg.positivity_samples, &mut rng) {
                Ok(s) => Record::Positivity(PositivityRecord {
                    order_id: id.into(),
                    tau: tau_json(tau),
                    samples: cfg.positivity_samples,
                    plus_positive: s.plus_positive,
                    minus_positive: s.minus_positive,
                    pass: s.plus_positive && !s.minus_positive,
                }),
                Err(e) => error(id, "positivity", e),
            },
        );
    }
    out.push(ks_beta_record(id, &pol, cfg));
    for &tau in &taus {
        out.extend(lattice_records(id, &pol, tau, cfg));
    }
    for p in odd_prime_divisors(d_b) {
        for kind in [ModuleKind::Standard, ModuleKind::Twisted] {
            out.push(match padic_twist_record(p, cfg.precision, kind) {
                Ok(mut r) => {
                    r.order_id = Some(id.into());
                    Record::Padic(r)
                }
                Err(e) => error(id, "padic", e),
            });
        }
    }
    out
}

fn polarize(order: &Order, hint: Option<&quatks_core::QuatQ>, d_b: u64) -> anyhow::Result<Polarized> {
    let mu = match hint {
        Some(m) => MuElement::new(order, m.clone())?,
        None => order.find_mu_default()?,
    };
    let sigma = real_embedding(order.algebra())?;
    let mu = sign_normalized_mu(order, &mu, &sigma)?;
    Ok(Polarized {
        order: order.clone(),
        mu,
        sigma,
        d_b,
    })
}

fn riemann_record(id: &str, pol: &Polarized) -> Record {
    match riemann_gram(&pol.order, &pol.mu) {
        Ok(g) => Record::RiemannForm(RiemannFormRecord {
            order_id: id.into(),
            integral: true,
            skew: g.is_skew(),
            det: g.determinant().to_string(),
            pass: g.is_skew() && g.determinant().is_one(),
        }),
        Err(e) => Record::RiemannForm(RiemannFormRecord {
            order_id: id.into(),
            integral: false,
            skew: false,
            det: e.to_string(),
            pass: false,
        }),
    }
}

fn ks_beta_record(id: &str, pol: &Polarized, cfg: &RunConfig) -> Record {
    let mu = MuMatrixF64::from_embedding(&pol.sigma, &pol.mu);
    let run = || -> anyhow::Result<KsBetaRecord> {
        mu.check(pol.d_b, cfg.tol, cfg.tol * pol.d_b as f64)?;
        let solved = solve_beta(&mu)?;
        let closed = closed_form_beta(&mu);
        let mut diff = 0.0f64;
        for j in 1..=2 {
            for r in 0..2 {
                for c in 0..2 {
                    diff = diff.max((solved.get(j)[(r, c)] - closed.get(j)[(r, c)]).abs());
                }
            }
        }
        let residual = defining_residual(&mu, &solved, PairingSlot::Second)?;
        let w_det = ks_images(&mu).w_determinant();
        let w_ok = MetricCheck::compare(w_det, pol.d_b as f64, cfg.tol).pass;
        Ok(KsBetaRecord {
            order_id: id.into(),
            d_b: pol.d_b,
            sigma_mu: [mu.a, mu.b, mu.c, mu.d],
            max_entry_error: diff,
            residual,
            w_det,
            pass: diff < cfg.exact_tol && residual < cfg.exact_tol && w_ok,
        })
    };
    match run() {
        Ok(r) => Record::KsBeta(r),
        Err(e) => error(id, "ks_beta", e),
    }
}

fn lattice_records(id: &str, pol: &Polarized, tau: Complex64, cfg: &RunConfig) -> Vec<Record> {
    let run = || -> anyhow::Result<Vec<Record>> {
        let lattice = period_lattice(&pol.order, &pol.sigma, tau)?;
        let covolume = lattice.covolume();
        let expected = pol.d_b as f64 * tau.im * tau.im;
        let cov = MetricCheck::compare(covolume, expected, cfg.tol);
        let psi = psi_constant(&MuMatrixF64::from_embedding(&pol.sigma, &pol.mu), pol.d_b, cfg.tol * pol.d_b as f64)?;
        let pet = petersson_norm(tau)?;
        let metric = MetricCheck::compare(faltings_norm_sq_numeric(&lattice), psi.modulus() * pet * pet, cfg.tol);
        Ok(vec![
            Record::Covolume(CovolumeRecord {
                order_id: id.into(),
                tau: tau_json(tau),
                covolume,
                expected,
                rel_error: cov.rel_error,
                pass: cov.pass,
            }),
            Record::KsMetric(KsMetricRecord {
                order_id: id.into(),
                d_b: pol.d_b,
                tau: tau_json(tau),
                lhs: metric.lhs,
                rhs: metric.rhs,
                rel_error: metric.rel_error,
                pass: metric.pass,
            }),
        ])
    };
    run().unwrap_or_else(|e| vec![error(id, "lattice", e)])
}

fn odd_prime_divisors(n: u64) -> Vec<u64> {
    quatks_core::hilbert::prime_divisors(&BigInt::from(n))
        .unwrap_or_default()
        .into_iter()
        .filter(|p| *p != 2)
        .collect()
}

/// `T` of the given class against `T′ = (T, i ∘ ad(j))`.
pub fn padic_twist_record(p: u64, n: u32, kind: ModuleKind) -> Result<PadicRecord, PadicError> {
    let ring = Zp2Ring::new(p, n)?;
    let t = OdModule::of_kind(&ring, kind);
    let tprime = twist_by_ad_mu(&t, None)?;
    padic_record(&ring, &t, &tprime)
}

/// `T`, `T′` given by class labels.
pub fn padic_classes_record(p: u64, n: u32, t: ModuleKind, tprime: ModuleKind) -> Result<PadicRecord, PadicError> {
    let ring = Zp2Ring::new(p, n)?;
    padic_record(&ring, &OdModule::of_kind(&ring, t), &OdModule::of_kind(&ring, tprime))
}

fn padic_record(ring: &std::sync::Arc<Zp2Ring>, t: &OdModule, tprime: &OdModule) -> Result<PadicRecord, PadicError> {
    let hom = hom_module(tprime, t)?;
    let det = det_image(tprime, t)?;
    let expected = match hom.relation {
        PairRelation::Distinct => 1,
        PairRelation::SameClass => 0,
    };
    let mut pass = hom.rank == 1 && hom.torsion == 0 && det.valuation == expected;
    let modulus = ring.precision().modulus().to_u64();
    if modulus.is_some_and(|m| m <= 100) {
        let bf = hom_brute_force(tprime, t)?;
        pass &= bf.all_multiples && Some(bf.solutions as u64) == modulus;
    }
    Ok(PadicRecord {
        order_id: None,
        p: ring.p(),
        n: ring.n(),
        class_t: t.kind()?.to_string(),
        class_tprime: tprime.kind()?.to_string(),
        hom_rank: hom.rank,
        det_valuation: det.valuation,
        pass,
    })
}

pub fn split_record(p: u64, n: u32) -> Result<SplitRecord, PadicError> {
    let prec = Precision::new(p, n)?;
    let base = split_prime_check(&SplitModule::standard(&prec))?;
    let z = Zpn::new(0, &prec);
    let moved = SplitModule::new(
        Mat2::from_i64(&z, [[2, 1], [1, 1]]),
        Mat2::from_i64(&z, [[1, 2], [3, 7]]),
    )?;
    let same = split_prime_check(&moved)? == base;
    Ok(SplitRecord {
        p,
        n,
        e1_rank: base.e1_rank,
        e2_rank: base.e2_rank,
        epsilon_swaps: base.epsilon_swaps,
        hom_rank: base.hom_rank,
        det_valuation: base.det_valuation,
        pass: base.pass() && same,
    })
}

pub fn elliptic_records(cfg: &RunConfig, stream: u64) -> Vec<Record> {
    let mut rng = entry_rng(cfg, stream);
    let exact = e_riemann(1, 0, 0, 1) == 1;
    (0..cfg.tau_samples)
        .map(|_| {
            let tau = cfg.sample_tau(&mut rng);
            match check_metric_identity_elliptic(tau, cfg.exact_tol) {
                Ok(c) => Record::Elliptic(EllipticRecord {
                    tau: tau_json(tau),
                    lhs: c.lhs,
                    rhs: c.rhs,
                    rel_error: c.rel_error,
                    pass: c.pass && exact,
                }),
                Err(e) => error("", "elliptic", e),
            }
        })
        .collect()
}

pub fn global_records(cfg: &RunConfig, stream: u64) -> Vec<Record> {
    let mut out = elliptic_records(cfg, stream);
    for &p in &cfg.split_primes {
        out.push(match split_record(p, cfg.precision) {
            Ok(r) => Record::Split(r),
            Err(e) => error("", "split", e),
        });
    }
    out
}
