//! Rank-2 modules over `Z_{p²}/p^N` with an `O_D`-action satisfying the
//! determinant condition, their two classes, and the Hom module between
//! them.

use std::fmt;
use std::sync::Arc;

use super::linalg::{kernel, normalize, Mat2};
use super::od::{tau_isomorphism, OdElement, OrderMatrix};
use super::ring::{LocalRing, Precision, Zp2, Zp2Ring, Zpn};
use super::PadicError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModuleKind {
    /// `jx = p y`, `jy = x`.
    Standard,
    /// `jx = y`, `jy = p x`.
    Twisted,
}

impl ModuleKind {
    pub fn other(self) -> Self {
        match self {
            ModuleKind::Standard => ModuleKind::Twisted,
            ModuleKind::Twisted => ModuleKind::Standard,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ModuleKind::Standard => "standard",
            ModuleKind::Twisted => "twisted",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "standard" => Some(ModuleKind::Standard),
            "twisted" => Some(ModuleKind::Twisted),
            _ => None,
        }
    }
}

impl fmt::Display for ModuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `M = R x ⊕ R y` with `x ∈ e₁M`, `y ∈ e₂M`, `jx = a y`, `jy = b x`.
#[derive(Debug, Clone, PartialEq)]
pub struct OdModule {
    a: Zp2,
    b: Zp2,
}

impl OdModule {
    pub fn new(a: Zp2, b: Zp2) -> Result<Self, PadicError> {
        if a.ring().p() != b.ring().p() || a.ring().n() != b.ring().n() {
            return Err(PadicError::MismatchedRings);
        }
        if &a * &b != a.ring().p_el() {
            return Err(PadicError::DeterminantCondition);
        }
        Ok(OdModule { a, b })
    }

    pub fn of_kind(ring: &Arc<Zp2Ring>, kind: ModuleKind) -> Self {
        let (a, b) = match kind {
            ModuleKind::Standard => (ring.p_el(), ring.int(1)),
            ModuleKind::Twisted => (ring.int(1), ring.p_el()),
        };
        OdModule { a, b }
    }

    pub fn standard(ring: &Arc<Zp2Ring>) -> Self {
        OdModule::of_kind(ring, ModuleKind::Standard)
    }

    pub fn twisted(ring: &Arc<Zp2Ring>) -> Self {
        OdModule::of_kind(ring, ModuleKind::Twisted)
    }

    pub fn a(&self) -> &Zp2 {
        &self.a
    }

    pub fn b(&self) -> &Zp2 {
        &self.b
    }

    pub fn ring(&self) -> &Arc<Zp2Ring> {
        self.a.ring()
    }

    pub fn kind(&self) -> Result<ModuleKind, PadicError> {
        classify_module(&self.a, &self.b)
    }

    /// Matrix of `[[α, β], [pγ, δ]]` on the basis `(x, y)`:
    /// `[[α, βb], [γa, δ]]`.
    pub fn action(&self, m: &OrderMatrix) -> Mat2<Zp2> {
        Mat2::new(
            m.a11.clone(),
            &m.a12 * &self.b,
            &m.a21_over_p * &self.a,
            m.a22.clone(),
        )
    }

    pub fn act_od(&self, d: &OdElement) -> Mat2<Zp2> {
        self.action(&tau_isomorphism(d, &self.ring().int(1)))
    }

    /// `det(i(m)) = det(m)` for the given matrix-order element.
    pub fn determinant_condition(&self, m: &OrderMatrix) -> bool {
        self.action(m).det() == m.det()
    }

    /// Rescales the basis so that `(a, b)` becomes `(p, 1)` or `(1, p)`.
    pub fn normalized(&self) -> Result<Self, PadicError> {
        Ok(OdModule::of_kind(self.ring(), self.kind()?))
    }

    /// Whether `j : e₁M → e₂M` is onto mod `p`.
    pub fn j_surjective_mod_p(&self) -> bool {
        self.a.is_unit()
    }
}

/// Class of the module with `jx = a y`, `jy = b x`, `ab = p`.
pub fn classify_module(a: &Zp2, b: &Zp2) -> Result<ModuleKind, PadicError> {
    if a * b != a.ring().p_el() {
        return Err(PadicError::DeterminantCondition);
    }
    match (a.is_unit(), b.is_unit()) {
        (false, true) => Ok(ModuleKind::Standard),
        (true, false) => Ok(ModuleKind::Twisted),
        _ => Err(PadicError::BothNonUnits),
    }
}

/// `(M, i ∘ ad(μ))`.
///
/// For `μ = j` this swaps the structure constants. For general `μ` the
/// action `i'(m) = i(μ m μ^ι) / nrd(μ)` is computed directly and the class
/// is read off from whether `i'(j e₁)` is nonzero mod `p`; the division by
/// `p^v(nrd μ)` costs that many digits of precision.
pub fn twist_by_ad_mu(m: &OdModule, mu: Option<&OdElement>) -> Result<OdModule, PadicError> {
    let Some(mu) = mu else {
        return Ok(OdModule {
            a: m.b.clone(),
            b: m.a.clone(),
        });
    };
    let ring = m.ring();
    let nrd = mu.reduced_norm();
    let v = nrd
        .valuation()
        .ok_or_else(|| PadicError::InvalidMu("nrd(μ) = 0".into()))?;
    if v >= ring.n() {
        return Err(PadicError::InvalidMu("nrd(μ) exceeds the working precision".into()));
    }
    let unit_inv = nrd.div_p_pow(v).unit_inverse().expect("nrd / p^v is a unit");
    let one = ring.int(1);
    let t_mu = tau_isomorphism(mu, &one);
    let t_mu_conj = tau_isomorphism(&mu.conjugate_main(), &one);
    let conj = |x: &OrderMatrix| -> Result<OrderMatrix, PadicError> {
        let y = t_mu.mul(x).mul(&t_mu_conj);
        y.div_p_pow(v)
            .map(|z| z.scale(&unit_inv))
            .ok_or_else(|| PadicError::InvalidMu("μ m μ^ι not divisible by nrd(μ)".into()))
    };
    let j_e1 = OrderMatrix::j(ring).mul(&OrderMatrix::e1(ring));
    let image = m.action(&conj(&j_e1)?);
    let surjective = image.m.iter().flatten().any(|e| e.is_unit());
    let kind = if surjective {
        ModuleKind::Twisted
    } else {
        ModuleKind::Standard
    };
    Ok(OdModule::of_kind(ring, kind))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairRelation {
    Distinct,
    SameClass,
}

/// `Hom_{O_D}(T′, T)`: maps `x′ ↦ α x`, `y′ ↦ β y`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomModule {
    pub generator: [Zp2; 2],
    pub rank: usize,
    pub torsion: usize,
    pub relation: PairRelation,
}

/// Linearity constraints `a′β − aα = 0`, `b′α − bβ = 0` in unknowns `(α, β)`.
fn hom_equations(tprime: &OdModule, t: &OdModule) -> Vec<Vec<Zp2>> {
    vec![
        vec![-&t.a, tprime.a.clone()],
        vec![tprime.b.clone(), -&t.b],
    ]
}

pub fn hom_module(tprime: &OdModule, t: &OdModule) -> Result<HomModule, PadicError> {
    let (kp, k) = (tprime.kind()?, t.kind()?);
    let zero = t.ring().int(0);
    let ker = kernel(&hom_equations(tprime, t), 2, &zero);
    let gen = ker
        .free
        .first()
        .map(|g| normalize(g))
        .unwrap_or_else(|| vec![zero.clone(), zero.clone()]);
    Ok(HomModule {
        generator: [gen[0].clone(), gen[1].clone()],
        rank: ker.free_rank(),
        torsion: ker.torsion.len(),
        relation: if kp == k {
            PairRelation::SameClass
        } else {
            PairRelation::Distinct
        },
    })
}

/// Solutions of the Hom constraints with `α, β ∈ Z/p^N`, found by
/// enumerating all `p^{2N}` candidates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceCount {
    pub candidates: usize,
    pub solutions: usize,
    /// Every solution is `c · generator` for some `c ∈ Z/p^N`.
    pub all_multiples: bool,
}

pub fn hom_brute_force(tprime: &OdModule, t: &OdModule) -> Result<BruteForceCount, PadicError> {
    let ring = t.ring();
    let hom = hom_module(tprime, t)?;
    let prec: &Arc<Precision> = ring.precision();
    let eqs = hom_equations(tprime, t);
    let lift = |z: &Zpn| ring.int(z.value().clone());
    let multiples: Vec<[Zp2; 2]> = Zpn::enumerate(prec)
        .map(|c| {
            let c = lift(&c);
            [&c * &hom.generator[0], &c * &hom.generator[1]]
        })
        .collect();
    let mut candidates = 0;
    let mut solutions = 0;
    let mut all_multiples = true;
    for x in Zpn::enumerate(prec) {
        for y in Zpn::enumerate(prec) {
            candidates += 1;
            let (al, be) = (lift(&x), lift(&y));
            let ok = eqs
                .iter()
                .all(|row| (&row[0] * &al + &row[1] * &be).is_zero_el());
            if ok {
                solutions += 1;
                if !multiples.iter().any(|m| m[0] == al && m[1] == be) {
                    all_multiples = false;
                }
            }
        }
    }
    Ok(BruteForceCount {
        candidates,
        solutions,
        all_multiples,
    })
}

/// Image of `N ⊗ T′ → T` is `p^{e₁} e₁T ⊕ p^{e₂} e₂T`; its determinant is
/// `p^{e₁+e₂} det(T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetImage {
    pub e1_valuation: u32,
    pub e2_valuation: u32,
    pub valuation: u32,
    pub relation: PairRelation,
}

pub fn det_image(tprime: &OdModule, t: &OdModule) -> Result<DetImage, PadicError> {
    let hom = hom_module(tprime, t)?;
    let n = t.ring().n();
    let v1 = hom.generator[0].valuation().unwrap_or(n);
    let v2 = hom.generator[1].valuation().unwrap_or(n);
    Ok(DetImage {
        e1_valuation: v1,
        e2_valuation: v2,
        valuation: v1 + v2,
        relation: hom.relation,
    })
}

/// `det(i(β)x, y) = det(x, i(β^ι)y)` on `M = R²`.
pub fn det_pairing_identity(m: &OdModule, beta: &OdElement, x: &[Zp2; 2], y: &[Zp2; 2]) -> bool {
    let det2 = |u: &[Zp2; 2], w: &[Zp2; 2]| &u[0] * &w[1] - &u[1] * &w[0];
    let lhs = det2(&m.act_od(beta).apply(x), y);
    let rhs = det2(x, &m.act_od(&beta.conjugate_main()).apply(y));
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_examples() {
        let r = Zp2Ring::new(5, 6).unwrap();
        assert_eq!(OdModule::standard(&r).kind().unwrap(), ModuleKind::Standard);
        assert_eq!(OdModule::twisted(&r).kind().unwrap(), ModuleKind::Twisted);
        let u = r.element(3, 1);
        let m = OdModule::new(&r.p_el() * &u, u.inverse().unwrap()).unwrap();
        assert_eq!(m.kind().unwrap(), ModuleKind::Standard);
        assert_eq!(m.normalized().unwrap(), OdModule::standard(&r));
        assert_eq!(
            OdModule::new(r.int(5), r.int(5)).unwrap_err(),
            PadicError::DeterminantCondition
        );
    }

    #[test]
    fn twist_swaps() {
        let r = Zp2Ring::new(3, 4).unwrap();
        let s = OdModule::standard(&r);
        let t = twist_by_ad_mu(&s, None).unwrap();
        assert_eq!(t.kind().unwrap(), ModuleKind::Twisted);
        assert_eq!(twist_by_ad_mu(&t, None).unwrap(), s);
        let j = OdElement::j(&r);
        assert_eq!(twist_by_ad_mu(&s, Some(&j)).unwrap().kind().unwrap(), ModuleKind::Twisted);
        // A unit μ is inner by a unit: class preserved.
        let mu = OdElement::new(r.element(1, 1), r.int(2));
        assert_eq!(twist_by_ad_mu(&s, Some(&mu)).unwrap().kind().unwrap(), ModuleKind::Standard);
    }

    #[test]
    fn hom_generators() {
        let r = Zp2Ring::new(3, 10).unwrap();
        let (s, t) = (OdModule::standard(&r), OdModule::twisted(&r));
        let h = hom_module(&t, &s).unwrap();
        assert_eq!(h.generator, [r.int(1), r.int(3)]);
        assert_eq!((h.rank, h.relation), (1, PairRelation::Distinct));
        let h = hom_module(&s, &t).unwrap();
        assert_eq!(h.generator, [r.int(3), r.int(1)]);
        let h = hom_module(&s, &s).unwrap();
        assert_eq!(h.generator, [r.int(1), r.int(1)]);
        assert_eq!(h.relation, PairRelation::SameClass);
        assert_eq!(det_image(&t, &s).unwrap().valuation, 1);
        assert_eq!(det_image(&s, &s).unwrap().valuation, 0);
    }

    #[test]
    fn brute_force_small() {
        let r = Zp2Ring::new(3, 2).unwrap();
        let c = hom_brute_force(&OdModule::twisted(&r), &OdModule::standard(&r)).unwrap();
        assert_eq!(c.candidates, 81);
        assert_eq!(c.solutions, 9);
        assert!(c.all_multiples);
    }

    #[test]
    fn determinant_condition_on_generators() {
        let r = Zp2Ring::new(7, 3).unwrap();
        for m in [OdModule::standard(&r), OdModule::twisted(&r)] {
            for g in OdElement::generators(&r) {
                let t = tau_isomorphism(&g, &r.int(1));
                assert!(m.determinant_condition(&t));
                assert_eq!(t.det(), g.reduced_norm());
            }
        }
    }
}
