//! The good-prime picture: `O_B ⊗ Z_p ≅ M₂(Z_p)` acting on a free rank-2
//! module, split by the idempotents `e₁`, `e₂` and swapped by `ε`.

use std::sync::Arc;

use super::linalg::{invariant_valuations, kernel, normalize, Mat2};
use super::ring::{LocalRing, Precision, Zpn};
use super::PadicError;

/// `(Z/p^N)²` with `i(β) = G β G⁻¹`, together with the twisting matrix `μ`
/// defining `T′ = (T, i ∘ ad(μ))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitModule {
    conjugator: Mat2<Zpn>,
    conjugator_inv: Mat2<Zpn>,
    mu: Mat2<Zpn>,
    mu_inv: Mat2<Zpn>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitReport {
    pub determinant_condition: bool,
    pub e1_rank: usize,
    pub e2_rank: usize,
    pub epsilon_swaps: bool,
    pub hom_rank: usize,
    pub hom_e1_isomorphism: bool,
    pub det_valuation: u32,
}

impl SplitReport {
    pub fn pass(&self) -> bool {
        self.determinant_condition
            && self.e1_rank == 1
            && self.e2_rank == 1
            && self.epsilon_swaps
            && self.hom_rank == 1
            && self.hom_e1_isomorphism
            && self.det_valuation == 0
    }
}

impl SplitModule {
    pub fn new(conjugator: Mat2<Zpn>, mu: Mat2<Zpn>) -> Result<Self, PadicError> {
        let conjugator_inv = conjugator.inverse().ok_or(PadicError::NotAUnit)?;
        let mu_inv = mu
            .inverse()
            .ok_or_else(|| PadicError::InvalidMu("det(μ) is not a unit".into()))?;
        Ok(SplitModule {
            conjugator,
            conjugator_inv,
            mu,
            mu_inv,
        })
    }

    /// `G = 1`, `μ = ε`.
    pub fn standard(prec: &Arc<Precision>) -> Self {
        let z = Zpn::new(0, prec);
        SplitModule::new(Mat2::identity(&z), Mat2::from_i64(&z, [[0, 1], [1, 0]])).expect("unimodular")
    }

    pub fn act(&self, beta: &Mat2<Zpn>) -> Mat2<Zpn> {
        self.conjugator.mul(beta).mul(&self.conjugator_inv)
    }

    pub fn act_twisted(&self, beta: &Mat2<Zpn>) -> Mat2<Zpn> {
        self.act(&self.mu.mul(beta).mul(&self.mu_inv))
    }

    pub fn mu(&self) -> &Mat2<Zpn> {
        &self.mu
    }

    fn like(&self) -> Zpn {
        self.mu.m[0][0].zero_like()
    }
}

fn matrix_units(z: &Zpn) -> Vec<Mat2<Zpn>> {
    (0..4)
        .map(|k| {
            let mut m = [[0i64; 2]; 2];
            m[k / 2][k % 2] = 1;
            Mat2::from_i64(z, m)
        })
        .collect()
}

fn unit_rank(m: &Mat2<Zpn>, z: &Zpn) -> usize {
    let rows: Vec<Vec<Zpn>> = m.m.iter().map(|r| r.to_vec()).collect();
    invariant_valuations(&rows, 2, z)
        .into_iter()
        .filter(|&v| v == 0)
        .count()
}

pub fn split_prime_check(m: &SplitModule) -> Result<SplitReport, PadicError> {
    let z = m.like();
    let n = z.precision();
    let units = matrix_units(&z);
    let e1 = Mat2::from_i64(&z, [[1, 0], [0, 0]]);
    let e2 = Mat2::from_i64(&z, [[0, 0], [0, 1]]);
    let eps = Mat2::from_i64(&z, [[0, 1], [1, 0]]);

    let mut probes = units.clone();
    probes.push(eps.clone());
    probes.push(Mat2::from_i64(&z, [[2, 3], [5, 7]]));
    let determinant_condition = probes
        .iter()
        .all(|b| m.act(b).det() == b.det() && m.act_twisted(b).det() == b.det());
    if !determinant_condition {
        return Err(PadicError::DeterminantCondition);
    }

    let (ie1, ie2, ieps) = (m.act(&e1), m.act(&e2), m.act(&eps));
    let e1_rank = unit_rank(&ie1, &z);
    let e2_rank = unit_rank(&ie2, &z);
    let epsilon_swaps =
        ieps.mul(&ie1) == ie2.mul(&ieps) && ieps.inverse().is_some() && ieps.mul(&ieps) == Mat2::identity(&z);

    // f i′(β) = i(β) f for every matrix unit β, in the four entries of f.
    let mut rows: Vec<Vec<Zpn>> = Vec::new();
    for b in &units {
        let (tw, ac) = (m.act_twisted(b), m.act(b));
        for r in 0..2 {
            for c in 0..2 {
                let mut row = vec![z.clone(); 4];
                for k in 0..2 {
                    // (f tw)[r][c] = Σ_k f[r][k] tw[k][c]
                    row[2 * r + k] = row[2 * r + k].add_ref(&tw.m[k][c]);
                    // (ac f)[r][c] = Σ_k ac[r][k] f[k][c]
                    row[2 * k + c] = row[2 * k + c].sub_ref(&ac.m[r][k]);
                }
                rows.push(row);
            }
        }
    }
    let ker = kernel(&rows, 4, &z);
    let hom_rank = if ker.is_free() { ker.free_rank() } else { 0 };
    let (hom_e1_isomorphism, det_valuation) = match ker.free.first() {
        Some(g) => {
            let g = normalize(g);
            let f = Mat2::new(g[0].clone(), g[1].clone(), g[2].clone(), g[3].clone());
            let restricted = ie1.mul(&f).mul(&m.act_twisted(&e1));
            (unit_rank(&restricted, &z) == 1, f.det().valuation().unwrap_or(n))
        }
        None => (false, n),
    };

    Ok(SplitReport {
        determinant_condition,
        e1_rank,
        e2_rank,
        epsilon_swaps,
        hom_rank,
        hom_e1_isomorphism,
        det_valuation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_split_module() {
        let prec = Precision::new(5, 4).unwrap();
        let r = split_prime_check(&SplitModule::standard(&prec)).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.hom_rank, 1);
        assert_eq!(r.det_valuation, 0);
    }

    #[test]
    fn basis_change_invariance() {
        let prec = Precision::new(7, 3).unwrap();
        let z = Zpn::new(0, &prec);
        let base = split_prime_check(&SplitModule::standard(&prec)).unwrap();
        let g = Mat2::from_i64(&z, [[2, 1], [5, 3]]);
        let mu = Mat2::from_i64(&z, [[1, 4], [0, 3]]);
        let m = SplitModule::new(g, mu).unwrap();
        assert_eq!(split_prime_check(&m).unwrap(), base);
    }

    #[test]
    fn rejects_non_unit_mu() {
        let prec = Precision::new(3, 2).unwrap();
        let z = Zpn::new(0, &prec);
        let err = SplitModule::new(Mat2::identity(&z), Mat2::from_i64(&z, [[3, 0], [0, 1]]));
        assert!(err.is_err());
    }
}
