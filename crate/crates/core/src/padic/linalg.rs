//! Linear algebra over a truncated local ring: 2x2 matrices and kernels of
//! homogeneous systems via a Smith-style reduction.

use super::ring::LocalRing;

/// `[[m11, m12], [m21, m22]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat2<R> {
    pub m: [[R; 2]; 2],
}

impl<R: LocalRing> Mat2<R> {
    pub fn new(m11: R, m12: R, m21: R, m22: R) -> Self {
        Mat2 {
            m: [[m11, m12], [m21, m22]],
        }
    }

    pub fn identity(like: &R) -> Self {
        Mat2::new(like.one_like(), like.zero_like(), like.zero_like(), like.one_like())
    }

    pub fn from_i64(like: &R, m: [[i64; 2]; 2]) -> Self {
        Mat2::new(
            like.from_i64_like(m[0][0]),
            like.from_i64_like(m[0][1]),
            like.from_i64_like(m[1][0]),
            like.from_i64_like(m[1][1]),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let e = |i: usize, j: usize| {
            self.m[i][0]
                .mul_ref(&rhs.m[0][j])
                .add_ref(&self.m[i][1].mul_ref(&rhs.m[1][j]))
        };
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let e = |i: usize, j: usize| self.m[i][j].add_ref(&rhs.m[i][j]);
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn scale(&self, s: &R) -> Self {
        let e = |i: usize, j: usize| self.m[i][j].mul_ref(s);
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn apply(&self, v: &[R; 2]) -> [R; 2] {
        [
            self.m[0][0].mul_ref(&v[0]).add_ref(&self.m[0][1].mul_ref(&v[1])),
            self.m[1][0].mul_ref(&v[0]).add_ref(&self.m[1][1].mul_ref(&v[1])),
        ]
    }

    pub fn det(&self) -> R {
        self.m[0][0]
            .mul_ref(&self.m[1][1])
            .sub_ref(&self.m[0][1].mul_ref(&self.m[1][0]))
    }

    pub fn adjugate(&self) -> Self {
        Mat2::new(
            self.m[1][1].clone(),
            self.m[0][1].neg_ref(),
            self.m[1][0].neg_ref(),
            self.m[0][0].clone(),
        )
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det().unit_inverse()?;
        Some(self.adjugate().scale(&d))
    }

    pub fn column(&self, j: usize) -> [R; 2] {
        [self.m[0][j].clone(), self.m[1][j].clone()]
    }
}

/// The solution module of `A x = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel<R> {
    /// Generators of free summands.
    pub free: Vec<Vec<R>>,
    /// Generators `g` of torsion summands `R·g ≅ R/p^e`, with `e`.
    pub torsion: Vec<(u32, Vec<R>)>,
}

impl<R> Kernel<R> {
    pub fn free_rank(&self) -> usize {
        self.free.len()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

/// Invariant-factor valuations of `a` (one per pivot; `None` entries are
/// dropped), together with the column transform.
struct Reduction<R> {
    pivots: Vec<u32>,
    v: Vec<Vec<R>>,
}

fn reduce<R: LocalRing>(rows: &[Vec<R>], ncols: usize, like: &R) -> Reduction<R> {
    let mut a: Vec<Vec<R>> = rows.to_vec();
    let m = a.len();
    let mut v: Vec<Vec<R>> = (0..ncols)
        .map(|i| {
            (0..ncols)
                .map(|j| if i == j { like.one_like() } else { like.zero_like() })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut t = 0;
    while t < m.min(ncols) {
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if let Some(val) = x.valuation() {
                    if best.map_or(true, |(_, _, b)| val < b) {
                        best = Some((i, j, val));
                    }
                }
            }
        }
        let Some((pi, pj, val)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let unit_inv = a[t][t]
            .div_p_pow(val)
            .unit_inverse()
            .expect("pivot / p^v is a unit");
        for r in t + 1..m {
            if a[r][t].is_zero_el() {
                continue;
            }
            let f = a[r][t].div_p_pow(val).mul_ref(&unit_inv);
            for c in t..ncols {
                let sub = f.mul_ref(&a[t][c]);
                a[r][c] = a[r][c].sub_ref(&sub);
            }
        }
        for c in t + 1..ncols {
            if a[t][c].is_zero_el() {
                continue;
            }
            let f = a[t][c].div_p_pow(val).mul_ref(&unit_inv);
            for row in a.iter_mut() {
                let sub = f.mul_ref(&row[t]);
                row[c] = row[c].sub_ref(&sub);
            }
            for row in v.iter_mut() {
                let sub = f.mul_ref(&row[t]);
                row[c] = row[c].sub_ref(&sub);
            }
        }
        pivots.push(val);
        t += 1;
    }
    Reduction { pivots, v }
}

/// Kernel of the `rows.len() x ncols` matrix `rows` over `R`.
pub fn kernel<R: LocalRing>(rows: &[Vec<R>], ncols: usize, like: &R) -> Kernel<R> {
    let n = like.precision();
    let p = like.from_i64_like(like.prime() as i64);
    let red = reduce(rows, ncols, like);
    let col = |j: usize| -> Vec<R> { red.v.iter().map(|row| row[j].clone()).collect() };
    let mut free = Vec::new();
    let mut torsion = Vec::new();
    for j in 0..ncols {
        match red.pivots.get(j) {
            Some(0) => {}
            Some(&e) => {
                // p^e y = 0  ⇔  y ∈ p^{N-e} R
                let mut scale = like.one_like();
                for _ in 0..n - e {
                    scale = scale.mul_ref(&p);
                }
                torsion.push((e, col(j).iter().map(|x| x.mul_ref(&scale)).collect()));
            }
            None => free.push(col(j)),
        }
    }
    Kernel { free, torsion }
}

/// Valuations of the invariant factors of a matrix (zero factors omitted).
pub fn invariant_valuations<R: LocalRing>(rows: &[Vec<R>], ncols: usize, like: &R) -> Vec<u32> {
    reduce(rows, ncols, like).pivots
}

/// Scales a vector so its first unit coordinate becomes 1 (when it has one).
pub fn normalize<R: LocalRing>(v: &[R]) -> Vec<R> {
    match v.iter().find_map(|x| x.unit_inverse()) {
        Some(inv) => v.iter().map(|x| x.mul_ref(&inv)).collect(),
        None => v.to_vec(),
    }
}
