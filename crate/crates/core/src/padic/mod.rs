//! Local computations at a prime `p`: the ramified case `p | d_B` over the
//! maximal order `O_D` of the division algebra, and the split case over
//! `M₂(Z/p^N)`.
//!
//! Only odd `p` are handled.

pub mod linalg;
pub mod module;
pub mod od;
pub mod ring;
pub mod split;

use thiserror::Error;

pub use linalg::{kernel, Kernel, Mat2};
pub use module::{
    classify_module, det_image, hom_brute_force, hom_module, twist_by_ad_mu, BruteForceCount, DetImage, HomModule,
    ModuleKind, OdModule, PairRelation,
};
pub use od::{tau_isomorphism, OdElement, OdTensor, OrderMatrix};
pub use ring::{least_nonresidue, LocalRing, Precision, Zp2, Zp2Ring, Zpn};
pub use split::{split_prime_check, SplitModule, SplitReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision must be at least 1, got {0}")]
    Precision(u32),
    #[error("p = 2 is not supported: x² - s does not give the unramified extension")]
    EvenPrime,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("structure constants violate ab = p")]
    DeterminantCondition,
    #[error("neither structure constant is a unit")]
    BothNonUnits,
    #[error("invalid twisting element: {0}")]
    InvalidMu(String),
    #[error("mismatched rings")]
    MismatchedRings,
}
