//! Catalog-driven verification of the Kodaira–Spencer constants, shared by
//! the `quatks` binary and its tests.

pub mod catalog;
pub mod config;
pub mod report;
pub mod suites;

use quatks_core::padic::{ModuleKind, PadicError};
use quatks_core::{discriminant, format_rational, ramified_places, Place, QuatAlgebraQ, Rational};
use rayon::prelude::*;
use serde::Serialize;

pub use catalog::{Catalog, CatalogEntry, CatalogError};
pub use config::{ConfigError, RunConfig};
pub use report::{PadicRecord, Record, Report, Summary};

/// Environment variable naming the default catalog.
pub const CATALOG_ENV: &str = "QUATKS_CATALOG";

/// Runs every suite. Entries are processed in parallel; the report order
/// depends only on the catalog and the seed.
pub fn verify_all(catalog: &Catalog, cfg: &RunConfig) -> Report {
    let n = catalog.entries.len() as u64;
    let mut records: Vec<Record> = catalog
        .entries
        .par_iter()
        .enumerate()
        .map(|(k, e)| suites::verify_entry(e, k as u64, cfg))
        .flatten()
        .collect();
    records.extend(suites::global_records(cfg, n));
    Report::new(records, cfg.seed)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraReport {
    pub a: String,
    pub b: String,
    #[serde(rename = "d_B")]
    pub d_b: u64,
    pub indefinite: bool,
    pub split: bool,
    pub ramified: Vec<String>,
}

pub fn run_algebra(a: &Rational, b: &Rational) -> anyhow::Result<AlgebraReport> {
    let h = QuatAlgebraQ::new(a.clone(), b.clone())?;
    let places = ramified_places(&h)?;
    let d_b = discriminant(&h)?;
    Ok(AlgebraReport {
        a: format_rational(a),
        b: format_rational(b),
        d_b,
        indefinite: h.is_indefinite(),
        split: places.is_empty(),
        ramified: places.iter().map(Place::to_string).collect(),
    })
}

pub fn run_padic(p: u64, n: u32, t: ModuleKind, tprime: ModuleKind) -> Result<PadicRecord, PadicError> {
    if n < 2 {
        return Err(PadicError::Precision(n));
    }
    suites::padic_classes_record(p, n, t, tprime)
}
