//! JSON Lines records and the run summary.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscriminantRecord {
    pub order_id: String,
    pub a: String,
    pub b: String,
    #[serde(rename = "d_B")]
    pub d_b: u64,
    pub expected: u64,
    pub ramified: Vec<String>,
    pub brute_force_agrees: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderRecord {
    pub order_id: String,
    pub reduced_disc: Option<String>,
    pub dual_index: Option<String>,
    pub maximal: bool,
    pub violated: Vec<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuRecord {
    pub order_id: String,
    pub mu: Vec<String>,
    pub from_hint: bool,
    pub star_stable: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiemannFormRecord {
    pub order_id: String,
    pub integral: bool,
    pub skew: bool,
    pub det: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityRecord {
    pub order_id: String,
    pub tau: [f64; 2],
    pub samples: usize,
    pub plus_positive: bool,
    pub minus_positive: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovolumeRecord {
    pub order_id: String,
    pub tau: [f64; 2],
    pub covolume: f64,
    pub expected: f64,
    pub rel_error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsBetaRecord {
    pub order_id: String,
    #[serde(rename = "d_B")]
    pub d_b: u64,
    pub sigma_mu: [f64; 4],
    pub max_entry_error: f64,
    pub residual: f64,
    pub w_det: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsMetricRecord {
    pub order_id: String,
    #[serde(rename = "d_B")]
    pub d_b: u64,
    pub tau: [f64; 2],
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PadicRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_id: Option<String>,
    pub p: u64,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "class_T")]
    pub class_t: String,
    #[serde(rename = "class_Tprime")]
    pub class_tprime: String,
    pub hom_rank: usize,
    pub det_valuation: u32,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitRecord {
    pub p: u64,
    #[serde(rename = "N")]
    pub n: u32,
    pub e1_rank: usize,
    pub e2_rank: usize,
    pub epsilon_swaps: bool,
    pub hom_rank: usize,
    pub det_valuation: u32,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EllipticRecord {
    pub tau: [f64; 2],
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub order_id: String,
    pub stage: String,
    pub message: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Record {
    Discriminant(DiscriminantRecord),
    Order(OrderRecord),
    Mu(MuRecord),
    RiemannForm(RiemannFormRecord),
    Positivity(PositivityRecord),
    Covolume(CovolumeRecord),
    KsBeta(KsBetaRecord),
    KsMetric(KsMetricRecord),
    Padic(PadicRecord),
    Split(SplitRecord),
    Elliptic(EllipticRecord),
    Error(ErrorRecord),
}

impl Record {
    pub fn pass(&self) -> bool {
        match self {
            Record::Discriminant(r) => r.pass,
            Record::Order(r) => r.pass,
            Record::Mu(r) => r.pass,
            Record::RiemannForm(r) => r.pass,
            Record::Positivity(r) => r.pass,
            Record::Covolume(r) => r.pass,
            Record::KsBeta(r) => r.pass,
            Record::KsMetric(r) => r.pass,
            Record::Padic(r) => r.pass,
            Record::Split(r) => r.pass,
            Record::Elliptic(r) => r.pass,
            Record::Error(r) => r.pass,
        }
    }

    pub fn check_name(&self) -> &'static str {
        match self {
            Record::Discriminant(_) => "discriminant",
            Record::Order(_) => "order",
            Record::Mu(_) => "mu",
            Record::RiemannForm(_) => "riemann_form",
            Record::Positivity(_) => "positivity",
            Record::Covolume(_) => "covolume",
            Record::KsBeta(_) => "ks_beta",
            Record::KsMetric(_) => "ks_metric",
            Record::Padic(_) => "padic",
            Record::Split(_) => "split",
            Record::Elliptic(_) => "elliptic",
            Record::Error(_) => "error",
        }
    }

    /// Catalog entry the record belongs to; empty for catalog-independent
    /// suites.
    pub fn order_id(&self) -> &str {
        match self {
            Record::Discriminant(r) => &r.order_id,
            Record::Order(r) => &r.order_id,
            Record::Mu(r) => &r.order_id,
            Record::RiemannForm(r) => &r.order_id,
            Record::Positivity(r) => &r.order_id,
            Record::Covolume(r) => &r.order_id,
            Record::KsBeta(r) => &r.order_id,
            Record::KsMetric(r) => &r.order_id,
            Record::Padic(r) => r.order_id.as_deref().unwrap_or(""),
            Record::Error(r) => &r.order_id,
            Record::Split(_) | Record::Elliptic(_) => "",
        }
    }
}

pub(crate) fn tau_json(t: Complex64) -> [f64; 2] {
    [t.re, t.im]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub records: usize,
    pub passed: usize,
    pub failed: usize,
    pub seed: u64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub records: Vec<Record>,
    pub seed: u64,
}

impl Report {
    /// Orders records by `(order id, check name)`, keeping generation order
    /// within a group.
    pub fn new(mut records: Vec<Record>, seed: u64) -> Self {
        records.sort_by(|x, y| {
            (x.order_id(), x.check_name()).cmp(&(y.order_id(), y.check_name()))
        });
        Report { records, seed }
    }

    pub fn summary(&self) -> Summary {
        let passed = self.records.iter().filter(|r| r.pass()).count();
        Summary {
            records: self.records.len(),
            passed,
            failed: self.records.len() - passed,
            seed: self.seed,
            pass: passed == self.records.len(),
        }
    }

    pub fn pass(&self) -> bool {
        self.summary().pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass())
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        #[derive(Serialize)]
        struct Wrapped<'a> {
            summary: &'a Summary,
        }
        serde_json::to_writer(&mut w, &Wrapped { summary: &self.summary() })?;
        w.write_all(b"\n")
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }
}
