//! The order catalog: algebras, order bases and expected discriminants.

use std::path::Path;

use quatks_core::order::verify_order;
use quatks_core::{format_rational, parse_rational, Order, OrderError, QuatAlgebraQ, QuatQ, Rational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read catalog {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed catalog JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("entry {id}: {reason}")]
    Entry { id: String, reason: String },
    #[error("duplicate entry id {0}")]
    DuplicateId(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub a: String,
    pub b: String,
    /// Four basis elements, each as coordinates over `1, i, j, k`.
    pub basis: Vec<String>,
    #[serde(rename = "expected_d_B")]
    pub expected_d_b: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

/// An entry whose strings have been parsed, before the order axioms are
/// checked.
#[derive(Debug, Clone)]
pub struct ParsedEntry {
    pub algebra: QuatAlgebraQ,
    pub basis: [QuatQ; 4],
    pub mu: Option<QuatQ>,
}

impl CatalogEntry {
    fn err(&self, reason: impl Into<String>) -> CatalogError {
        CatalogError::Entry {
            id: self.id.clone(),
            reason: reason.into(),
        }
    }

    fn rational(&self, s: &str) -> Result<Rational, CatalogError> {
        parse_rational(s).ok_or_else(|| self.err(format!("not a rational: {s:?}")))
    }

    fn element(&self, algebra: &QuatAlgebraQ, coords: &[String]) -> Result<QuatQ, CatalogError> {
        let c: Vec<Rational> = coords.iter().map(|s| self.rational(s)).collect::<Result<_, _>>()?;
        Ok(algebra.element([c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()]))
    }

    pub fn parse(&self) -> Result<ParsedEntry, CatalogError> {
        let algebra = QuatAlgebraQ::new(self.rational(&self.a)?, self.rational(&self.b)?)
            .map_err(|e| self.err(e.to_string()))?;
        if self.basis.len() != 16 {
            return Err(self.err(format!("basis has {} rationals, expected 16", self.basis.len())));
        }
        let els: Vec<QuatQ> = self
            .basis
            .chunks(4)
            .map(|c| self.element(&algebra, c))
            .collect::<Result<_, _>>()?;
        let mu = match &self.mu {
            None => None,
            Some(m) if m.len() == 4 => Some(self.element(&algebra, m)?),
            Some(m) => return Err(self.err(format!("mu has {} rationals, expected 4", m.len()))),
        };
        Ok(ParsedEntry {
            algebra,
            basis: [els[0].clone(), els[1].clone(), els[2].clone(), els[3].clone()],
            mu,
        })
    }

    pub fn from_order(id: &str, order: &Order, expected_d_b: u64, mu: Option<&QuatQ>) -> Self {
        let coords = |q: &QuatQ| q.coords().iter().map(format_rational).collect::<Vec<_>>();
        CatalogEntry {
            id: id.to_string(),
            a: format_rational(order.algebra().a()),
            b: format_rational(order.algebra().b()),
            basis: order.basis().iter().flat_map(coords).collect(),
            expected_d_b,
            mu: mu.map(coords),
        }
    }
}

impl ParsedEntry {
    /// The order spanned by the basis, or the names of the violated
    /// order axioms.
    pub fn order(&self) -> Result<Order, Vec<String>> {
        match verify_order(&self.basis) {
            Ok(r) if !r.is_order() => Err(r.failures.iter().map(|(p, _)| p.to_string()).collect()),
            Ok(_) => Order::new(self.basis.clone()).map_err(|e| vec![e.to_string()]),
            Err(OrderError::LinearlyDependent) => Err(vec!["linearly_independent".into()]),
            Err(e) => Err(vec![e.to_string()]),
        }
    }
}

impl Catalog {
    pub fn from_json(s: &str) -> Result<Self, CatalogError> {
        let cat: Catalog = serde_json::from_str(s)?;
        for (n, e) in cat.entries.iter().enumerate() {
            if cat.entries[..n].iter().any(|f| f.id == e.id) {
                return Err(CatalogError::DuplicateId(e.id.clone()));
            }
            e.parse()?;
        }
        Ok(cat)
    }

    pub fn load(path: &Path) -> Result<Self, CatalogError> {
        let s = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Catalog::from_json(&s)
    }

    /// The catalog shipped with the crate.
    pub fn shipped() -> Self {
        Catalog::from_json(SHIPPED).expect("shipped catalog parses")
    }
}

pub const SHIPPED: &str = include_str!("../catalog/default.json");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_catalog_parses() {
        let cat = Catalog::shipped();
        let d: Vec<u64> = cat.entries.iter().map(|e| e.expected_d_b).collect();
        assert_eq!(d, vec![1, 6, 14, 22]);
        for e in &cat.entries {
            e.parse().unwrap().order().unwrap();
        }
    }

    #[test]
    fn roundtrip_through_order() {
        let cat = Catalog::shipped();
        let e = &cat.entries[1];
        let order = e.parse().unwrap().order().unwrap();
        let back = CatalogEntry::from_order(&e.id, &order, e.expected_d_b, None);
        assert_eq!(back.basis, e.basis);
        assert_eq!((back.a.as_str(), back.b.as_str()), ("-1/1", "3/1"));
    }

    #[test]
    fn malformed_entries() {
        let bad = r#"{"entries":[{"id":"x","a":"1/0","b":"1","basis":[],"expected_d_B":1}]}"#;
        assert!(matches!(Catalog::from_json(bad), Err(CatalogError::Entry { .. })));
        assert!(matches!(Catalog::from_json("{"), Err(CatalogError::Json(_))));
    }
}
