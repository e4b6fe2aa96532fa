use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{verify, Factorization, InvalidReason, Provenance, Verdict};
use crate::atlas::{AtlasError, Catalog, GroupSpec};
use crate::permgroup::{GroupTable, Perm};

pub const CERTIFICATE_SCHEMA: &str = "cosetfactor.certificate/1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("certificate does not parse: {0}")]
    Parse(String),
    #[error("unsupported certificate schema {0:?}")]
    Schema(String),
    #[error("unknown group {name:?}; catalog has: {}", known.join(", "))]
    UnknownGroup { name: String, known: Vec<String> },
    #[error("certificate does not match catalog group {group}: {message}")]
    GroupMismatch { group: String, message: String },
    #[error("element {index} of {set} ({text:?}): {message}")]
    BadElement {
        set: char,
        index: usize,
        text: String,
        message: String,
    },
    #[error("factorization is invalid: {0}")]
    Invalid(InvalidReason),
    #[error(transparent)]
    Catalog(#[from] AtlasError),
}

/// A self-contained, re-checkable record of a factorization. Elements are
/// stored as cycle strings so checking needs only the catalog generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub group: String,
    pub n: usize,
    pub degree: usize,
    pub a: usize,
    pub b: usize,
    pub seed: u64,
    pub provenance: Provenance,
    pub set_a: Vec<String>,
    pub set_b: Vec<String>,
}

impl Certificate {
    pub fn new(spec: &GroupSpec, table: &GroupTable, f: &Factorization, seed: u64) -> Self {
        let cycles = |xs: &[u32]| xs.iter().map(|&x| table.perm(x).to_cycles()).collect();
        Certificate {
            schema: CERTIFICATE_SCHEMA.to_string(),
            group: spec.name.clone(),
            n: table.order(),
            degree: table.degree(),
            a: f.a.len(),
            b: f.b.len(),
            seed,
            provenance: f.provenance.clone(),
            set_a: cycles(&f.a),
            set_b: cycles(&f.b),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CertificateError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CertificateError::Parse(e.to_string()))?;
        match value.get("schema").and_then(|s| s.as_str()) {
            Some(CERTIFICATE_SCHEMA) => {}
            Some(other) => return Err(CertificateError::Schema(other.to_string())),
            None => return Err(CertificateError::Parse("missing schema field".into())),
        }
        serde_json::from_value(value).map_err(|e| CertificateError::Parse(e.to_string()))
    }

    /// Re-enumerates the group from `catalog` and verifies the stored sets.
    pub fn check(&self, catalog: &Catalog) -> Result<Factorization, CertificateError> {
        let spec = catalog
            .get(&self.group)
            .ok_or_else(|| CertificateError::UnknownGroup {
                name: self.group.clone(),
                known: catalog.names().iter().map(|s| s.to_string()).collect(),
            })?;
        let table = spec.table()?;
        self.check_against(spec, &table)
    }

    /// As [`Certificate::check`] with an already enumerated table.
    pub fn check_against(
        &self,
        spec: &GroupSpec,
        table: &GroupTable,
    ) -> Result<Factorization, CertificateError> {
        let mismatch = |message: String| CertificateError::GroupMismatch {
            group: spec.name.clone(),
            message,
        };
        if self.group != spec.name {
            return Err(mismatch(format!("certificate names {}", self.group)));
        }
        if self.degree != table.degree() {
            return Err(mismatch(format!(
                "degree {} != {}",
                self.degree,
                table.degree()
            )));
        }
        if self.n != table.order() {
            return Err(mismatch(format!("order {} != {}", self.n, table.order())));
        }
        let a = parse_set(table, 'A', &self.set_a)?;
        let b = parse_set(table, 'B', &self.set_b)?;
        let f = Factorization::new(a, b, self.provenance.clone());
        match verify(table, &f) {
            Verdict::Valid => {}
            Verdict::Invalid(r) => return Err(CertificateError::Invalid(r)),
        }
        if (self.a, self.b) != f.sizes() {
            return Err(mismatch(format!(
                "declared sizes ({}, {}) but sets have ({}, {})",
                self.a,
                self.b,
                f.a.len(),
                f.b.len()
            )));
        }
        Ok(f)
    }
}

fn parse_set(
    table: &GroupTable,
    set: char,
    items: &[String],
) -> Result<Vec<u32>, CertificateError> {
    items
        .iter()
        .enumerate()
        .map(|(index, text)| {
            let bad = |message: String| CertificateError::BadElement {
                set,
                index,
                text: text.clone(),
                message,
            };
            let p = Perm::parse_cycles(text, table.degree()).map_err(|e| bad(e.to_string()))?;
            table
                .index_of(&p)
                .ok_or_else(|| bad("not an element of the group".into()))
        })
        .collect()
}
