//! Finite fields, projective linear groups and the group catalog.

mod catalog;
pub mod field;
mod linear;
pub mod small;

pub use catalog::{
    load_catalog, Catalog, FactorHint, GroupSpec, SubgroupHint, BUILTIN_CATALOG,
    CATALOG_SCHEMA_VERSION,
};
pub use field::{Field, FieldElement};
pub use linear::{psl2_permutation_generators, psl3_permutation_generators};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AtlasError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("GF({0}^{1}) is outside the supported range")]
    FieldTooLarge(u32, u32),
    #[error("unsupported field order {0}")]
    UnsupportedFieldOrder(u32),
    #[error("cannot read catalog {path}: {message}")]
    Io { path: String, message: String },
    #[error("catalog schema violation: {0}")]
    Schema(String),
    #[error("catalog entry {name}, field {field}: {message}")]
    Entry {
        name: String,
        field: &'static str,
        message: String,
    },
    #[error("catalog entry {name}: claimed order {claimed}, enumerated {enumerated}")]
    OrderMismatch {
        name: String,
        claimed: usize,
        enumerated: usize,
    },
}
