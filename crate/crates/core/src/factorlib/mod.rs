//! Two-subset factorizations `G = A·B`: verification, the reduction
//! constructions, divisor analysis and the orchestrating pipeline.

mod analyze;
mod certificate;
mod chain;
mod construct;
mod finder;
mod pipeline;
mod verify;

pub use analyze::{analyze, divisors, CoverStatus, DivisorEntry, DivisorReport};
pub use certificate::{Certificate, CertificateError, CERTIFICATE_SCHEMA};
pub use chain::{factor_via_chain, find_prime_chain, PrimeChain};
pub use construct::{combine_normal, extend_by_transversal, invert_dual, normalize};
pub use finder::{SubgroupFinder, DEFAULT_FINDER_ATTEMPTS};
pub use pipeline::{factor, FactorOptions, Factorizer, StrategyAttempt};
pub use verify::{verify, verify_in, InvalidReason, Verdict};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atlas::AtlasError;
use crate::dcsearch::SearchRecord;

/// A factorization `A·B` of a group (or of a subgroup, for intermediate
/// results), as sorted element indices of the enumerated table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub provenance: Provenance,
}

impl Factorization {
    pub fn new(mut a: Vec<u32>, mut b: Vec<u32>, provenance: Provenance) -> Self {
        a.sort_unstable();
        b.sort_unstable();
        Factorization { a, b, provenance }
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.a.len(), self.b.len())
    }
}

/// How a factorization was constructed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// `a = 1` or `a = |G|`.
    Trivial,
    /// A subgroup of order `a` with a right transversal.
    DirectSubgroup { order: usize },
    /// `A = U·A0`, `B = B0·V` over a normal subgroup `N` and the quotient.
    LemmaSimple {
        normal_order: usize,
        a0: usize,
        b0: usize,
        quotient_a: usize,
        quotient_b: usize,
        inner: Box<Provenance>,
    },
    /// `H = A·C` extended to `G = A·(C·T)` by a right transversal `T` of `H`.
    LemmaSecond {
        subgroup_order: usize,
        c: usize,
        transversal: usize,
        inner: Box<Provenance>,
    },
    /// Repeated transversal extension down a prime-index chain.
    PrimeChain { indices: Vec<usize> },
    /// `A = H·A0`, `B = B0·K` from the double-coset search.
    DoubleCosetSearch(SearchRecord),
    /// `(B^-1, A^-1)` of the inner factorization.
    InvertedDual { inner: Box<Provenance> },
}

impl Provenance {
    /// Short label of the outermost construction.
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::Trivial => "trivial",
            Provenance::DirectSubgroup { .. } => "direct-subgroup",
            Provenance::LemmaSimple { .. } => "lemma-simple",
            Provenance::LemmaSecond { .. } => "lemma-second",
            Provenance::PrimeChain { .. } => "prime-chain",
            Provenance::DoubleCosetSearch(_) => "double-coset-search",
            Provenance::InvertedDual { .. } => "inverted-dual",
        }
    }

    /// `(h, k)` of a double-coset search at the top, oriented so that `H`
    /// lies in `A` of this factorization.
    pub fn search_pair(&self) -> Option<(usize, usize)> {
        match self {
            Provenance::DoubleCosetSearch(r) => Some((r.h, r.k)),
            Provenance::InvertedDual { inner } => inner.search_pair().map(|(h, k)| (k, h)),
            _ => None,
        }
    }

    /// The double-coset search record, if one was used at any depth.
    pub fn search_record(&self) -> Option<&SearchRecord> {
        match self {
            Provenance::DoubleCosetSearch(r) => Some(r),
            Provenance::LemmaSimple { inner, .. }
            | Provenance::LemmaSecond { inner, .. }
            | Provenance::InvertedDual { inner } => inner.search_record(),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("{a} does not divide the group order {n}")]
    NotADivisor { a: usize, n: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("invalid quotient data: {0}")]
    InvalidQuotient(String),
    #[error("factorization is not contained in the subgroup")]
    NotInSubgroup,
    #[error("input factorization is invalid: {0}")]
    InvalidInput(InvalidReason),
    #[error("internal error: constructed factorization failed verification ({0})")]
    Internal(String),
    #[error(transparent)]
    Catalog(#[from] AtlasError),
    #[error("all strategies exhausted for a = {a} ({} attempts)", attempts.len())]
    Exhausted {
        a: usize,
        attempts: Vec<StrategyAttempt>,
    },
}
