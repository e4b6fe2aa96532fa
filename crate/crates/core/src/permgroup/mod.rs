//! Permutation arithmetic, group enumeration, subgroups, transversals and
//! double cosets over dense element indices.

mod coset;
mod perm;
mod subgroup;
mod table;

pub use coset::{DoubleCosetPartition, Side, Transversal};
pub use perm::Perm;
pub use subgroup::{Closure, SubgroupHandle};
pub use table::{GroupTable, DEFAULT_ELEMENT_CAP};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("permutation degree must be at least 1")]
    EmptyDegree,
    #[error("degree {0} exceeds the supported maximum of 65535")]
    DegreeTooLarge(usize),
    #[error("image array is not a bijection")]
    NotBijective,
    #[error("malformed cycle notation {0:?}")]
    Malformed(String),
    #[error("point {0} appears more than once")]
    RepeatedPoint(usize),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("no generators given")]
    NoGenerators,
    #[error("closure exceeded {0} elements")]
    ClosureTooLarge(usize),
    #[error("element index {0} out of range")]
    IndexOutOfRange(usize),
}
