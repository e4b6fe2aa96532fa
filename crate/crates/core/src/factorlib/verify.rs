use std::fmt;

use serde::{Deserialize, Serialize};

use super::Factorization;
use crate::permgroup::{GroupTable, SubgroupHandle};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum InvalidReason {
    /// `|A|·|B|` differs from the order of the group being factored.
    SizeMismatch {
        a: usize,
        b: usize,
        expected: usize,
    },
    /// Two pairs with the same product.
    Collision {
        first: (u32, u32),
        second: (u32, u32),
        product: u32,
    },
    IndexOutOfRange {
        index: u32,
    },
    /// An element of `A` or `B` lies outside the subgroup being factored.
    OutsideSubgroup {
        index: u32,
    },
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidReason::SizeMismatch { a, b, expected } => {
                write!(f, "size mismatch: {a}·{b} != {expected}")
            }
            InvalidReason::Collision {
                first,
                second,
                product,
            } => write!(
                f,
                "collision: a={} b={} and a={} b={} both give element {product}",
                first.0, first.1, second.0, second.1
            ),
            InvalidReason::IndexOutOfRange { index } => {
                write!(f, "element index {index} out of range")
            }
            InvalidReason::OutsideSubgroup { index } => {
                write!(f, "element {index} lies outside the subgroup")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(InvalidReason),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// Checks that `A·B` is a factorization of the whole group: `|A|·|B| = n`
/// and the products are pairwise distinct.
pub fn verify(table: &GroupTable, f: &Factorization) -> Verdict {
    check(table, None, f)
}

/// As [`verify`], for a factorization of the subgroup `domain`.
pub fn verify_in(table: &GroupTable, domain: &SubgroupHandle, f: &Factorization) -> Verdict {
    check(table, Some(domain), f)
}

fn check(table: &GroupTable, domain: Option<&SubgroupHandle>, f: &Factorization) -> Verdict {
    let n = table.order();
    let expected = domain.map_or(n, |d| d.order());
    if f.a.len() * f.b.len() != expected {
        return Verdict::Invalid(InvalidReason::SizeMismatch {
            a: f.a.len(),
            b: f.b.len(),
            expected,
        });
    }
    for &x in f.a.iter().chain(&f.b) {
        if x as usize >= n {
            return Verdict::Invalid(InvalidReason::IndexOutOfRange { index: x });
        }
        if domain.is_some_and(|d| !d.contains(x)) {
            return Verdict::Invalid(InvalidReason::OutsideSubgroup { index: x });
        }
    }
    const FREE: u64 = u64::MAX;
    let mut owner = vec![FREE; n];
    for &x in &f.a {
        for &y in &f.b {
            let p = table.mul(x, y);
            let slot = &mut owner[p as usize];
            if *slot != FREE {
                let first = ((*slot >> 32) as u32, *slot as u32);
                return Verdict::Invalid(InvalidReason::Collision {
                    first,
                    second: (x, y),
                    product: p,
                });
            }
            *slot = (x as u64) << 32 | y as u64;
        }
    }
    Verdict::Valid
}
