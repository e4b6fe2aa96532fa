use serde::{Deserialize, Serialize};

use crate::atlas::GroupSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverStatus {
    /// `a` or `n/a` divides the order of a known proper subgroup.
    SubgroupCovered,
    NeedsSearch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub a: usize,
    pub status: CoverStatus,
    /// The subgroup order that `a` or `n/a` divides.
    pub witness: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorReport {
    pub group: String,
    pub n: usize,
    pub entries: Vec<DivisorEntry>,
}

impl DivisorReport {
    pub fn needs_search(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|e| e.status == CoverStatus::NeedsSearch)
            .map(|e| e.a)
            .collect()
    }
}

/// All positive divisors of `n` in increasing order.
pub fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Classifies every divisor `a <= sqrt(n)`: covered when `a` or `n/a` divides
/// some known proper subgroup order (a factorization then follows from one of
/// that subgroup), otherwise left for the double-coset search.
pub fn analyze(spec: &GroupSpec) -> DivisorReport {
    let n = spec.claimed_order;
    let proper: Vec<usize> = spec
        .known_subgroup_orders
        .iter()
        .copied()
        .filter(|&m| m < n)
        .collect();
    let entries = divisors(n)
        .into_iter()
        .take_while(|&a| a * a <= n)
        .map(|a| {
            let witness = proper
                .iter()
                .copied()
                .find(|&m| m % a == 0 || m % (n / a) == 0);
            DivisorEntry {
                a,
                status: if witness.is_some() {
                    CoverStatus::SubgroupCovered
                } else {
                    CoverStatus::NeedsSearch
                },
                witness,
            }
        })
        .collect();
    DivisorReport {
        group: spec.name.clone(),
        n,
        entries,
    }
}
