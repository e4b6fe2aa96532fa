use super::construct::{checked, extend_by_transversal, invert_dual};
use super::{FactorError, Factorization, Provenance, SubgroupFinder};
use crate::atlas::field::is_prime;
use crate::permgroup::{GroupTable, SubgroupHandle};

/// Subgroups `1 = G0 < G1 < … < Gt = G`, each of prime index in the next.
#[derive(Clone, Debug)]
pub struct PrimeChain {
    pub subgroups: Vec<SubgroupHandle>,
}

impl PrimeChain {
    /// `|G_i : G_{i-1}|` for `i = 1..=t`.
    pub fn indices(&self) -> Vec<usize> {
        self.subgroups
            .windows(2)
            .map(|w| w[1].order() / w[0].order())
            .collect()
    }

    pub fn top(&self) -> &SubgroupHandle {
        self.subgroups.last().expect("chain is never empty")
    }
}

pub(crate) fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            ps.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        ps.push(n);
    }
    ps
}

/// Searches for a prime-index chain from `finder`'s ambient group down to
/// the trivial group.
///
/// `first_step` restricts the orders tried for the first (largest) proper
/// subgroup, e.g. to a hinted chain or to the prime-index orders among known
/// maximal subgroups. Further steps try `|D|/p` over primes `p` in ascending
/// order, backtracking when a branch gets stuck. `chain_hint` lists orders to
/// prefer at each level.
pub fn find_prime_chain(
    finder: &mut SubgroupFinder<'_>,
    first_step: Option<&[usize]>,
    chain_hint: &[usize],
    seed: u64,
    attempts: usize,
) -> Option<PrimeChain> {
    let table = finder.table();
    let top = finder.ambient().clone();
    let mut down = vec![top.clone()];
    if descend(
        table, finder, first_step, chain_hint, seed, attempts, &mut down,
    ) {
        down.reverse();
        Some(PrimeChain { subgroups: down })
    } else {
        None
    }
}

fn candidate_orders(order: usize, allowed: Option<&[usize]>, hint: &[usize]) -> Vec<usize> {
    let prime_index =
        |m: usize| m < order && order.is_multiple_of(m) && is_prime((order / m) as u32);
    let mut out: Vec<usize> = hint.iter().copied().filter(|&m| prime_index(m)).collect();
    for p in prime_factors(order) {
        if !out.contains(&(order / p)) {
            out.push(order / p);
        }
    }
    if let Some(a) = allowed {
        out.retain(|m| a.contains(m));
    }
    out
}

fn descend(
    table: &GroupTable,
    finder: &mut SubgroupFinder<'_>,
    allowed: Option<&[usize]>,
    hint: &[usize],
    seed: u64,
    attempts: usize,
    down: &mut Vec<SubgroupHandle>,
) -> bool {
    let current = down.last().unwrap().order();
    if current == 1 {
        return true;
    }
    for m in candidate_orders(current, allowed, hint) {
        let Some(sub) = finder.find(m) else { continue };
        down.push(sub.clone());
        let mut inner =
            SubgroupFinder::new(table, sub, seed.wrapping_add(m as u64)).with_attempts(attempts);
        if descend(table, &mut inner, None, hint, seed, attempts, down) {
            return true;
        }
        down.pop();
    }
    false
}

/// Factorization with `|A| = a` built down the chain: at each step the
/// divisor (or its cofactor, since the index is prime) divides the next
/// subgroup's order, is factored there, and is extended by a transversal.
pub fn factor_via_chain(
    table: &GroupTable,
    chain: &PrimeChain,
    a: usize,
) -> Result<Factorization, FactorError> {
    let n = chain.top().order();
    if a == 0 || !n.is_multiple_of(a) {
        return Err(FactorError::NotADivisor { a, n });
    }
    let mut f = at_level(table, chain, chain.subgroups.len() - 1, a)?;
    f.provenance = Provenance::PrimeChain {
        indices: chain.indices(),
    };
    checked(table, chain.top(), f)
}

fn at_level(
    table: &GroupTable,
    chain: &PrimeChain,
    level: usize,
    a: usize,
) -> Result<Factorization, FactorError> {
    let group = &chain.subgroups[level];
    if level == 0 {
        return Ok(Factorization::new(vec![0], vec![0], Provenance::Trivial));
    }
    let sub = &chain.subgroups[level - 1];
    let n = group.order();
    if sub.order().is_multiple_of(a) {
        let inner = at_level(table, chain, level - 1, a)?;
        extend_by_transversal(table, group, sub, &inner)
    } else {
        let inner = at_level(table, chain, level - 1, n / a)?;
        let ext = extend_by_transversal(table, group, sub, &inner)?;
        invert_dual(table, group, &ext)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::small;
    use crate::factorlib::verify;

    fn table(gens: Vec<String>, d: usize) -> GroupTable {
        GroupTable::close(&small::parse_all(&gens, d)).unwrap()
    }

    #[test]
    fn cyclic_twelve() {
        let g = table(small::cyclic_generators(12), 12);
        let mut f = SubgroupFinder::new(&g, SubgroupHandle::full(&g), 0);
        let chain = find_prime_chain(&mut f, None, &[], 0, 1000).unwrap();
        let mut idx = chain.indices();
        idx.sort_unstable();
        assert_eq!(idx, vec![2, 2, 3]);
        for a in [1, 2, 3, 4, 6, 12] {
            let fz = factor_via_chain(&g, &chain, a).unwrap();
            assert_eq!(fz.sizes(), (a, 12 / a));
            assert!(verify(&g, &fz).is_valid());
        }
        assert!(matches!(
            factor_via_chain(&g, &chain, 5),
            Err(FactorError::NotADivisor { a: 5, n: 12 })
        ));
    }

    #[test]
    fn a5_chain_through_a4() {
        let g = table(small::alternating_generators(5), 5);
        let mut f = SubgroupFinder::new(&g, SubgroupHandle::full(&g), 0);
        let chain = find_prime_chain(&mut f, None, &[], 0, 2000).unwrap();
        assert_eq!(chain.indices(), vec![2, 2, 3, 5]);
        assert_eq!(chain.subgroups[3].order(), 12);
        let fz = factor_via_chain(&g, &chain, 6).unwrap();
        assert_eq!(fz.sizes(), (6, 10));
        assert!(verify(&g, &fz).is_valid());
        assert_eq!(factor_via_chain(&g, &chain, 1).unwrap().sizes(), (1, 60));
        assert_eq!(factor_via_chain(&g, &chain, 60).unwrap().sizes(), (60, 1));
    }

    #[test]
    fn a6_has_no_chain() {
        let g = table(small::alternating_generators(6), 6);
        let mut f = SubgroupFinder::new(&g, SubgroupHandle::full(&g), 0).with_attempts(300);
        assert!(find_prime_chain(&mut f, None, &[], 0, 300).is_none());
    }
}
