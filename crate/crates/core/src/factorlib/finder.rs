use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::permgroup::{Closure, GroupTable, SubgroupHandle};

/// Default number of random closure attempts per target order.
pub const DEFAULT_FINDER_ATTEMPTS: usize = 20_000;

// Consecutive rejected extensions before a random restart.
const RESTART_AFTER: usize = 12;

/// Locates subgroups of a requested order inside an ambient group.
///
/// Tries, in order: supplied hint subgroups, cyclic subgroups from the
/// element-order scan, then seeded random incremental closures: start from a
/// random element whose order divides the target and keep adjoining random
/// elements while the closure order still divides the target. Results,
/// including failures, are cached per order.
pub struct SubgroupFinder<'t> {
    table: &'t GroupTable,
    ambient: SubgroupHandle,
    hints: Vec<SubgroupHandle>,
    seed: u64,
    attempts: usize,
    orders: Option<Vec<(u32, usize)>>,
    cache: FxHashMap<usize, Option<SubgroupHandle>>,
}

impl<'t> SubgroupFinder<'t> {
    pub fn new(table: &'t GroupTable, ambient: SubgroupHandle, seed: u64) -> Self {
        SubgroupFinder {
            table,
            ambient,
            hints: Vec::new(),
            seed,
            attempts: DEFAULT_FINDER_ATTEMPTS,
            orders: None,
            cache: FxHashMap::default(),
        }
    }

    /// Adds hint subgroups; those not contained in the ambient group are ignored.
    pub fn with_hints(mut self, hints: impl IntoIterator<Item = SubgroupHandle>) -> Self {
        let ambient = &self.ambient;
        self.hints.extend(
            hints
                .into_iter()
                .filter(|h| h.members().iter().all(|&x| ambient.contains(x))),
        );
        self
    }

    pub fn with_attempts(mut self, attempts: usize) -> Self {
        self.attempts = attempts;
        self
    }

    pub fn ambient(&self) -> &SubgroupHandle {
        &self.ambient
    }

    pub fn table(&self) -> &'t GroupTable {
        self.table
    }

    /// A subgroup of order `target`, or `None` if every tactic failed.
    pub fn find(&mut self, target: usize) -> Option<SubgroupHandle> {
        if let Some(hit) = self.cache.get(&target) {
            return hit.clone();
        }
        let found = self.search(target);
        self.cache.insert(target, found.clone());
        found
    }

    fn search(&mut self, target: usize) -> Option<SubgroupHandle> {
        let n = self.ambient.order();
        if target == 0 || !n.is_multiple_of(target) {
            return None;
        }
        if target == 1 {
            return Some(SubgroupHandle::trivial(self.table));
        }
        if target == n {
            return Some(self.ambient.clone());
        }
        if let Some(h) = self.hints.iter().find(|h| h.order() == target) {
            return Some(h.clone());
        }
        if let Some(h) = self.cyclic(target) {
            return Some(h);
        }
        if let Some(p) = prime_of_power(target) {
            return self.p_group(p, target);
        }
        self.random_closure(target)
    }

    /// Grows a `p`-subgroup one factor of `p` at a time: every proper
    /// `p`-subgroup `P` of a Sylow subgroup has some `y` in `N(P) \ P` with
    /// `y^p` in `P`, and then `<P, y>` has order `p·|P|`.
    fn p_group(&mut self, p: usize, target: usize) -> Option<SubgroupHandle> {
        let table = self.table;
        let mut rng = ChaCha8Rng::seed_from_u64(
            self.seed ^ (target as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        let ambient = self.ambient.clone();
        let mut current = SubgroupHandle::trivial(table);
        while current.order() < target {
            let candidates: Vec<u32> = ambient
                .members()
                .iter()
                .copied()
                .filter(|&y| !current.contains(y) && current.contains(table.pow(y, p)))
                .filter(|&y| {
                    let yi = table.inv(y);
                    current
                        .generators()
                        .iter()
                        .all(|&x| current.contains(table.mul(table.mul(yi, x), y)))
                })
                .collect();
            let &y = candidates.choose(&mut rng)?;
            let mut gens = current.generators().to_vec();
            gens.push(y);
            current = SubgroupHandle::extend(table, current.members(), &gens, target)
                .ok()?
                .subgroup()?;
        }
        (current.order() == target).then_some(current)
    }

    fn element_orders(&mut self) -> &[(u32, usize)] {
        let table = self.table;
        let ambient = &self.ambient;
        self.orders.get_or_insert_with(|| {
            ambient
                .members()
                .iter()
                .map(|&x| (x, table.element_order(x)))
                .collect()
        })
    }

    fn cyclic(&mut self, target: usize) -> Option<SubgroupHandle> {
        let table = self.table;
        let &(x, m) = self
            .element_orders()
            .iter()
            .find(|(_, m)| m % target == 0)?;
        let g = table.pow(x, m / target);
        SubgroupHandle::closure(table, &[g], target)
            .ok()?
            .subgroup()
    }

    fn random_closure(&mut self, target: usize) -> Option<SubgroupHandle> {
        let table = self.table;
        let pool: Vec<u32> = self
            .element_orders()
            .iter()
            .filter(|&&(x, m)| x != 0 && target.is_multiple_of(m))
            .map(|&(x, _)| x)
            .collect();
        if pool.is_empty() {
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(
            self.seed ^ (target as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        let mut attempts = 0;
        while attempts < self.attempts {
            let x = *pool.choose(&mut rng).unwrap();
            let mut current = SubgroupHandle::closure(table, &[x], target)
                .ok()?
                .subgroup()?;
            let mut gens = vec![x];
            let mut rejected = 0;
            while attempts < self.attempts && rejected < RESTART_AFTER {
                attempts += 1;
                let y = pool[rng.gen_range(0..pool.len())];
                if current.contains(y) {
                    rejected += 1;
                    continue;
                }
                gens.push(y);
                match SubgroupHandle::extend(table, current.members(), &gens, target) {
                    Ok(Closure::Subgroup(s)) if target.is_multiple_of(s.order()) => {
                        current = s;
                        rejected = 0;
                        if current.order() == target {
                            return Some(current);
                        }
                    }
                    _ => {
                        gens.pop();
                        rejected += 1;
                    }
                }
            }
        }
        None
    }
}

fn prime_of_power(n: usize) -> Option<usize> {
    let p = super::chain::prime_factors(n);
    (p.len() == 1 && n > p[0]).then(|| p[0])
}
