use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::chain::{factor_via_chain, find_prime_chain, prime_factors, PrimeChain};
use super::construct::{checked, extend_by_transversal, invert_dual};
use super::{FactorError, Factorization, Provenance, SubgroupFinder, DEFAULT_FINDER_ATTEMPTS};
use crate::atlas::field::is_prime;
use crate::atlas::GroupSpec;
use crate::dcsearch::{assemble, build_problem, search, SearchLimits, SearchOutcome};
use crate::permgroup::{GroupTable, Side, SubgroupHandle, Transversal};

#[derive(Clone, Debug)]
pub struct FactorOptions {
    pub seed: u64,
    /// Threads for the double-coset search.
    pub workers: usize,
    pub limits: SearchLimits,
    /// Forces a single `(h, k)` pair for the double-coset search.
    pub pair: Option<(usize, usize)>,
    pub finder_attempts: usize,
    /// Nesting limit for the subgroup-recursion strategy.
    pub max_depth: usize,
    /// Upper bound on `(h, k)` pairs tried beyond the catalog hints.
    pub max_pairs: usize,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions {
            seed: 0,
            workers: 1,
            limits: SearchLimits::default(),
            pair: None,
            finder_attempts: DEFAULT_FINDER_ATTEMPTS,
            max_depth: 4,
            max_pairs: 24,
        }
    }
}

/// One strategy tried by [`Factorizer::factor`] and why it did not apply
/// or failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyAttempt {
    pub strategy: String,
    pub depth: usize,
    pub domain_order: usize,
    pub detail: String,
}

/// Factors one group for many divisors, reusing subgroup searches.
pub struct Factorizer<'t> {
    table: &'t GroupTable,
    spec: &'t GroupSpec,
    options: FactorOptions,
    full: SubgroupHandle,
    hints: Vec<SubgroupHandle>,
    domains: FxHashMap<Vec<u32>, usize>,
    finders: Vec<SubgroupFinder<'t>>,
    chains: FxHashMap<usize, Option<PrimeChain>>,
    failed: FxHashMap<(usize, usize), ()>,
    attempts: Vec<StrategyAttempt>,
}

impl<'t> Factorizer<'t> {
    pub fn new(
        table: &'t GroupTable,
        spec: &'t GroupSpec,
        options: FactorOptions,
    ) -> Result<Self, FactorError> {
        let hints = spec
            .subgroup_hints
            .iter()
            .map(|h| spec.hint_subgroup(table, h))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Factorizer {
            table,
            spec,
            options,
            full: SubgroupHandle::full(table),
            hints,
            domains: FxHashMap::default(),
            finders: Vec::new(),
            chains: FxHashMap::default(),
            failed: FxHashMap::default(),
            attempts: Vec::new(),
        })
    }

    pub fn options(&self) -> &FactorOptions {
        &self.options
    }

    /// A verified factorization of the whole group with `|A| = a`.
    pub fn factor(&mut self, a: usize) -> Result<Factorization, FactorError> {
        let n = self.table.order();
        if a == 0 || !n.is_multiple_of(a) {
            return Err(FactorError::NotADivisor { a, n });
        }
        self.attempts.clear();
        let full = self.full.clone();
        match self.solve(&full, a, 0)? {
            Some(f) => checked(self.table, &full, f),
            None => Err(FactorError::Exhausted {
                a,
                attempts: std::mem::take(&mut self.attempts),
            }),
        }
    }

    /// The prime-index chain of the whole group, if one is found.
    pub fn prime_chain(&mut self) -> Option<PrimeChain> {
        let full = self.full.clone();
        self.chain_for(&full, 0)
    }

    fn log(&mut self, strategy: &str, depth: usize, domain: &SubgroupHandle, detail: String) {
        self.attempts.push(StrategyAttempt {
            strategy: strategy.to_string(),
            depth,
            domain_order: domain.order(),
            detail,
        });
    }

    fn domain_id(&mut self, domain: &SubgroupHandle) -> usize {
        if let Some(&id) = self.domains.get(domain.members()) {
            return id;
        }
        let id = self.finders.len();
        let seed = self.options.seed.wrapping_add(domain.order() as u64);
        let finder = SubgroupFinder::new(self.table, domain.clone(), seed)
            .with_hints(self.hints.iter().cloned())
            .with_attempts(self.options.finder_attempts);
        self.finders.push(finder);
        self.domains.insert(domain.members().to_vec(), id);
        id
    }

    fn find(&mut self, domain: &SubgroupHandle, order: usize) -> Option<SubgroupHandle> {
        let id = self.domain_id(domain);
        self.finders[id].find(order)
    }

    fn solve(
        &mut self,
        domain: &SubgroupHandle,
        a: usize,
        depth: usize,
    ) -> Result<Option<Factorization>, FactorError> {
        let id = self.domain_id(domain);
        if self.failed.contains_key(&(id, a)) {
            return Ok(None);
        }
        let found = self.solve_uncached(domain, a, depth)?;
        if found.is_none() {
            self.failed.insert((id, a), ());
        }
        Ok(found)
    }

    fn solve_uncached(
        &mut self,
        domain: &SubgroupHandle,
        a: usize,
        depth: usize,
    ) -> Result<Option<Factorization>, FactorError> {
        let table = self.table;
        let d = domain.order();
        let b = d / a;
        if a == 1 || b == 1 {
            let (sa, sb) = if a == 1 {
                (vec![0], domain.members().to_vec())
            } else {
                (domain.members().to_vec(), vec![0])
            };
            return Ok(Some(Factorization::new(sa, sb, Provenance::Trivial)));
        }
        if let Some(f) = self.direct(domain, a, b, depth)? {
            return Ok(Some(f));
        }
        if depth < self.options.max_depth {
            if let Some(f) = self.recurse(domain, a, b, depth)? {
                return Ok(Some(f));
            }
        } else {
            self.log("lemma-second", depth, domain, "depth limit reached".into());
        }
        if let Some(chain) = self.chain_for(domain, depth) {
            let mut f = factor_via_chain(table, &chain, a)?;
            if depth > 0 {
                f = checked(table, domain, f)?;
            }
            return Ok(Some(f));
        }
        self.log(
            "prime-chain",
            depth,
            domain,
            "no prime-index chain found".into(),
        );
        if depth == 0 {
            return self.double_coset(domain, a, b);
        }
        Ok(None)
    }

    // A catalog list without a prime-index order holds every maximal
    // subgroup order, so it bounds the orders of all proper subgroups.
    // Lists with a prime-index order are partial.
    fn could_exist(&self, order: usize) -> bool {
        let n = self.table.order();
        let known: Vec<usize> = self
            .spec
            .known_subgroup_orders
            .iter()
            .copied()
            .filter(|&m| m < n)
            .collect();
        let partial = known.iter().any(|&m| is_prime((n / m) as u32));
        known.is_empty() || partial || known.iter().any(|m| m % order == 0)
    }

    fn direct(
        &mut self,
        domain: &SubgroupHandle,
        a: usize,
        b: usize,
        depth: usize,
    ) -> Result<Option<Factorization>, FactorError> {
        let table = self.table;
        for (target, dual) in [(a, false), (b, true)] {
            if dual && a == b {
                break;
            }
            if depth == 0 && !self.could_exist(target) {
                self.log(
                    "direct-subgroup",
                    depth,
                    domain,
                    format!("order {target} divides no known subgroup order"),
                );
                continue;
            }
            let Some(h) = self.find(domain, target) else {
                self.log(
                    "direct-subgroup",
                    depth,
                    domain,
                    format!("no subgroup of order {target} found"),
                );
                continue;
            };
            let t = Transversal::new(table, domain, &h, Side::Right);
            let f = Factorization::new(
                h.members().to_vec(),
                t.reps,
                Provenance::DirectSubgroup { order: target },
            );
            let f = checked(table, domain, f)?;
            return Ok(Some(if dual {
                invert_dual(table, domain, &f)?
            } else {
                f
            }));
        }
        Ok(None)
    }

    fn child_orders(&self, d: usize, a: usize, b: usize, depth: usize) -> Vec<usize> {
        let fits =
            |m: usize| m < d && d.is_multiple_of(m) && (m.is_multiple_of(a) || m.is_multiple_of(b));
        let mut out: Vec<usize> = Vec::new();
        if depth == 0 {
            out.extend(
                self.spec
                    .known_subgroup_orders
                    .iter()
                    .copied()
                    .filter(|&m| fits(m)),
            );
        }
        if out.is_empty() || depth > 0 {
            for p in prime_factors(d) {
                let m = d / p;
                if fits(m) && !out.contains(&m) {
                    out.push(m);
                }
            }
        }
        if depth == 0 {
            out.retain(|&m| self.could_exist(m));
        }
        out.sort_unstable_by(|x, y| y.cmp(x));
        out
    }

    fn recurse(
        &mut self,
        domain: &SubgroupHandle,
        a: usize,
        b: usize,
        depth: usize,
    ) -> Result<Option<Factorization>, FactorError> {
        let table = self.table;
        for m in self.child_orders(domain.order(), a, b, depth) {
            let Some(h) = self.find(domain, m) else {
                self.log(
                    "lemma-second",
                    depth,
                    domain,
                    format!("no subgroup of order {m} found"),
                );
                continue;
            };
            for (inner, dual) in [(a, false), (b, true)] {
                if m % inner != 0 || (dual && a == b) {
                    continue;
                }
                if let Some(fh) = self.solve(&h, inner, depth + 1)? {
                    let f = extend_by_transversal(table, domain, &h, &fh)?;
                    return Ok(Some(if dual {
                        invert_dual(table, domain, &f)?
                    } else {
                        f
                    }));
                }
                self.log(
                    "lemma-second",
                    depth,
                    domain,
                    format!("subgroup of order {m} not factored with |A| = {inner}"),
                );
            }
        }
        Ok(None)
    }

    fn chain_for(&mut self, domain: &SubgroupHandle, depth: usize) -> Option<PrimeChain> {
        let id = self.domain_id(domain);
        if let Some(c) = self.chains.get(&id) {
            return c.clone();
        }
        let n = domain.order();
        let hint = self.spec.prime_chain_hint.clone().unwrap_or_default();
        // At the top, only known subgroups of prime index can start a chain.
        let first: Option<Vec<usize>> = (depth == 0 && !self.spec.known_subgroup_orders.is_empty())
            .then(|| {
                self.spec
                    .known_subgroup_orders
                    .iter()
                    .copied()
                    .filter(|&m| m < n && n.is_multiple_of(m) && is_prime((n / m) as u32))
                    .collect()
            });
        let chain = if first.as_ref().is_some_and(|f| f.is_empty()) {
            None
        } else {
            let seed = self.options.seed;
            let attempts = self.options.finder_attempts;
            find_prime_chain(
                &mut self.finders[id],
                first.as_deref(),
                &hint,
                seed,
                attempts,
            )
        };
        self.chains.insert(id, chain.clone());
        chain
    }

    fn pairs(&self, a: usize, b: usize) -> Vec<(usize, usize)> {
        if let Some(p) = self.options.pair {
            return vec![p];
        }
        let mut out: Vec<(usize, usize)> = self
            .spec
            .factor_hints
            .iter()
            .filter(|h| h.a == a)
            .map(|h| (h.h, h.k))
            .collect();
        let mut general = Vec::new();
        for h in super::divisors(a) {
            for k in super::divisors(b) {
                if gcd(h, k) == 1 && h * k > 1 && !out.contains(&(h, k)) {
                    general.push((h, k));
                }
            }
        }
        general.sort_by(|x, y| (y.0 * y.1).cmp(&(x.0 * x.1)).then(y.0.cmp(&x.0)));
        general.retain(|&(h, k)| self.could_exist(h) && self.could_exist(k));
        out.extend(general.into_iter().take(self.options.max_pairs));
        out
    }

    fn double_coset(
        &mut self,
        domain: &SubgroupHandle,
        a: usize,
        b: usize,
    ) -> Result<Option<Factorization>, FactorError> {
        // Hints are recorded for a <= sqrt(n); larger a goes through the dual.
        if a > b && self.options.pair.is_none() {
            return Ok(match self.double_coset(domain, b, a)? {
                Some(f) => Some(invert_dual(self.table, domain, &f)?),
                None => None,
            });
        }
        let table = self.table;
        for (h, k) in self.pairs(a, b) {
            if !a.is_multiple_of(h) || !b.is_multiple_of(k) {
                self.log(
                    "double-coset-search",
                    0,
                    domain,
                    format!("(h, k) = ({h}, {k}) does not fit a = {a}"),
                );
                continue;
            }
            let (Some(hs), Some(ks)) = (self.find(domain, h), self.find(domain, k)) else {
                self.log(
                    "double-coset-search",
                    0,
                    domain,
                    format!("(h, k) = ({h}, {k}): subgroup not found"),
                );
                continue;
            };
            // Enumerate the smaller of A0 and B0; the mirrored problem
            // factors with the sizes swapped and is inverted afterwards.
            let (a0, b0) = (a / h, b / k);
            let mirrored = a0 > b0;
            let built = if mirrored {
                build_problem(table, domain, &ks, &hs, b0, a0, self.options.limits)
            } else {
                build_problem(table, domain, &hs, &ks, a0, b0, self.options.limits)
            };
            let problem = match built {
                Ok(p) => p,
                Err(e) => {
                    self.log(
                        "double-coset-search",
                        0,
                        domain,
                        format!("(h, k) = ({h}, {k}): {e}"),
                    );
                    continue;
                }
            };
            let report = search(&problem, self.options.workers);
            let record = problem.record(&report, self.options.seed, self.options.workers.max(1));
            match report.outcome {
                SearchOutcome::Found { a0, b0 } => {
                    let f = assemble(&problem, &a0, &b0, record)
                        .map_err(|e| FactorError::Internal(e.to_string()))?;
                    return Ok(Some(if mirrored {
                        invert_dual(table, domain, &f)?
                    } else {
                        f
                    }));
                }
                other => self.log(
                    "double-coset-search",
                    0,
                    domain,
                    format!(
                        "(h, k) = ({h}, {k}): {} after {} candidates, {} nodes",
                        if other == SearchOutcome::Exhausted {
                            "exhausted"
                        } else {
                            "budget exceeded"
                        },
                        report.candidates,
                        report.nodes
                    ),
                ),
            }
        }
        Ok(None)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One-shot [`Factorizer`] run.
pub fn factor(
    table: &GroupTable,
    spec: &GroupSpec,
    a: usize,
    options: FactorOptions,
) -> Result<Factorization, FactorError> {
    Factorizer::new(table, spec, options)?.factor(a)
}
