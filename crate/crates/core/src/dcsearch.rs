//! Double-coset search: given subgroups `H`, `K` of coprime orders and a
//! split `a = |H|·a0`, `n/a = |K|·b0`, find `A0`, `B0` whose `t = a0·b0`
//! products `y·z` lie in pairwise distinct double cosets `H y z K`. Then
//! `A = H·A0`, `B = B0·K` factor the group.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactcover::{solve_first, ExactCoverInstance, SolveOutcome, DEFAULT_NODE_BUDGET};
use crate::factorlib::{verify_in, Factorization, Provenance, Verdict};
use crate::permgroup::{DoubleCosetPartition, GroupTable, Side, SubgroupHandle, Transversal};

pub const DEFAULT_CANDIDATE_CAP: u64 = 1_000_000;
pub const DEFAULT_TIME_BUDGET: Duration = Duration::from_secs(60);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("|H| = {h} and |K| = {k} are not coprime")]
    NotCoprime { h: usize, k: usize },
    #[error("a0·b0 = {a0}·{b0} but there are {t} double cosets")]
    SplitMismatch { a0: usize, b0: usize, t: usize },
    #[error("H or K is not a subgroup of the ambient group")]
    NotSubgroup,
    #[error("double coset {id} has {size} elements, expected {expected}")]
    SizeLaw {
        id: u32,
        size: usize,
        expected: usize,
    },
    #[error("assembled sets do not factor the group: {0}")]
    Assembly(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// `A0` candidates handed to the exact-cover solver.
    pub max_candidates: u64,
    /// Node budget per exact-cover instance.
    pub node_budget: u64,
    pub time_budget: Duration,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_candidates: DEFAULT_CANDIDATE_CAP,
            node_budget: DEFAULT_NODE_BUDGET,
            time_budget: DEFAULT_TIME_BUDGET,
        }
    }
}

/// Statistics of one search, as stored in certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub h: usize,
    pub k: usize,
    pub a0: usize,
    pub b0: usize,
    pub t: usize,
    pub candidates: u64,
    pub nodes: u64,
    pub elapsed_ms: u64,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        a0: Vec<u32>,
        b0: Vec<u32>,
    },
    /// Every candidate was tried and no exact cover exists for any of them.
    Exhausted,
    /// A limit stopped the search before it was exhaustive.
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub candidates: u64,
    pub nodes: u64,
    pub elapsed: Duration,
}

/// An immutable search instance; shareable across worker threads.
#[derive(Clone)]
pub struct SearchProblem<'t> {
    table: &'t GroupTable,
    ambient: SubgroupHandle,
    h: SubgroupHandle,
    k: SubgroupHandle,
    a0: usize,
    b0: usize,
    s: Vec<u32>,
    q: Vec<u32>,
    partition: DoubleCosetPartition,
    limits: SearchLimits,
}

impl std::fmt::Debug for SearchProblem<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SearchProblem")
            .field("h", &self.h.order())
            .field("k", &self.k.order())
            .field("a0", &self.a0)
            .field("b0", &self.b0)
            .field("t", &self.partition.count())
            .field("limits", &self.limits)
            .finish()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Builds the transversals and the double-coset partition and checks the
/// size law.
pub fn build_problem<'t>(
    table: &'t GroupTable,
    ambient: &SubgroupHandle,
    h: &SubgroupHandle,
    k: &SubgroupHandle,
    a0: usize,
    b0: usize,
    limits: SearchLimits,
) -> Result<SearchProblem<'t>, SearchError> {
    let (ho, ko) = (h.order(), k.order());
    if gcd(ho, ko) != 1 {
        return Err(SearchError::NotCoprime { h: ho, k: ko });
    }
    if !h.is_subgroup_of(table, ambient) || !k.is_subgroup_of(table, ambient) {
        return Err(SearchError::NotSubgroup);
    }
    let t = ambient.order() / (ho * ko);
    if a0 == 0 || b0 == 0 || a0 * b0 != t {
        return Err(SearchError::SplitMismatch { a0, b0, t });
    }
    let partition = DoubleCosetPartition::new(table, ambient, h, k);
    if let Some((id, &size)) = partition
        .sizes()
        .iter()
        .enumerate()
        .find(|(_, &s)| s != ho * ko)
    {
        return Err(SearchError::SizeLaw {
            id: id as u32,
            size,
            expected: ho * ko,
        });
    }
    debug_assert_eq!(partition.count(), t);
    let s = Transversal::new(table, ambient, h, Side::Right).reps;
    let q = Transversal::new(table, ambient, k, Side::Left).reps;
    Ok(SearchProblem {
        table,
        ambient: ambient.clone(),
        h: h.clone(),
        k: k.clone(),
        a0,
        b0,
        s,
        q,
        partition,
        limits,
    })
}

impl<'t> SearchProblem<'t> {
    pub fn table(&self) -> &'t GroupTable {
        self.table
    }

    pub fn ambient(&self) -> &SubgroupHandle {
        &self.ambient
    }

    pub fn h(&self) -> &SubgroupHandle {
        &self.h
    }

    pub fn k(&self) -> &SubgroupHandle {
        &self.k
    }

    pub fn a0(&self) -> usize {
        self.a0
    }

    pub fn b0(&self) -> usize {
        self.b0
    }

    /// Number of double cosets.
    pub fn t(&self) -> usize {
        self.partition.count()
    }

    /// Right transversal of `H`; the identity comes first.
    pub fn s(&self) -> &[u32] {
        &self.s
    }

    /// Left transversal of `K`; the identity comes first.
    pub fn q(&self) -> &[u32] {
        &self.q
    }

    pub fn partition(&self) -> &DoubleCosetPartition {
        &self.partition
    }

    pub fn limits(&self) -> SearchLimits {
        self.limits
    }

    /// Record of a finished search on this problem.
    pub fn record(&self, report: &SearchReport, seed: u64, workers: usize) -> SearchRecord {
        SearchRecord {
            h: self.h.order(),
            k: self.k.order(),
            a0: self.a0,
            b0: self.b0,
            t: self.t(),
            candidates: report.candidates,
            nodes: report.nodes,
            elapsed_ms: report.elapsed.as_millis() as u64,
            seed,
            workers,
        }
    }
}

struct Shared {
    stop: AtomicBool,
    candidates: AtomicU64,
    nodes: AtomicU64,
    limited: AtomicBool,
    deadline: Instant,
}

/// Runs the search, sharding the first free choice of `A0` across `workers`
/// threads. With one worker the result is deterministic.
pub fn search(problem: &SearchProblem<'_>, workers: usize) -> SearchReport {
    let start = Instant::now();
    let shared = Shared {
        stop: AtomicBool::new(false),
        candidates: AtomicU64::new(0),
        nodes: AtomicU64::new(0),
        limited: AtomicBool::new(false),
        deadline: start + problem.limits.time_budget,
    };
    let workers = workers.max(1);
    let found = if workers == 1 {
        Worker::new(problem, &shared, 0, 1).run()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let shared = &shared;
                    scope.spawn(move || Worker::new(problem, shared, w, workers).run())
                })
                .collect();
            let mut first = None;
            for hd in handles {
                let r = hd.join().expect("search worker panicked");
                if first.is_none() {
                    first = r;
                }
            }
            first
        })
    };
    let outcome = match found {
        Some((a0, b0)) => SearchOutcome::Found { a0, b0 },
        None if shared.limited.load(Ordering::Relaxed) => SearchOutcome::BudgetExceeded,
        None => SearchOutcome::Exhausted,
    };
    SearchReport {
        outcome,
        candidates: shared.candidates.load(Ordering::Relaxed),
        nodes: shared.nodes.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    }
}

struct Worker<'p, 't> {
    p: &'p SearchProblem<'t>,
    shared: &'p Shared,
    shard: usize,
    shards: usize,
    chosen: Vec<usize>,
    // cols[d][j]: double coset of chosen[d]·q[j]
    cols: Vec<Vec<u32>>,
    // alive[d][j]: the first d+1 products with q[j] are in distinct cosets
    alive: Vec<Vec<bool>>,
}

enum Step {
    Continue,
    Done(Vec<u32>, Vec<u32>),
    Stop,
}

impl<'p, 't> Worker<'p, 't> {
    fn new(p: &'p SearchProblem<'t>, shared: &'p Shared, shard: usize, shards: usize) -> Self {
        Worker {
            p,
            shared,
            shard,
            shards,
            chosen: Vec::with_capacity(p.a0),
            cols: Vec::with_capacity(p.a0),
            alive: Vec::with_capacity(p.a0),
        }
    }

    fn run(mut self) -> Option<(Vec<u32>, Vec<u32>)> {
        // identity is s[0]
        self.push(0);
        let r = match self.dfs(1) {
            Step::Done(a, b) => Some((a, b)),
            _ => None,
        };
        if r.is_some() {
            self.shared.stop.store(true, Ordering::Relaxed);
        }
        r
    }

    fn push(&mut self, si: usize) {
        let table = self.p.table;
        let y = self.p.s[si];
        let col: Vec<u32> = self
            .p
            .q
            .iter()
            .map(|&z| self.p.partition.id(table.mul(y, z)))
            .collect();
        let alive: Vec<bool> = match self.alive.last() {
            None => vec![true; col.len()],
            Some(prev) => (0..col.len())
                .map(|j| prev[j] && self.cols.iter().all(|c| c[j] != col[j]))
                .collect(),
        };
        self.chosen.push(si);
        self.cols.push(col);
        self.alive.push(alive);
    }

    fn pop(&mut self) {
        self.chosen.pop();
        self.cols.pop();
        self.alive.pop();
    }

    fn dfs(&mut self, depth: usize) -> Step {
        if self.shared.stop.load(Ordering::Relaxed) {
            return Step::Stop;
        }
        if depth == self.p.a0 {
            return self.leaf();
        }
        let start = self.chosen.last().map_or(1, |&i| i + 1).max(1);
        let remaining = self.p.a0 - depth;
        let end = self.p.s.len().saturating_sub(remaining - 1);
        for si in start..end {
            if depth == 1 && self.shards > 1 && si % self.shards != self.shard {
                continue;
            }
            // the identity row (q[0] = e) must stay usable: dc(y) are distinct
            let id = self.p.partition.id(self.p.s[si]);
            if self.cols.iter().any(|c| c[0] == id) {
                continue;
            }
            self.push(si);
            match self.dfs(depth + 1) {
                Step::Continue => {}
                other => {
                    self.pop();
                    return other;
                }
            }
            self.pop();
        }
        Step::Continue
    }

    fn leaf(&mut self) -> Step {
        let shared = self.shared;
        if Instant::now() >= shared.deadline {
            shared.limited.store(true, Ordering::Relaxed);
            shared.stop.store(true, Ordering::Relaxed);
            return Step::Stop;
        }
        if shared.candidates.fetch_add(1, Ordering::Relaxed) >= self.p.limits.max_candidates {
            shared.candidates.fetch_sub(1, Ordering::Relaxed);
            shared.limited.store(true, Ordering::Relaxed);
            shared.stop.store(true, Ordering::Relaxed);
            return Step::Stop;
        }
        let Some(rows) = self.leaf_rows() else {
            return Step::Continue;
        };
        let inst = ExactCoverInstance::new(self.p.t(), rows, vec![0])
            .expect("rows are distinct and in range");
        let report = solve_first(&inst, self.p.limits.node_budget);
        shared.nodes.fetch_add(report.nodes, Ordering::Relaxed);
        match report.outcome {
            SolveOutcome::Found(sol) => {
                let a0 = self.chosen.iter().map(|&i| self.p.s[i]).collect();
                let b0 = sol.row_ids.iter().map(|&j| self.p.q[j as usize]).collect();
                Step::Done(a0, b0)
            }
            SolveOutcome::None => Step::Continue,
            SolveOutcome::BudgetExhausted => {
                shared.limited.store(true, Ordering::Relaxed);
                Step::Continue
            }
        }
    }
}

impl Worker<'_, '_> {
    /// Exact-cover rows for the current `A0`, deduplicated by column set, or
    /// `None` when some double coset is hit by no usable `z`.
    fn leaf_rows(&self) -> Option<Vec<(u32, Vec<usize>)>> {
        let alive = self.alive.last().unwrap();
        let t = self.p.t();
        let usable = alive.iter().enumerate().filter(|(_, &a)| a).map(|(j, _)| j);
        let rows: Vec<(u32, Vec<usize>)> = if t <= 128 {
            let mut seen = rustc_hash::FxHashSet::default();
            let mut union = 0u128;
            let mut masks = Vec::new();
            for j in usable {
                let mask = self.cols.iter().fold(0u128, |m, c| m | 1u128 << c[j]);
                if seen.insert(mask) {
                    union |= mask;
                    masks.push((j as u32, mask));
                }
            }
            if union.count_ones() as usize != t {
                return None;
            }
            masks
                .into_iter()
                .map(|(j, m)| (j, (0..t).filter(|&c| m >> c & 1 == 1).collect()))
                .collect()
        } else {
            let mut seen = rustc_hash::FxHashSet::default();
            let mut hit = vec![false; t];
            let mut rows = Vec::new();
            for j in usable {
                let mut set: Vec<usize> = self.cols.iter().map(|c| c[j] as usize).collect();
                set.sort_unstable();
                if seen.insert(set.clone()) {
                    set.iter().for_each(|&c| hit[c] = true);
                    rows.push((j as u32, set));
                }
            }
            if hit.contains(&false) {
                return None;
            }
            rows
        };
        (rows.len() >= self.p.b0).then_some(rows)
    }
}

/// `A = H·A0`, `B = B0·K`, verified as a factorization of the ambient group.
pub fn assemble(
    problem: &SearchProblem<'_>,
    a0: &[u32],
    b0: &[u32],
    record: SearchRecord,
) -> Result<Factorization, SearchError> {
    let table = problem.table;
    let a = problem
        .h
        .members()
        .iter()
        .flat_map(|&x| a0.iter().map(move |&y| table.mul(x, y)))
        .collect();
    let b = b0
        .iter()
        .flat_map(|&z| problem.k.members().iter().map(move |&w| table.mul(z, w)))
        .collect();
    let f = Factorization::new(a, b, Provenance::DoubleCosetSearch(record));
    match verify_in(table, &problem.ambient, &f) {
        Verdict::Valid => Ok(f),
        Verdict::Invalid(r) => Err(SearchError::Assembly(r.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{psl2_permutation_generators, small};
    use crate::factorlib::SubgroupFinder;

    fn l2_8() -> GroupTable {
        GroupTable::close(&psl2_permutation_generators(8).unwrap()).unwrap()
    }

    #[test]
    fn l2_8_seven_by_eight() {
        let g = l2_8();
        let full = SubgroupHandle::full(&g);
        let mut f = SubgroupFinder::new(&g, full.clone(), 1);
        let (h, k) = (f.find(7).unwrap(), f.find(8).unwrap());
        let p = build_problem(&g, &full, &h, &k, 3, 3, SearchLimits::default()).unwrap();
        assert_eq!((p.t(), p.s().len(), p.q().len()), (9, 72, 63));
        let r = search(&p, 1);
        let SearchOutcome::Found { a0, b0 } = &r.outcome else {
            panic!("{r:?}")
        };
        assert_eq!((a0.len(), b0.len()), (3, 3));
        assert!(a0.contains(&0) && b0.contains(&0));
        let fz = assemble(&p, a0, b0, p.record(&r, 0, 1)).unwrap();
        assert_eq!(fz.sizes(), (21, 24));
    }

    #[test]
    fn a0_one_is_a_transversal_of_double_cosets() {
        let g = GroupTable::close(&small::parse_all(&small::alternating_generators(5), 5)).unwrap();
        let full = SubgroupHandle::full(&g);
        let mut f = SubgroupFinder::new(&g, full.clone(), 2);
        let (h, k) = (f.find(3).unwrap(), f.find(4).unwrap());
        let p = build_problem(&g, &full, &h, &k, 1, 5, SearchLimits::default()).unwrap();
        let r = search(&p, 1);
        let SearchOutcome::Found { a0, b0 } = &r.outcome else {
            panic!()
        };
        assert_eq!(a0, &vec![0]);
        let mut ids: Vec<u32> = b0.iter().map(|&z| p.partition().id(z)).collect();
        ids.sort_unstable();
        assert_eq!(ids, (0..5).collect::<Vec<_>>());
        assert_eq!(r.candidates, 1);
    }

    #[test]
    fn rejects_bad_problems() {
        let g = l2_8();
        let full = SubgroupHandle::full(&g);
        let mut f = SubgroupFinder::new(&g, full.clone(), 1);
        let (h6, h2, k7) = (f.find(6).unwrap(), f.find(2).unwrap(), f.find(7).unwrap());
        assert_eq!(
            build_problem(&g, &full, &h6, &h2, 1, 42, SearchLimits::default()).unwrap_err(),
            SearchError::NotCoprime { h: 6, k: 2 }
        );
        assert_eq!(
            build_problem(&g, &full, &h6, &k7, 3, 3, SearchLimits::default()).unwrap_err(),
            SearchError::SplitMismatch {
                a0: 3,
                b0: 3,
                t: 12
            }
        );
        let triv = SubgroupHandle::trivial(&g);
        let p = build_problem(&g, &full, &triv, &triv, 1, 504, SearchLimits::default()).unwrap();
        assert_eq!(p.t(), 504);
    }

    #[test]
    fn candidate_cap_reports_budget() {
        let g = l2_8();
        let full = SubgroupHandle::full(&g);
        let mut f = SubgroupFinder::new(&g, full.clone(), 1);
        let (h, k) = (f.find(6).unwrap(), f.find(7).unwrap());
        let limits = SearchLimits {
            max_candidates: 0,
            ..SearchLimits::default()
        };
        let p = build_problem(&g, &full, &h, &k, 2, 6, limits).unwrap();
        assert_eq!(search(&p, 1).outcome, SearchOutcome::BudgetExceeded);
    }

    #[test]
    fn parallel_finds_a_valid_split() {
        let g = l2_8();
        let full = SubgroupHandle::full(&g);
        let mut f = SubgroupFinder::new(&g, full.clone(), 1);
        let (h, k) = (f.find(7).unwrap(), f.find(8).unwrap());
        let p = build_problem(&g, &full, &h, &k, 3, 3, SearchLimits::default()).unwrap();
        let r = search(&p, 4);
        let SearchOutcome::Found { a0, b0 } = &r.outcome else {
            panic!()
        };
        assert!(assemble(&p, a0, b0, p.record(&r, 0, 4)).is_ok());
    }
}
