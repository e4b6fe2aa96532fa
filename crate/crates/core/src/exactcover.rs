//! Exact cover by Algorithm X over dancing links.
//!
//! Columns are chosen by fewest remaining rows, ties broken by lowest column
//! index; rows within a column are tried in instance order. Given the same
//! instance the solver always visits the same nodes in the same order.

use std::fmt;

use thiserror::Error;

/// Default node-expansion budget for [`solve_first`].
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactCoverError {
    #[error("row {row}: column {column} out of range (num_columns = {num_columns})")]
    ColumnOutOfRange {
        row: u32,
        column: usize,
        num_columns: usize,
    },
    #[error("row {row}: column {column} listed twice")]
    DuplicateColumn { row: u32, column: usize },
    #[error("duplicate row id {0}")]
    DuplicateRow(u32),
    #[error("required row {0} does not exist")]
    UnknownRequiredRow(u32),
    #[error("required rows {0} and {1} overlap")]
    RequiredRowsOverlap(u32, u32),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCoverInstance {
    num_columns: usize,
    rows: Vec<(u32, Vec<usize>)>,
    required: Vec<u32>,
}

impl ExactCoverInstance {
    /// Validates and builds an instance; row column sets are sorted.
    pub fn new(
        num_columns: usize,
        rows: Vec<(u32, Vec<usize>)>,
        required: Vec<u32>,
    ) -> Result<Self, ExactCoverError> {
        let mut rows = rows;
        let mut ids = rustc_hash::FxHashMap::default();
        for (pos, (id, cols)) in rows.iter_mut().enumerate() {
            cols.sort_unstable();
            if let Some(&column) = cols.iter().find(|&&c| c >= num_columns) {
                return Err(ExactCoverError::ColumnOutOfRange {
                    row: *id,
                    column,
                    num_columns,
                });
            }
            if let Some(w) = cols.windows(2).find(|w| w[0] == w[1]) {
                return Err(ExactCoverError::DuplicateColumn {
                    row: *id,
                    column: w[0],
                });
            }
            if ids.insert(*id, pos).is_some() {
                return Err(ExactCoverError::DuplicateRow(*id));
            }
        }
        let mut owner = vec![None::<u32>; num_columns];
        for &r in &required {
            let pos = *ids.get(&r).ok_or(ExactCoverError::UnknownRequiredRow(r))?;
            for &c in &rows[pos].1 {
                if let Some(other) = owner[c] {
                    return Err(ExactCoverError::RequiredRowsOverlap(other, r));
                }
                owner[c] = Some(r);
            }
        }
        Ok(ExactCoverInstance {
            num_columns,
            rows,
            required,
        })
    }

    /// Plain-text instance: first line the column count, then one row per
    /// line as `row_id col col …`. Blank lines and `#` comments are skipped.
    pub fn parse_text(text: &str) -> Result<Self, ExactCoverError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_err = |line, message: String| ExactCoverError::Parse { line, message };
        let (first, head) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing column count".into()))?;
        let num_columns: usize = head
            .parse()
            .map_err(|_| parse_err(first, format!("bad column count {head:?}")))?;
        let mut rows = Vec::new();
        for (line, text) in lines {
            let mut toks = text.split_whitespace();
            let id_tok = toks.next().unwrap();
            let id: u32 = id_tok
                .parse()
                .map_err(|_| parse_err(line, format!("bad row id {id_tok:?}")))?;
            let cols = toks
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| parse_err(line, format!("bad column {t:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push((id, cols));
        }
        Self::new(num_columns, rows, Vec::new())
    }

    pub fn num_columns(&self) -> usize {
        self.num_columns
    }

    pub fn rows(&self) -> &[(u32, Vec<usize>)] {
        &self.rows
    }

    pub fn required_rows(&self) -> &[u32] {
        &self.required
    }
}

/// A set of row ids whose column sets partition the columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSolution {
    pub row_ids: Vec<u32>,
}

impl fmt::Display for CoverSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.row_ids.iter().map(|r| r.to_string()).collect();
        f.write_str(&ids.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Found(CoverSolution),
    None,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub outcome: SolveOutcome,
    /// Rows tried during the search.
    pub nodes: u64,
}

/// First exact cover containing every required row, or `None`, or
/// `BudgetExhausted` after `budget` node expansions.
pub fn solve_first(inst: &ExactCoverInstance, budget: u64) -> SolveReport {
    let mut dl = Links::new(inst);
    let mut search = Search {
        budget,
        nodes: 0,
        cap: 1,
        found: 0,
        first: None,
        stack: Vec::new(),
    };
    dl.preselect(inst);
    let stopped = search.run(&mut dl).is_err();
    let outcome = if let Some(rows) = search.first {
        let mut ids: Vec<u32> = inst.required.clone();
        ids.extend(rows.iter().map(|&r| inst.rows[r].0));
        ids.sort_unstable();
        SolveOutcome::Found(CoverSolution { row_ids: ids })
    } else if stopped {
        SolveOutcome::BudgetExhausted
    } else {
        SolveOutcome::None
    };
    SolveReport {
        outcome,
        nodes: search.nodes,
    }
}

/// Number of distinct exact covers (containing the required rows),
/// saturating at `cap`.
pub fn count_solutions(inst: &ExactCoverInstance, cap: u64) -> u64 {
    if cap == 0 {
        return 0;
    }
    let mut dl = Links::new(inst);
    dl.preselect(inst);
    let mut search = Search {
        budget: u64::MAX,
        nodes: 0,
        cap,
        found: 0,
        first: None,
        stack: Vec::new(),
    };
    let _ = search.run(&mut dl);
    search.found
}

const ROOT: usize = 0;

/// Toroidal doubly linked lists. Node 0 is the root, nodes `1..=C` are
/// column headers, the rest are row cells.
struct Links {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    row: Vec<usize>,
    size: Vec<usize>,
    row_start: Vec<usize>,
}

impl Links {
    fn new(inst: &ExactCoverInstance) -> Self {
        let nc = inst.num_columns;
        let cells: usize = inst.rows.iter().map(|(_, c)| c.len()).sum();
        let total = 1 + nc + cells;
        let mut l = Links {
            left: Vec::with_capacity(total),
            right: Vec::with_capacity(total),
            up: Vec::with_capacity(total),
            down: Vec::with_capacity(total),
            col: Vec::with_capacity(total),
            row: Vec::with_capacity(total),
            size: vec![0; nc + 1],
            row_start: Vec::with_capacity(inst.rows.len()),
        };
        for i in 0..=nc {
            l.left.push(if i == 0 { nc } else { i - 1 });
            l.right.push(if i == nc { 0 } else { i + 1 });
            l.up.push(i);
            l.down.push(i);
            l.col.push(i);
            l.row.push(usize::MAX);
        }
        for (r, (_, cols)) in inst.rows.iter().enumerate() {
            let first = l.col.len();
            l.row_start.push(first);
            for (j, &c) in cols.iter().enumerate() {
                let node = first + j;
                let header = c + 1;
                l.col.push(header);
                l.row.push(r);
                l.left.push(if j == 0 {
                    first + cols.len() - 1
                } else {
                    node - 1
                });
                l.right
                    .push(if j + 1 == cols.len() { first } else { node + 1 });
                let last = l.up[header];
                l.up.push(last);
                l.down.push(header);
                l.down[last] = node;
                l.up[header] = node;
                l.size[header] += 1;
            }
        }
        l
    }

    fn cover(&mut self, c: usize) {
        let (lc, rc) = (self.left[c], self.right[c]);
        self.right[lc] = rc;
        self.left[rc] = lc;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (lc, rc) = (self.left[c], self.right[c]);
        self.right[lc] = c;
        self.left[rc] = c;
    }

    /// Removes the columns of the required rows before the search starts.
    fn preselect(&mut self, inst: &ExactCoverInstance) {
        let positions: std::collections::HashMap<u32, usize> = inst
            .rows
            .iter()
            .enumerate()
            .map(|(pos, (id, _))| (*id, pos))
            .collect();
        for id in &inst.required {
            let r = positions[id];
            for &c in &inst.rows[r].1 {
                // rows were validated disjoint, so each column is still present
                self.cover(c + 1);
            }
        }
    }

    fn choose_column(&self) -> Option<usize> {
        let mut best = None;
        let mut best_size = usize::MAX;
        let mut c = self.right[ROOT];
        while c != ROOT {
            if self.size[c] < best_size {
                best_size = self.size[c];
                best = Some(c);
                if best_size == 0 {
                    break;
                }
            }
            c = self.right[c];
        }
        best
    }
}

struct Search {
    budget: u64,
    nodes: u64,
    cap: u64,
    found: u64,
    first: Option<Vec<usize>>,
    stack: Vec<usize>,
}

struct Stop;

impl Search {
    fn run(&mut self, dl: &mut Links) -> Result<(), Stop> {
        let Some(c) = dl.choose_column() else {
            self.found += 1;
            if self.first.is_none() {
                self.first = Some(self.stack.clone());
            }
            return if self.found >= self.cap {
                Err(Stop)
            } else {
                Ok(())
            };
        };
        if dl.size[c] == 0 {
            return Ok(());
        }
        dl.cover(c);
        let mut r = dl.down[c];
        let mut result = Ok(());
        while r != c {
            if self.nodes >= self.budget {
                result = Err(Stop);
                break;
            }
            self.nodes += 1;
            self.stack.push(dl.row[r]);
            let mut j = dl.right[r];
            while j != r {
                dl.cover(dl.col[j]);
                j = dl.right[j];
            }
            result = self.run(dl);
            let mut j = dl.left[r];
            while j != r {
                dl.uncover(dl.col[j]);
                j = dl.left[j];
            }
            self.stack.pop();
            if result.is_err() {
                break;
            }
            r = dl.down[r];
        }
        dl.uncover(c);
        result
    }
}
