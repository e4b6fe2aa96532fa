//! Cycle-notation constructors for symmetric, alternating and a few small
//! solvable test groups.

use crate::permgroup::Perm;

fn cycle(points: impl Iterator<Item = usize>) -> String {
    let body: Vec<String> = points.map(|p| p.to_string()).collect();
    format!("({})", body.join(","))
}

/// `(1,…,n)` and `(1,2)`.
pub fn symmetric_generators(n: usize) -> Vec<String> {
    vec![cycle(1..=n), "(1,2)".to_string()]
}

/// An `n`-cycle (odd `n`) or `(n-1)`-cycle on `2..=n` (even `n`), plus `(1,2,3)`.
pub fn alternating_generators(n: usize) -> Vec<String> {
    assert!(n >= 3);
    let long = if n % 2 == 1 {
        cycle(1..=n)
    } else {
        cycle(2..=n)
    };
    vec![long, "(1,2,3)".to_string()]
}

/// D8 (order 8) on points 1..4 times C3 on points 5..7, degree 7.
pub fn d8_x_c3_generators() -> Vec<String> {
    vec!["(1,2,3,4)".into(), "(1,3)".into(), "(5,6,7)".into()]
}

/// Cyclic group of order `n` acting regularly.
pub fn cyclic_generators(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["()".into()]
    } else {
        vec![cycle(1..=n)]
    }
}

pub fn parse_all(gens: &[String], degree: usize) -> Vec<Perm> {
    gens.iter()
        .map(|g| Perm::parse_cycles(g, degree).expect("constructor emits valid cycles"))
        .collect()
}
