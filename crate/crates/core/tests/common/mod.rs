#![allow(dead_code)]

use std::collections::HashSet;

use cosetfactor::atlas::{small, GroupSpec};
use cosetfactor::permgroup::{GroupTable, Perm};

/// Checks a factorization by composing the actual permutations, without the
/// multiplication table.
pub fn perm_products_cover(table: &GroupTable, a: &[u32], b: &[u32], n: usize) -> bool {
    if a.len() * b.len() != n {
        return false;
    }
    let bs: Vec<Perm> = b.iter().map(|&y| table.perm(y)).collect();
    let mut seen = HashSet::with_capacity(n);
    for &x in a {
        let p = table.perm(x);
        for q in &bs {
            if !seen.insert(p.compose(q).unwrap().images().to_vec()) {
                return false;
            }
        }
    }
    true
}

pub fn small_group(gens: Vec<String>, degree: usize) -> GroupTable {
    GroupTable::close(&small::parse_all(&gens, degree)).unwrap()
}

pub fn s4() -> GroupTable {
    small_group(small::symmetric_generators(4), 4)
}

pub fn d8_x_c3() -> GroupTable {
    small_group(small::d8_x_c3_generators(), 7)
}

pub fn spec_table(spec: &GroupSpec) -> GroupTable {
    spec.table().unwrap()
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
