mod common;

use std::collections::HashSet;

use common::{gcd, perm_products_cover};
use cosetfactor::atlas::Catalog;
use cosetfactor::dcsearch::{assemble, build_problem, search, SearchLimits, SearchOutcome};
use cosetfactor::permgroup::{DoubleCosetPartition, GroupTable, Perm, SubgroupHandle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_subgroup(g: &GroupTable, rng: &mut ChaCha8Rng) -> SubgroupHandle {
    let n = g.order();
    let x = rng.gen_range(0..n as u32);
    let gens = if rng.gen_bool(0.3) {
        vec![x, rng.gen_range(0..n as u32)]
    } else {
        vec![x]
    };
    match SubgroupHandle::closure(g, &gens, n / 2).unwrap().subgroup() {
        Some(s) => s,
        None => SubgroupHandle::closure(g, &[x], n)
            .unwrap()
            .subgroup()
            .unwrap(),
    }
}

// The set H·x·K built from permutations.
fn double_coset(
    g: &GroupTable,
    h: &SubgroupHandle,
    x: u32,
    k: &SubgroupHandle,
) -> HashSet<Vec<u16>> {
    let xp = g.perm(x);
    let ks: Vec<Perm> = k.members().iter().map(|&y| g.perm(y)).collect();
    let mut out = HashSet::new();
    for &hh in h.members() {
        let hx = g.perm(hh).compose(&xp).unwrap();
        for kp in &ks {
            out.insert(hx.compose(kp).unwrap().images().to_vec());
        }
    }
    out
}

#[test]
fn size_law_on_random_coprime_pairs() {
    let cat = Catalog::builtin();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let names = ["A5", "L2_7", "A6", "L2_8", "L2_11", "L2_13"];
    let mut checked = 0;
    for round in 0..60 {
        let g = cat
            .get(names[round % names.len()])
            .unwrap()
            .table()
            .unwrap();
        let full = SubgroupHandle::full(&g);
        let (h, k) = loop {
            let h = random_subgroup(&g, &mut rng);
            let k = random_subgroup(&g, &mut rng);
            if gcd(h.order(), k.order()) == 1 && h.order() * k.order() > 1 {
                break (h, k);
            }
        };
        let part = DoubleCosetPartition::new(&g, &full, &h, &k);
        let hk = h.order() * k.order();
        assert_eq!(part.count() * hk, g.order());
        let mut union = HashSet::new();
        for (id, &x) in part.reps().iter().enumerate() {
            let dc = double_coset(&g, &h, x, &k);
            assert_eq!(dc.len(), hk, "|H||K| = {hk}");
            assert_eq!(part.sizes()[id], hk);
            for y in &dc {
                let idx = g.index_of(&Perm::from_images(y.clone()).unwrap()).unwrap();
                assert_eq!(part.id(idx), id as u32);
            }
            union.extend(dc);
        }
        assert_eq!(union.len(), g.order());
        checked += 1;
    }
    assert!(checked >= 50);
}

fn subsets(items: &[u32], size: usize) -> Vec<Vec<u32>> {
    fn go(items: &[u32], size: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, size, 0, &mut Vec::new(), &mut out);
    out
}

// Any A0 ⊆ S, B0 ⊆ Q whose products hit t distinct double cosets.
fn brute_force_exists(
    g: &GroupTable,
    part: &DoubleCosetPartition,
    s: &[u32],
    q: &[u32],
    a0: usize,
    b0: usize,
) -> bool {
    let bs = subsets(q, b0);
    subsets(s, a0).iter().any(|aa| {
        bs.iter().any(|bb| {
            let mut seen = HashSet::new();
            aa.iter()
                .all(|&y| bb.iter().all(|&z| seen.insert(part.id(g.mul(y, z)))))
        })
    })
}

fn cyclic_of_order(g: &GroupTable, m: usize) -> SubgroupHandle {
    let x = (0..g.order() as u32)
        .find(|&x| g.element_order(x) == m)
        .unwrap();
    SubgroupHandle::closure(g, &[x], m)
        .unwrap()
        .subgroup()
        .unwrap()
}

#[test]
fn tiny_searches_match_brute_force() {
    let cat = Catalog::builtin();
    let a5 = cat.get("A5").unwrap().table().unwrap();
    let v4 = {
        let full = SubgroupHandle::full(&a5);
        let x = (0..60u32).find(|&x| a5.element_order(x) == 2).unwrap();
        (0..60u32)
            .filter(|&y| a5.element_order(y) == 2 && y != x)
            .filter_map(|y| SubgroupHandle::closure(&a5, &[x, y], 4).unwrap().subgroup())
            .find(|s| s.order() == 4 && s.is_subgroup_of(&a5, &full))
            .unwrap()
    };
    let cases: Vec<(&GroupTable, SubgroupHandle, SubgroupHandle)> = vec![
        (&a5, cyclic_of_order(&a5, 5), cyclic_of_order(&a5, 2)),
        (&a5, cyclic_of_order(&a5, 3), v4.clone()),
        (&a5, cyclic_of_order(&a5, 5), v4),
        (&a5, cyclic_of_order(&a5, 5), cyclic_of_order(&a5, 3)),
        (&a5, cyclic_of_order(&a5, 3), cyclic_of_order(&a5, 5)),
    ];
    let mut compared = 0;
    for (g, h, k) in cases {
        let full = SubgroupHandle::full(g);
        let t = g.order() / (h.order() * k.order());
        assert!(t <= 6);
        for a0 in (1..=t).filter(|d| t % d == 0) {
            let b0 = t / a0;
            let p = build_problem(g, &full, &h, &k, a0, b0, SearchLimits::default()).unwrap();
            assert!(p.s().len() <= 30 && p.q().len() <= 30);
            let oracle = brute_force_exists(g, p.partition(), p.s(), p.q(), a0, b0);
            let report = search(&p, 1);
            match report.outcome {
                SearchOutcome::Found { a0: aa, b0: bb } => {
                    assert!(oracle);
                    assert_eq!((aa.len(), bb.len()), (a0, b0));
                    assert!(aa.contains(&0) && bb.contains(&0));
                    let part = p.partition();
                    let ids: HashSet<u32> = aa
                        .iter()
                        .flat_map(|&y| bb.iter().map(move |&z| part.id(g.mul(y, z))))
                        .collect();
                    assert_eq!(ids.len(), t);
                    let f = assemble(&p, &aa, &bb, p.record(&report_stub(), 0, 1)).unwrap();
                    assert!(perm_products_cover(g, &f.a, &f.b, g.order()));
                }
                SearchOutcome::Exhausted => {
                    assert!(!oracle, "h={} k={} a0={a0}", h.order(), k.order())
                }
                SearchOutcome::BudgetExceeded => panic!("budget on a tiny problem"),
            }
            compared += 1;
        }
    }
    assert!(compared >= 8);
}

fn report_stub() -> cosetfactor::dcsearch::SearchReport {
    cosetfactor::dcsearch::SearchReport {
        outcome: SearchOutcome::Exhausted,
        candidates: 0,
        nodes: 0,
        elapsed: std::time::Duration::ZERO,
    }
}

#[test]
fn l2_8_worked_example() {
    let cat = Catalog::builtin();
    let g = cat.get("L2_8").unwrap().table().unwrap();
    let full = SubgroupHandle::full(&g);
    let h = cyclic_of_order(&g, 7);
    // a Sylow 2-subgroup: elementary abelian of order 8
    let inv: Vec<u32> = (0..504u32).filter(|&x| g.element_order(x) == 2).collect();
    let k = inv
        .iter()
        .flat_map(|&x| inv.iter().map(move |&y| (x, y)))
        .filter_map(|(x, y)| {
            let z = *inv.iter().find(|&&z| z != x && z != y)?;
            SubgroupHandle::closure(&g, &[x, y, z], 8)
                .unwrap()
                .subgroup()
        })
        .find(|s| s.order() == 8)
        .unwrap();
    let p = build_problem(&g, &full, &h, &k, 3, 3, SearchLimits::default()).unwrap();
    // |S| = 72 and |Q| = 63 as in the worked example; t from 504 / 56
    assert_eq!((p.t(), p.s().len(), p.q().len()), (9, 72, 63));
    let report = search(&p, 1);
    let SearchOutcome::Found { a0, b0 } = report.outcome.clone() else {
        panic!("no solution: {report:?}");
    };
    let f = assemble(&p, &a0, &b0, p.record(&report, 0, 1)).unwrap();
    assert_eq!(f.sizes(), (21, 24));
    assert!(perm_products_cover(&g, &f.a, &f.b, 504));
}
