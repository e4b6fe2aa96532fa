use cosetfactor::atlas::{
    psl2_permutation_generators, psl3_permutation_generators, small, Catalog, GroupSpec,
};
use cosetfactor::factorlib::{analyze, SubgroupFinder};
use cosetfactor::permgroup::{GroupTable, SubgroupHandle};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

// Orders from the classical formulas, independent of any enumeration.
fn formula_order(name: &str) -> u64 {
    let psl2 = |q: u64| q * (q * q - 1) / gcd(2, q - 1);
    match name {
        "A5" => factorial(5) / 2,
        "A6" => factorial(6) / 2,
        "L3_3" => {
            let q = 3u64;
            q.pow(3) * (q.pow(3) - 1) * (q * q - 1) / gcd(3, q - 1)
        }
        "U3_3" => {
            let q = 3u64;
            q.pow(3) * (q.pow(3) + 1) * (q * q - 1) / gcd(3, q + 1)
        }
        "M11" => 7920,
        "M12" => 95040,
        l2 => psl2(l2.strip_prefix("L2_").unwrap().parse().unwrap()),
    }
}

// n-column of the table, plus the order of M12.
const PUBLISHED_ORDERS: [(&str, usize); 16] = [
    ("A5", 60),
    ("L2_7", 168),
    ("A6", 360),
    ("L2_8", 504),
    ("L2_11", 660),
    ("L2_13", 1092),
    ("L2_17", 2448),
    ("L2_19", 3420),
    ("L2_16", 4080),
    ("L3_3", 5616),
    ("U3_3", 6048),
    ("L2_23", 6072),
    ("L2_25", 7800),
    ("M11", 7920),
    ("L2_27", 9828),
    ("M12", 95040),
];

#[test]
fn every_group_enumerates_to_its_order() {
    let cat = Catalog::builtin();
    assert_eq!(cat.groups().len(), PUBLISHED_ORDERS.len());
    for (name, n) in PUBLISHED_ORDERS {
        let spec = cat.get(name).unwrap_or_else(|| panic!("{name} missing"));
        assert_eq!(spec.claimed_order, n, "{name}");
        assert_eq!(formula_order(name), n as u64, "{name}");
        let g = spec.selfcheck().unwrap();
        assert_eq!(g.order(), n, "{name}");
    }
}

fn same_group(spec: &GroupSpec, gens: &[cosetfactor::permgroup::Perm]) {
    let g = spec.table().unwrap();
    let other = GroupTable::close(gens).unwrap();
    assert_eq!(other.order(), g.order(), "{}", spec.name);
    for p in gens {
        assert!(
            g.index_of(p).is_some(),
            "{}: {p} not in catalog group",
            spec.name
        );
    }
}

#[test]
fn generators_match_the_constructors() {
    let cat = Catalog::builtin();
    for spec in cat.groups() {
        if let Some(q) = spec.name.strip_prefix("L2_") {
            same_group(
                spec,
                &psl2_permutation_generators(q.parse().unwrap()).unwrap(),
            );
        }
    }
    same_group(
        cat.get("L3_3").unwrap(),
        &psl3_permutation_generators(3).unwrap(),
    );
    for (name, n) in [("A5", 5), ("A6", 6)] {
        same_group(
            cat.get(name).unwrap(),
            &small::parse_all(&small::alternating_generators(n), n),
        );
    }
}

#[test]
fn permutation_degrees() {
    let cat = Catalog::builtin();
    for spec in cat.groups() {
        let expected = match spec.name.as_str() {
            "A5" => 5,
            "A6" => 6,
            "L3_3" => 13,
            "U3_3" => 28,
            "M11" => 11,
            "M12" => 12,
            l2 => l2.strip_prefix("L2_").unwrap().parse::<usize>().unwrap() + 1,
        };
        assert_eq!(spec.degree, expected, "{}", spec.name);
    }
}

#[test]
fn known_subgroup_orders_are_realized() {
    let cat = Catalog::builtin();
    for name in ["A5", "L2_7", "A6", "L2_8", "L2_11", "L2_13", "U3_3"] {
        let spec = cat.get(name).unwrap();
        let g = spec.table().unwrap();
        let full = SubgroupHandle::full(&g);
        let mut f = SubgroupFinder::new(&g, full.clone(), 3);
        for &m in &spec.known_subgroup_orders {
            let h = f
                .find(m)
                .unwrap_or_else(|| panic!("{name}: no subgroup of order {m}"));
            assert_eq!(h.order(), m);
            assert!(h.is_subgroup_of(&g, &full));
        }
    }
}

fn normalizer_order(g: &GroupTable, p: &SubgroupHandle) -> usize {
    (0..g.order() as u32)
        .filter(|&x| {
            let xi = g.inv(x);
            p.generators()
                .iter()
                .all(|&y| p.contains(g.mul(g.mul(xi, y), x)))
        })
        .count()
}

fn sylow(g: &GroupTable, prime: usize) -> SubgroupHandle {
    let x = (0..g.order() as u32)
        .find(|&x| g.element_order(x) == prime)
        .unwrap();
    SubgroupHandle::closure(g, &[x], prime)
        .unwrap()
        .subgroup()
        .unwrap()
}

#[test]
fn l2_8_has_no_subgroup_of_order_21() {
    // A group of order 21 has a normal Sylow 7-subgroup, so it lies in a
    // Sylow 7-normalizer.
    let g = Catalog::builtin().get("L2_8").unwrap().table().unwrap();
    let n7 = normalizer_order(&g, &sylow(&g, 7));
    assert_eq!(n7, 14);
    assert_ne!(n7 % 21, 0);
}

#[test]
fn l2_23_thirty_three_needs_the_search() {
    // Order 33 forces a cyclic group, and no element has order 33. A group of
    // order 184 = 8·23 has a normal Sylow 23-subgroup, so it lies in a
    // normalizer of order 253.
    let cat = Catalog::builtin();
    let spec = cat.get("L2_23").unwrap();
    let g = spec.table().unwrap();
    assert!((0..g.order() as u32).all(|x| g.element_order(x) != 33));
    let n23 = normalizer_order(&g, &sylow(&g, 23));
    assert_eq!(n23, 253);
    assert_ne!(n23 % 184, 0);
    assert!(analyze(spec).needs_search().contains(&33));
}

#[test]
fn catalog_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("cosetfactor-cat-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.toml");
    std::fs::write(&path, cosetfactor::atlas::BUILTIN_CATALOG).unwrap();
    let loaded = Catalog::load(&path).unwrap();
    assert_eq!(loaded.names(), Catalog::builtin().names());
    std::fs::remove_dir_all(&dir).unwrap();
}
