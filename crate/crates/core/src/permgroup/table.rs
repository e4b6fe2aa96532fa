use rustc_hash::{FxHashMap, FxHashSet};

use super::{Perm, PermError};

/// Closure cap used by [`GroupTable::close`].
pub const DEFAULT_ELEMENT_CAP: usize = 200_000;

// Dense lookup is used when degree^|base| stays below this many slots.
const DENSE_LOOKUP_LIMIT: u64 = 1 << 22;

/// A fully enumerated permutation group.
///
/// Elements are addressed by dense `u32` indices in breadth-first discovery
/// order; index 0 is always the identity. Products are computed on demand
/// from a base: the images of a handful of points already determine an
/// element, so `mul` touches `|base|` entries instead of the whole degree.
pub struct GroupTable {
    degree: usize,
    n: usize,
    points: Vec<u16>,
    inverse: Vec<u32>,
    generators: Vec<u32>,
    base: Vec<usize>,
    lookup: Lookup,
}

enum Lookup {
    Dense(Vec<u32>),
    Hashed(FxHashMap<u64, u32>),
}

impl GroupTable {
    /// Breadth-first closure of `generators` with the default element cap.
    pub fn close(generators: &[Perm]) -> Result<Self, PermError> {
        Self::close_with_cap(generators, DEFAULT_ELEMENT_CAP)
    }

    pub fn close_with_cap(generators: &[Perm], cap: usize) -> Result<Self, PermError> {
        let first = generators.first().ok_or(PermError::NoGenerators)?;
        let degree = first.degree();
        if let Some(bad) = generators.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch(degree, bad.degree()));
        }

        let mut points: Vec<u16> = (0..degree as u16).collect();
        let mut seen: FxHashMap<Vec<u16>, u32> = FxHashMap::default();
        seen.insert(points.clone(), 0);
        let mut head = 0usize;
        let mut n = 1usize;
        let mut buf = vec![0u16; degree];
        while head < n {
            for g in generators {
                {
                    let x = &points[head * degree..(head + 1) * degree];
                    for (slot, &im) in buf.iter_mut().zip(x) {
                        *slot = g.images()[im as usize];
                    }
                }
                if !seen.contains_key(&buf) {
                    if n == cap {
                        return Err(PermError::ClosureTooLarge(cap));
                    }
                    seen.insert(buf.clone(), n as u32);
                    points.extend_from_slice(&buf);
                    n += 1;
                }
            }
            head += 1;
        }
        let generators = generators
            .iter()
            .map(|g| seen[g.images()])
            .collect::<Vec<_>>();
        drop(seen);

        let base = choose_base(&points, degree, n);
        let lookup = build_lookup(&points, degree, n, &base);
        let mut table = GroupTable {
            degree,
            n,
            points,
            inverse: Vec::new(),
            generators,
            base,
            lookup,
        };
        table.inverse = (0..n)
            .map(|i| {
                let inv = table.perm(i as u32).inverse();
                table.index_of(&inv).expect("group closed under inversion")
            })
            .collect();
        Ok(table)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Indices of the generators the table was closed from.
    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    #[inline]
    pub fn images(&self, idx: u32) -> &[u16] {
        let i = idx as usize * self.degree;
        &self.points[i..i + self.degree]
    }

    pub fn perm(&self, idx: u32) -> Perm {
        Perm::from_images_unchecked(self.images(idx).to_vec())
    }

    /// Element index of `p`, or `None` if `p` is not in the group.
    pub fn index_of(&self, p: &Perm) -> Option<u32> {
        if p.degree() != self.degree {
            return None;
        }
        let idx = self.find_key(self.key_of(|pt| p.apply(pt)))?;
        (self.images(idx) == p.images()).then_some(idx)
    }

    /// Index of the product `i·j` (apply `i` first).
    #[inline]
    pub fn mul(&self, i: u32, j: u32) -> u32 {
        let x = self.images(i);
        let y = self.images(j);
        let key = self.key_of(|pt| y[x[pt] as usize] as usize);
        self.find_key(key).expect("product of group elements")
    }

    #[inline]
    pub fn inv(&self, i: u32) -> u32 {
        self.inverse[i as usize]
    }

    /// Least `m >= 1` with `g^m` the identity.
    pub fn element_order(&self, idx: u32) -> usize {
        let mut cur = idx;
        let mut m = 1;
        while cur != 0 {
            cur = self.mul(cur, idx);
            m += 1;
        }
        m
    }

    /// Index of `g^e`.
    pub fn pow(&self, idx: u32, e: usize) -> u32 {
        let mut acc = 0;
        let mut base = idx;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    fn key_of(&self, image: impl Fn(usize) -> usize) -> u64 {
        let d = self.degree as u64;
        self.base
            .iter()
            .fold(0u64, |acc, &b| acc * d + image(b) as u64)
    }

    #[inline]
    fn find_key(&self, key: u64) -> Option<u32> {
        match &self.lookup {
            Lookup::Dense(slots) => match slots.get(key as usize) {
                Some(&u32::MAX) | None => None,
                Some(&idx) => Some(idx),
            },
            Lookup::Hashed(map) => map.get(&key).copied(),
        }
    }
}

/// Greedy base: repeatedly add the point whose images split the elements
/// into the most classes, until the base images identify every element.
fn choose_base(points: &[u16], degree: usize, n: usize) -> Vec<usize> {
    let mut base = Vec::new();
    let mut keys = vec![0u64; n];
    let mut classes = 1usize;
    let mut distinct: FxHashSet<u64> = FxHashSet::default();
    while classes < n {
        let mut best = (0usize, 0usize);
        for pt in 0..degree {
            if base.contains(&pt) {
                continue;
            }
            distinct.clear();
            for (e, &k) in keys.iter().enumerate() {
                distinct.insert(k * degree as u64 + points[e * degree + pt] as u64);
            }
            if distinct.len() > best.1 {
                best = (pt, distinct.len());
            }
        }
        base.push(best.0);
        for (e, k) in keys.iter_mut().enumerate() {
            *k = *k * degree as u64 + points[e * degree + best.0] as u64;
        }
        classes = best.1;
    }
    if base.is_empty() {
        // trivial group: any single point keys the identity
        base.push(0);
    }
    base
}

fn build_lookup(points: &[u16], degree: usize, n: usize, base: &[usize]) -> Lookup {
    let key = |e: usize| {
        base.iter().fold(0u64, |acc, &b| {
            acc * degree as u64 + points[e * degree + b] as u64
        })
    };
    let span = (degree as u64).checked_pow(base.len() as u32);
    match span {
        Some(span) if span <= DENSE_LOOKUP_LIMIT => {
            let mut slots = vec![u32::MAX; span as usize];
            for e in 0..n {
                slots[key(e) as usize] = e as u32;
            }
            Lookup::Dense(slots)
        }
        _ => Lookup::Hashed((0..n).map(|e| (key(e), e as u32)).collect()),
    }
}
