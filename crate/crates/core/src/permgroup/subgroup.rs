use super::{GroupTable, PermError};

/// A subgroup of an enumerated table, stored as sorted element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupHandle {
    members: Vec<u32>,
    generators: Vec<u32>,
    mask: Vec<u64>,
}

/// Result of a capped subgroup closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Closure {
    Subgroup(SubgroupHandle),
    /// The closure grew past the caller's bound.
    TooLarge,
}

impl Closure {
    pub fn subgroup(self) -> Option<SubgroupHandle> {
        match self {
            Closure::Subgroup(s) => Some(s),
            Closure::TooLarge => None,
        }
    }
}

impl SubgroupHandle {
    pub fn trivial(parent: &GroupTable) -> Self {
        Self::from_sorted(parent.order(), vec![0], Vec::new())
    }

    /// The whole group as a subgroup of itself.
    pub fn full(parent: &GroupTable) -> Self {
        Self::from_sorted(
            parent.order(),
            (0..parent.order() as u32).collect(),
            parent.generators().to_vec(),
        )
    }

    fn from_sorted(n: usize, members: Vec<u32>, generators: Vec<u32>) -> Self {
        let mut mask = vec![0u64; n.div_ceil(64)];
        for &m in &members {
            mask[m as usize / 64] |= 1 << (m % 64);
        }
        SubgroupHandle {
            members,
            generators,
            mask,
        }
    }

    /// Closure of `generators` inside `parent`, abandoned once it exceeds `cap`.
    pub fn closure(
        parent: &GroupTable,
        generators: &[u32],
        cap: usize,
    ) -> Result<Closure, PermError> {
        Self::extend(parent, &[0], generators, cap)
    }

    /// Closure of `generators`, starting the search from the known members
    /// `seed` (which must lie in the closure and contain the identity).
    pub fn extend(
        parent: &GroupTable,
        seed: &[u32],
        generators: &[u32],
        cap: usize,
    ) -> Result<Closure, PermError> {
        let n = parent.order();
        if let Some(&bad) = generators.iter().find(|&&g| g as usize >= n) {
            return Err(PermError::IndexOutOfRange(bad as usize));
        }
        let mut in_set = vec![false; n];
        let mut members = Vec::with_capacity(seed.len().max(16));
        for &s in seed {
            in_set[s as usize] = true;
            members.push(s);
        }
        let mut head = 0;
        while head < members.len() {
            let x = members[head];
            for &g in generators {
                let y = parent.mul(x, g);
                if !in_set[y as usize] {
                    if members.len() == cap {
                        return Ok(Closure::TooLarge);
                    }
                    in_set[y as usize] = true;
                    members.push(y);
                }
            }
            head += 1;
        }
        members.sort_unstable();
        Ok(Closure::Subgroup(Self::from_sorted(
            n,
            members,
            generators.to_vec(),
        )))
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    #[inline]
    pub fn contains(&self, idx: u32) -> bool {
        self.mask
            .get(idx as usize / 64)
            .is_some_and(|w| w & (1 << (idx % 64)) != 0)
    }

    /// Checks closure under multiplication and inversion and Lagrange.
    pub fn is_subgroup_of(&self, parent: &GroupTable, ambient: &SubgroupHandle) -> bool {
        if !self.contains(0) || !ambient.order().is_multiple_of(self.order()) {
            return false;
        }
        if !self.members.iter().all(|&m| ambient.contains(m)) {
            return false;
        }
        let gens: &[u32] = if self.generators.is_empty() {
            &self.members
        } else {
            &self.generators
        };
        self.members.iter().all(|&x| {
            self.contains(parent.inv(x)) && gens.iter().all(|&g| self.contains(parent.mul(x, g)))
        })
    }

    /// Whether `self` is normalized by every generator of `ambient`.
    pub fn is_normal_in(&self, parent: &GroupTable, ambient: &SubgroupHandle) -> bool {
        let gens: &[u32] = if ambient.generators.is_empty() {
            &ambient.members
        } else {
            &ambient.generators
        };
        let own: &[u32] = if self.generators.is_empty() {
            &self.members
        } else {
            &self.generators
        };
        gens.iter().all(|&g| {
            let gi = parent.inv(g);
            own.iter()
                .all(|&x| self.contains(parent.mul(parent.mul(gi, x), g)))
        })
    }
}
