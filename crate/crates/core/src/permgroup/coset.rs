use super::{GroupTable, SubgroupHandle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Cosets `H·r`.
    Right,
    /// Cosets `r·K`.
    Left,
}

/// One representative per coset of `subgroup` inside an ambient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversal {
    pub side: Side,
    pub reps: Vec<u32>,
}

impl Transversal {
    /// Greedy scan of `ambient` in table order, keeping the lowest index of
    /// each coset. The identity is always the first representative.
    pub fn new(
        parent: &GroupTable,
        ambient: &SubgroupHandle,
        subgroup: &SubgroupHandle,
        side: Side,
    ) -> Self {
        let mut covered = vec![false; parent.order()];
        let mut reps = Vec::with_capacity(ambient.order() / subgroup.order());
        for &g in ambient.members() {
            if covered[g as usize] {
                continue;
            }
            reps.push(g);
            for &h in subgroup.members() {
                let x = match side {
                    Side::Right => parent.mul(h, g),
                    Side::Left => parent.mul(g, h),
                };
                covered[x as usize] = true;
            }
        }
        Transversal { side, reps }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// Labelling of an ambient group by the double cosets `H x K`.
#[derive(Clone, Debug)]
pub struct DoubleCosetPartition {
    coset_id: Vec<u32>,
    reps: Vec<u32>,
    sizes: Vec<usize>,
}

impl DoubleCosetPartition {
    /// Marker for elements outside the ambient group.
    pub const OUTSIDE: u32 = u32::MAX;

    /// Flood fill: each unlabelled element `x` (table order) seeds `H x K`.
    pub fn new(
        parent: &GroupTable,
        ambient: &SubgroupHandle,
        h: &SubgroupHandle,
        k: &SubgroupHandle,
    ) -> Self {
        let mut coset_id = vec![Self::OUTSIDE; parent.order()];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        for &x in ambient.members() {
            if coset_id[x as usize] != Self::OUTSIDE {
                continue;
            }
            let id = reps.len() as u32;
            let mut size = 0;
            for &hh in h.members() {
                let hx = parent.mul(hh, x);
                for &kk in k.members() {
                    let y = parent.mul(hx, kk) as usize;
                    if coset_id[y] == Self::OUTSIDE {
                        coset_id[y] = id;
                        size += 1;
                    }
                }
            }
            reps.push(x);
            sizes.push(size);
        }
        DoubleCosetPartition {
            coset_id,
            reps,
            sizes,
        }
    }

    /// Number of double cosets.
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    #[inline]
    pub fn id(&self, idx: u32) -> u32 {
        self.coset_id[idx as usize]
    }

    pub fn ids(&self) -> &[u32] {
        &self.coset_id
    }

    pub fn rep(&self, id: u32) -> u32 {
        self.reps[id as usize]
    }

    pub fn reps(&self) -> &[u32] {
        &self.reps
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }
}
