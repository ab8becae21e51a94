use super::matrix::Mat2;
use super::table::GroupTable;
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::{Arc, OnceLock};

pub(crate) const ABSENT: u32 = u32::MAX;

/// A subgroup of an enumerated group, stored as a sorted list of parent indices.
#[derive(Debug)]
pub struct SubgroupTable {
    parent: Arc<GroupTable>,
    label: String,
    members: Vec<u32>,
    pos: Vec<u32>,
    gens: OnceLock<Vec<u32>>,
}

impl SubgroupTable {
    fn build(parent: &Arc<GroupTable>, label: String, mut members: Vec<u32>) -> Self {
        members.sort_unstable();
        members.dedup();
        let mut pos = vec![ABSENT; parent.order()];
        for (i, &m) in members.iter().enumerate() {
            pos[m as usize] = i as u32;
        }
        SubgroupTable {
            parent: parent.clone(),
            label,
            members,
            pos,
            gens: OnceLock::new(),
        }
    }

    /// The whole parent group, generated by the parent's own generators.
    pub fn full(parent: &Arc<GroupTable>) -> Self {
        let s = Self::build(parent, parent.label().to_string(), (0..parent.order() as u32).collect());
        let _ = s.gens.set(parent.gens().to_vec());
        s
    }

    /// The elements of `parent` satisfying `pred`; fails if they do not form a subgroup.
    pub fn from_predicate(
        parent: &Arc<GroupTable>,
        label: impl Into<String>,
        pred: impl Fn(&Mat2) -> bool,
    ) -> Result<Self> {
        let members = (0..parent.order() as u32).filter(|&i| pred(parent.elem(i))).collect();
        Self::from_members(parent, label, members)
    }

    /// Wrap an index set; fails if it is not closed under multiplication.
    pub fn from_members(parent: &Arc<GroupTable>, label: impl Into<String>, members: Vec<u32>) -> Result<Self> {
        let s = Self::build(parent, label.into(), members);
        let gens = s.find_generators()?;
        let _ = s.gens.set(gens);
        Ok(s)
    }

    /// The subgroup generated by the given parent indices.
    pub fn generated_by(parent: &Arc<GroupTable>, label: impl Into<String>, gens: &[u32]) -> Self {
        let mut seen = vec![false; parent.order()];
        seen[0] = true;
        let mut members = vec![0u32];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &g in gens {
                let y = parent.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        let s = Self::build(parent, label.into(), members);
        let _ = s.gens.set(gens.to_vec());
        s
    }

    pub fn parent(&self) -> &Arc<GroupTable> {
        &self.parent
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn contains(&self, i: u32) -> bool {
        self.pos[i as usize] != ABSENT
    }

    pub fn contains_elem(&self, g: &Mat2) -> bool {
        self.parent.index_of(g).is_some_and(|i| self.contains(i))
    }

    /// Position of a parent index inside `members`.
    pub fn position(&self, i: u32) -> Option<usize> {
        match self.pos[i as usize] {
            ABSENT => None,
            p => Some(p as usize),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = &Mat2> + '_ {
        self.members.iter().map(|&i| self.parent.elem(i))
    }

    /// A generating set, computed on first use.
    pub fn gens(&self) -> &[u32] {
        self.gens.get_or_init(|| {
            self.find_generators()
                .expect("member sets are validated on construction")
        })
    }

    pub fn same_parent(&self, other: &SubgroupTable) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent)
    }

    pub fn same_members(&self, other: &SubgroupTable) -> bool {
        self.same_parent(other) && self.members == other.members
    }

    pub fn is_subgroup_of(&self, other: &SubgroupTable) -> bool {
        self.same_parent(other) && self.members.iter().all(|&m| other.contains(m))
    }

    /// `{x·y}` for `x` in `self`, `y` in `other`; fails if that set is not a subgroup.
    pub fn product(&self, other: &SubgroupTable, label: impl Into<String>) -> Result<Self> {
        if !self.same_parent(other) {
            return Err(Error::GroupMismatch);
        }
        let mut mark = vec![false; self.parent.order()];
        let mut members = Vec::new();
        for &x in &self.members {
            if mark[x as usize] {
                continue;
            }
            for &y in &other.members {
                let z = self.parent.mul(x, y);
                if !mark[z as usize] {
                    mark[z as usize] = true;
                    members.push(z);
                }
            }
        }
        Self::from_members(&self.parent, label, members)
    }

    pub fn intersection(&self, other: &SubgroupTable, label: impl Into<String>) -> Result<Self> {
        if !self.same_parent(other) {
            return Err(Error::GroupMismatch);
        }
        let members = self.members.iter().copied().filter(|&m| other.contains(m)).collect();
        Self::from_members(&self.parent, label, members)
    }

    /// Whether `self` is normalized by every generator of `ambient`.
    pub fn is_normal_in(&self, ambient: &SubgroupTable) -> bool {
        self.is_subgroup_of(ambient)
            && ambient
                .gens()
                .iter()
                .all(|&g| self.gens().iter().all(|&x| self.contains(self.parent.conjugate(g, x))))
    }

    /// Incremental coset closure: add a candidate whenever it is not yet generated,
    /// and extend the generated group coset by coset.
    fn find_generators(&self) -> Result<Vec<u32>> {
        let parent = &self.parent;
        let n = self.members.len();
        let mut candidates = self.members.clone();
        candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(0x6b65_726e));
        let mut in_group = vec![false; parent.order()];
        in_group[0] = true;
        let mut elems = vec![0u32];
        let mut gens: Vec<u32> = Vec::new();
        for cand in candidates {
            if elems.len() == n {
                break;
            }
            if in_group[cand as usize] {
                continue;
            }
            gens.push(cand);
            let prev = elems.clone();
            let mut reps = vec![0u32];
            let mut i = 0;
            while i < reps.len() {
                let r = reps[i];
                for &g in &gens {
                    let x = parent.mul(r, g);
                    if in_group[x as usize] {
                        continue;
                    }
                    for &s in &prev {
                        let y = parent.mul(s, x);
                        if !self.contains(y) {
                            return Err(Error::NotSubgroup(self.label.clone()));
                        }
                        in_group[y as usize] = true;
                        elems.push(y);
                    }
                    reps.push(x);
                }
                i += 1;
            }
        }
        if !self.contains(0) {
            return Err(Error::NotSubgroup(self.label.clone()));
        }
        Ok(gens)
    }
}
