use super::subgroup::{SubgroupTable, ABSENT};
use super::Mat2;
use crate::error::{Error, Result};
use std::sync::Arc;

/// Conjugacy classes of a subgroup. Classes are numbered by their smallest
/// member, which also serves as the representative; class 0 is the identity.
#[derive(Debug)]
pub struct ConjClasses {
    sub: Arc<SubgroupTable>,
    class_of: Vec<u32>,
    reps: Vec<u32>,
    sizes: Vec<u64>,
}

impl ConjClasses {
    /// Orbits of conjugation by the subgroup's generators.
    pub fn compute(sub: &Arc<SubgroupTable>) -> Self {
        let parent = sub.parent();
        let ctx = parent.ctx();
        let gens: Vec<(Mat2, Mat2)> = sub
            .gens()
            .iter()
            .map(|&g| (*parent.elem(g), ctx.mat_inv_unitary(parent.elem(g))))
            .collect();
        let mut class_of = vec![ABSENT; parent.order()];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        let mut queue = Vec::new();
        for &x in sub.members() {
            if class_of[x as usize] != ABSENT {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x);
            class_of[x as usize] = id;
            queue.clear();
            queue.push(x);
            let mut i = 0;
            while i < queue.len() {
                let y = parent.elem(queue[i]);
                for (g, gi) in &gens {
                    let z = ctx.mat_mul(&ctx.mat_mul(g, y), gi);
                    let zi = parent.index_of(&z).expect("conjugate stays in the group");
                    if class_of[zi as usize] == ABSENT {
                        class_of[zi as usize] = id;
                        queue.push(zi);
                    }
                }
                i += 1;
            }
            sizes.push(queue.len() as u64);
        }
        ConjClasses {
            sub: sub.clone(),
            class_of,
            reps,
            sizes,
        }
    }

    /// Rebuild from class ids listed in member order (as stored in the cache).
    pub fn from_class_ids(sub: &Arc<SubgroupTable>, ids: &[u32]) -> Result<Self> {
        if ids.len() != sub.order() {
            return Err(Error::Cache("class id list has the wrong length".into()));
        }
        let count = ids.iter().max().map_or(0, |&m| m as usize + 1);
        let mut reps = vec![ABSENT; count];
        let mut sizes = vec![0u64; count];
        let mut class_of = vec![ABSENT; sub.parent().order()];
        for (&m, &id) in sub.members().iter().zip(ids) {
            let id_us = id as usize;
            if reps[id_us] == ABSENT {
                reps[id_us] = m;
            }
            sizes[id_us] += 1;
            class_of[m as usize] = id;
        }
        if reps.contains(&ABSENT) || reps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Cache("class ids are not canonical".into()));
        }
        Ok(ConjClasses {
            sub: sub.clone(),
            class_of,
            reps,
            sizes,
        })
    }

    pub fn subgroup(&self) -> &Arc<SubgroupTable> {
        &self.sub
    }

    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[u32] {
        &self.reps
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn group_order(&self) -> usize {
        self.sub.order()
    }

    pub fn class_of(&self, i: u32) -> Option<usize> {
        match self.class_of[i as usize] {
            ABSENT => None,
            c => Some(c as usize),
        }
    }

    pub fn class_of_elem(&self, g: &Mat2) -> Option<usize> {
        self.sub.parent().index_of(g).and_then(|i| self.class_of(i))
    }

    /// Class ids in member order.
    pub fn class_ids(&self) -> Vec<u32> {
        self.sub.members().iter().map(|&m| self.class_of[m as usize]).collect()
    }
}

/// Double cosets `left \ ambient / right`, each represented by its smallest index.
#[derive(Debug, Clone)]
pub struct DoubleCosets {
    pub reps: Vec<u32>,
    pub sizes: Vec<u64>,
    coset_of: Vec<u32>,
}

impl DoubleCosets {
    pub fn compute(left: &SubgroupTable, right: &SubgroupTable, ambient: &SubgroupTable) -> Result<Self> {
        if !left.is_subgroup_of(ambient) || !right.is_subgroup_of(ambient) {
            return Err(Error::NotSubgroup("double coset factors".into()));
        }
        let parent = ambient.parent();
        let mut coset_of = vec![ABSENT; parent.order()];
        let (mut reps, mut sizes) = (Vec::new(), Vec::new());
        let mut queue = Vec::new();
        for &x in ambient.members() {
            if coset_of[x as usize] != ABSENT {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x);
            coset_of[x as usize] = id;
            queue.clear();
            queue.push(x);
            let mut i = 0;
            while i < queue.len() {
                let y = queue[i];
                let next = left
                    .gens()
                    .iter()
                    .map(|&l| parent.mul(l, y))
                    .chain(right.gens().iter().map(|&r| parent.mul(y, r)))
                    .collect::<Vec<_>>();
                for z in next {
                    if coset_of[z as usize] == ABSENT {
                        coset_of[z as usize] = id;
                        queue.push(z);
                    }
                }
                i += 1;
            }
            sizes.push(queue.len() as u64);
        }
        Ok(DoubleCosets { reps, sizes, coset_of })
    }

    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn coset_of(&self, i: u32) -> Option<usize> {
        match self.coset_of[i as usize] {
            ABSENT => None,
            c => Some(c as usize),
        }
    }
}

/// A left transversal: one `t` per coset `t·H` of `sub` in `ambient`.
pub fn left_transversal(sub: &SubgroupTable, ambient: &SubgroupTable) -> Result<Vec<u32>> {
    if !sub.is_subgroup_of(ambient) {
        return Err(Error::NotSubgroup(sub.label().to_string()));
    }
    let parent = ambient.parent();
    let mut covered = vec![false; parent.order()];
    let mut reps = Vec::new();
    for &t in ambient.members() {
        if covered[t as usize] {
            continue;
        }
        reps.push(t);
        for &h in sub.members() {
            covered[parent.mul(t, h) as usize] = true;
        }
    }
    Ok(reps)
}
