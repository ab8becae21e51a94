use super::matrix::Mat2;
use crate::error::{Error, Result};
use crate::ring::RingCtx;
use rustc_hash::FxHashMap;
use std::collections::VecDeque;

/// A finite group of unitary matrices over `O_E / p^N`, listed in breadth-first
/// order from its generators. Index 0 is the identity.
#[derive(Debug)]
pub struct GroupTable {
    ctx: RingCtx,
    label: String,
    elems: Vec<Mat2>,
    index: FxHashMap<Mat2, u32>,
    gens: Vec<u32>,
}

impl GroupTable {
    /// Close `gens` under multiplication. Fails once more than `budget` elements appear.
    pub fn generate(ctx: &RingCtx, label: impl Into<String>, gens: &[Mat2], budget: u64) -> Result<Self> {
        let label = label.into();
        if let Some(g) = gens.iter().find(|g| !ctx.is_unitary(g)) {
            return Err(Error::NotSubgroup(format!("{label}: generator {g:?} is not unitary")));
        }
        let gens: Vec<Mat2> = gens.iter().copied().filter(|g| *g != Mat2::IDENTITY).collect();
        let mut elems = vec![Mat2::IDENTITY];
        let mut index = FxHashMap::default();
        index.insert(Mat2::IDENTITY, 0u32);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let x = elems[i];
            for s in &gens {
                let y = ctx.mat_mul(&x, s);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(y) {
                    if elems.len() as u64 >= budget {
                        return Err(Error::BudgetExceeded {
                            predicted: elems.len() as u64 + 1,
                            budget,
                        });
                    }
                    e.insert(elems.len() as u32);
                    queue.push_back(elems.len());
                    elems.push(y);
                }
            }
        }
        let gen_idx = gens.iter().map(|g| index[g]).collect();
        Ok(GroupTable {
            ctx: ctx.clone(),
            label,
            elems,
            index,
            gens: gen_idx,
        })
    }

    /// Rebuild a table from a stored element list; the first element must be the identity.
    pub fn from_elements(ctx: &RingCtx, label: impl Into<String>, elems: Vec<Mat2>, gens: Vec<u32>) -> Result<Self> {
        let label = label.into();
        if elems.first() != Some(&Mat2::IDENTITY) {
            return Err(Error::Cache(format!("{label}: identity must come first")));
        }
        let mut index = FxHashMap::default();
        for (i, g) in elems.iter().enumerate() {
            if index.insert(*g, i as u32).is_some() {
                return Err(Error::Cache(format!("{label}: duplicate element {g:?}")));
            }
        }
        if gens.iter().any(|&g| g as usize >= elems.len()) {
            return Err(Error::Cache(format!("{label}: generator index out of range")));
        }
        Ok(GroupTable {
            ctx: ctx.clone(),
            label,
            elems,
            index,
            gens,
        })
    }

    pub fn ctx(&self) -> &RingCtx {
        &self.ctx
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elem(&self, i: u32) -> &Mat2 {
        &self.elems[i as usize]
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elems
    }

    pub fn gens(&self) -> &[u32] {
        &self.gens
    }

    pub fn index_of(&self, g: &Mat2) -> Option<u32> {
        self.index.get(g).copied()
    }

    /// Index of a matrix known to lie in the group.
    pub fn expect_index(&self, g: &Mat2) -> Result<u32> {
        self.index_of(g).ok_or_else(|| Error::NotAMember(self.label.clone()))
    }

    #[inline]
    pub fn mul(&self, i: u32, j: u32) -> u32 {
        let g = self.ctx.mat_mul(self.elem(i), self.elem(j));
        self.index[&g]
    }

    pub fn inv(&self, i: u32) -> u32 {
        self.index[&self.ctx.mat_inv_unitary(self.elem(i))]
    }

    /// `g·x·g⁻¹`.
    pub fn conjugate(&self, g: u32, x: u32) -> u32 {
        self.index[&self.ctx.mat_conjugate(self.elem(g), self.elem(x))]
    }
}
