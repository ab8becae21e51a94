use super::abelian::{AbelianStructure, MultChar};
use crate::error::{Error, Result};
use crate::group::{enumerate_torus, GroupTable, Mat2, Named, SubgroupTable};
use crate::phase::Phase;
use crate::ring::{Quad, RingCtx};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// The diagonal group `T_0/T_N`, its filtration, the rational diagonal subgroup
/// and the center, enumerated without touching `K`.
#[derive(Debug)]
pub struct Torus {
    ctx: RingCtx,
    table: Arc<GroupTable>,
    structure: Arc<AbelianStructure>,
    center: Arc<AbelianStructure>,
    filt: Vec<Arc<SubgroupTable>>,
    split: Vec<Arc<SubgroupTable>>,
}

/// Depth data of a character of the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DepthProfile {
    /// Least `r` with the character trivial on `T_{r+1}`.
    pub depth: u32,
    /// Least `m` with the character trivial on the rational part of `T_{m+1}`.
    pub true_depth: u32,
    pub minimal: bool,
    pub trivial: bool,
    /// Trivial on the rational units `S_0`.
    pub split_trivial: bool,
}

type Memo = Mutex<HashMap<(u64, u64, u32), Arc<Torus>>>;

impl Torus {
    pub fn new(ctx: &RingCtx) -> Result<Self> {
        let table = Arc::new(enumerate_torus(ctx)?);
        let full = Arc::new(SubgroupTable::full(&table));
        let structure = Arc::new(AbelianStructure::compute(&full)?);
        let pred = |name: Named| {
            let c = ctx.clone();
            SubgroupTable::from_predicate(&table, name.to_string(), move |g| name.predicate(&c, g).unwrap())
                .map(Arc::new)
        };
        let center = Arc::new(AbelianStructure::compute(&pred(Named::Center)?)?);
        let n = ctx.level();
        let mut filt = vec![full.clone()];
        let mut split = vec![pred(Named::SplitTorus0)?];
        for m in 1..=n {
            filt.push(pred(Named::TorusFilt(m))?);
            split.push(pred(Named::SplitTorusFilt(m))?);
        }
        Ok(Torus {
            ctx: ctx.clone(),
            table,
            structure,
            center,
            filt,
            split,
        })
    }

    pub fn shared(ctx: &RingCtx) -> Result<Arc<Torus>> {
        static MEMO: OnceLock<Memo> = OnceLock::new();
        let memo = MEMO.get_or_init(Default::default);
        let key = (ctx.p(), ctx.eps(), ctx.level());
        if let Some(t) = memo.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let t = Arc::new(Torus::new(ctx)?);
        Ok(memo.lock().unwrap().entry(key).or_insert(t).clone())
    }

    pub fn ctx(&self) -> &RingCtx {
        &self.ctx
    }

    pub fn table(&self) -> &Arc<GroupTable> {
        &self.table
    }

    pub fn structure(&self) -> &Arc<AbelianStructure> {
        &self.structure
    }

    pub fn center(&self) -> &Arc<AbelianStructure> {
        &self.center
    }

    /// `T_m` for `0 <= m <= N`.
    pub fn filtration(&self, m: u32) -> &Arc<SubgroupTable> {
        &self.filt[m.min(self.ctx.level()) as usize]
    }

    /// The rational part `S_m` of `T_m`.
    pub fn split_filtration(&self, m: u32) -> &Arc<SubgroupTable> {
        &self.split[m.min(self.ctx.level()) as usize]
    }

    pub fn characters(&self) -> impl Iterator<Item = MultChar> + '_ {
        self.structure.characters()
    }

    pub fn trivial(&self) -> MultChar {
        MultChar::trivial(&self.structure)
    }

    /// `χ(diag(a, conj(a)⁻¹))`.
    pub fn dagger(&self, chi: &MultChar, a: Quad) -> Result<Phase> {
        chi.eval(&self.ctx.torus(a)?)
    }

    pub fn depth_profile(&self, chi: &MultChar) -> DepthProfile {
        let n = self.ctx.level();
        let depth = (0..n).find(|&r| chi.trivial_on(self.filtration(r + 1))).unwrap_or(n);
        let true_depth = (0..n)
            .find(|&m| chi.trivial_on(self.split_filtration(m + 1)))
            .unwrap_or(n);
        let split_trivial = chi.trivial_on(self.split_filtration(0));
        DepthProfile {
            depth,
            true_depth,
            minimal: depth == true_depth,
            trivial: chi.is_trivial(),
            split_trivial,
        }
    }

    /// The restriction `θ = χ|_Z` to the center.
    pub fn central_character(&self, chi: &MultChar) -> Result<MultChar> {
        chi.restrict(&self.center)
    }

    /// The unique character of order two of the center.
    pub fn delta(&self) -> MultChar {
        let mut it = self.center.characters().filter(|c| c.order() == 2);
        let d = it.next().expect("the center has even order");
        debug_assert!(it.next().is_none(), "the center is cyclic");
        d
    }

    /// `φ(det g)` for a character `φ` of the center.
    pub fn det_value(&self, phi: &MultChar, g: &Mat2) -> Result<Phase> {
        phi.eval(&self.ctx.scalar(self.ctx.mat_det(g)))
    }

    /// The torus character `t ↦ φ(det t)`.
    pub fn det_char(&self, phi: &MultChar) -> Result<MultChar> {
        MultChar::from_fn(&self.structure, |t| {
            self.det_value(phi, t).expect("det lands in the center")
        })
    }

    /// Lexicographically first `φ` on the center with `φ∘det = χ` on `T_level`.
    fn solve_det_on(&self, chi: &MultChar, level: u32) -> Result<MultChar> {
        let tl = self.filtration(level);
        let g = &self.table;
        let constraints: Vec<(Mat2, Phase)> = tl
            .gens()
            .iter()
            .map(|&t| Ok((*g.elem(t), chi.eval(g.elem(t))?)))
            .collect::<Result<_>>()?;
        self.center
            .characters()
            .find(|phi| {
                constraints
                    .iter()
                    .all(|(t, v)| self.det_value(phi, t).is_ok_and(|x| x == *v))
            })
            .ok_or(Error::NotRealizable)
    }

    /// A character `φ` of the center with `φ∘det = χ` on `T_{m+1}`; needs true depth `<= m`.
    pub fn phi_det_solve(&self, chi: &MultChar, m: i64) -> Result<MultChar> {
        let prof = self.depth_profile(chi);
        let level = (m + 1).max(0) as u32;
        let ok = if m < 0 {
            prof.split_trivial
        } else {
            prof.true_depth as i64 <= m
        };
        if !ok {
            return Err(Error::TrueDepthTooBig {
                true_depth: prof.true_depth,
                level: m,
            });
        }
        self.solve_det_on(chi, level)
    }

    /// `χ = (φ∘det)·χ_min` with `χ_min` of minimal depth equal to the true depth of `χ`.
    pub fn minimal_depth_factorization(&self, chi: &MultChar) -> Result<(MultChar, MultChar)> {
        let prof = self.depth_profile(chi);
        if prof.minimal {
            return Ok((MultChar::trivial(&self.center), chi.clone()));
        }
        let m = if prof.split_trivial { -1 } else { prof.true_depth as i64 };
        let phi = self.phi_det_solve(chi, m)?;
        let chi_min = chi.mul(&self.det_char(&phi)?.inverse())?;
        debug_assert!(self.depth_profile(&chi_min).minimal);
        Ok((phi, chi_min))
    }

    /// Representative of the non-square class of central characters: `δ` itself when
    /// `δ(-1) = -1`, otherwise the first depth-zero character with value `-1` at `-1`.
    /// (When `q ≡ 3 mod 4`, `δ` is a square and cannot serve.)
    pub fn nonsquare_class(&self) -> MultChar {
        let minus_one = self.ctx.scalar(self.ctx.base(-1));
        let odd = |c: &MultChar| c.eval(&minus_one).is_ok_and(|v| !v.is_one());
        let delta = self.delta();
        if odd(&delta) {
            return delta;
        }
        let z1 = self
            .center
            .subgroup()
            .members()
            .iter()
            .copied()
            .filter(|&i| self.ctx.in_congruence(self.table.elem(i), 1))
            .collect::<Vec<_>>();
        self.center
            .characters()
            .find(|c| odd(c) && z1.iter().all(|&i| c.eval_index(i).is_some_and(Phase::is_one)))
            .expect("the torsion part of the center has even order")
    }

    /// `θ = φ²·ρ^k` on the center, with `ρ` from [`Torus::nonsquare_class`];
    /// returns `(φ, k, χ·(φ∘det)⁻¹)`.
    pub fn central_reduction(&self, chi: &MultChar) -> Result<(MultChar, u32, MultChar)> {
        let theta = self.central_character(chi)?;
        let rho = self.nonsquare_class();
        for phi in self.center.characters() {
            let rest = theta.mul(&phi.pow(-2))?;
            let k = if rest.is_trivial() {
                0
            } else if rest == rho {
                1
            } else {
                continue;
            };
            let chi0 = chi.mul(&self.det_char(&phi)?.inverse())?;
            return Ok((phi, k, chi0));
        }
        Err(Error::NotRealizable)
    }
}
