use crate::error::{Error, Result};
use crate::group::{GroupTable, Mat2, SubgroupTable};
use crate::phase::Phase;
use rustc_hash::FxHashMap;
use serde::Serialize;
use std::sync::Arc;

/// A basis of a finite abelian subgroup in elementary-divisor form, together
/// with the coordinates of every member with respect to it.
#[derive(Debug)]
pub struct AbelianStructure {
    sub: Arc<SubgroupTable>,
    gens: Vec<u32>,
    orders: Vec<u64>,
    coords: Vec<u32>,
}

fn prime_power_factors(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut l = 2;
    while l * l <= n {
        if n.is_multiple_of(l) {
            let mut pk = 1;
            while n.is_multiple_of(l) {
                n /= l;
                pk *= l;
            }
            out.push((l, pk));
        }
        l += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

fn pow_idx(g: &GroupTable, x: u32, mut e: u64) -> u32 {
    let ctx = g.ctx();
    let (mut acc, mut b) = (Mat2::IDENTITY, *g.elem(x));
    while e > 0 {
        if e & 1 == 1 {
            acc = ctx.mat_mul(&acc, &b);
        }
        b = ctx.mat_mul(&b, &b);
        e >>= 1;
    }
    g.index_of(&acc).expect("powers stay in the group")
}

/// Basis of an abelian `l`-group, largest cyclic factor first.
/// Returns generators, their orders, and coordinates for every element of the `l`-part.
fn l_part_basis(g: &GroupTable, elems: &[u32], l: u64) -> (Vec<u32>, Vec<u64>, FxHashMap<u32, Vec<u32>>) {
    let mut span: FxHashMap<u32, Vec<u32>> = FxHashMap::default();
    span.insert(0, Vec::new());
    let (mut gens, mut orders) = (Vec::new(), Vec::new());
    while span.len() < elems.len() {
        // element of largest order modulo the current span
        let mut best: Option<(u64, u32, u32)> = None;
        for &h in elems {
            if span.contains_key(&h) {
                continue;
            }
            let (mut ord, mut y) = (1u64, h);
            while !span.contains_key(&y) {
                y = pow_idx(g, y, l);
                ord *= l;
            }
            if best.is_none_or(|(o, _, _)| ord > o) {
                best = Some((ord, h, y));
            }
        }
        let (ord, h, y) = best.expect("span is a proper subgroup");
        // shift h by span elements so that its order equals its quotient order
        let c = &span[&y];
        let mut h2 = *g.elem(h);
        let ctx = g.ctx();
        for (i, &ci) in c.iter().enumerate() {
            debug_assert_eq!(ci as u64 % ord, 0);
            let k = (orders[i] - (ci as u64 / ord) % orders[i]) % orders[i];
            h2 = ctx.mat_mul(&h2, g.elem(pow_idx(g, gens[i], k)));
        }
        let h2 = g.index_of(&h2).unwrap();
        let old: Vec<(u32, Vec<u32>)> = span.iter().map(|(k, v)| (*k, v.clone())).collect();
        let mut power = 0u32;
        for t in 1..ord as u32 {
            power = if t == 1 { h2 } else { g.mul(power, h2) };
            for (s, cs) in &old {
                let mut cs = cs.clone();
                cs.push(t);
                span.insert(g.mul(*s, power), cs);
            }
        }
        for cs in span.values_mut() {
            if cs.len() == gens.len() {
                cs.push(0);
            }
        }
        gens.push(h2);
        orders.push(ord);
    }
    (gens, orders, span)
}

impl AbelianStructure {
    pub fn compute(sub: &Arc<SubgroupTable>) -> Result<Self> {
        let g = sub.parent();
        let gs = sub.gens();
        for (i, &x) in gs.iter().enumerate() {
            for &y in &gs[i + 1..] {
                if g.mul(x, y) != g.mul(y, x) {
                    return Err(Error::NotAbelian(sub.label().to_string()));
                }
            }
        }
        let n = sub.order() as u64;
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        let mut parts = Vec::new();
        for (l, lk) in prime_power_factors(n) {
            let elems: Vec<u32> = sub
                .members()
                .iter()
                .copied()
                .filter(|&h| pow_idx(g, h, lk) == 0)
                .collect();
            let (bg, bo, span) = l_part_basis(g, &elems, l);
            // projection onto the l-part: h ↦ h^e with e ≡ 1 mod lk, e ≡ 0 mod n/lk
            let rest = n / lk;
            let e = (0..lk).map(|t| rest * t).find(|e| e % lk == 1).unwrap_or(0);
            parts.push((e, gens.len(), span));
            gens.extend(bg);
            orders.extend(bo);
        }
        let rank = gens.len();
        let mut coords = vec![0u32; sub.order() * rank];
        for (i, &h) in sub.members().iter().enumerate() {
            for (e, off, span) in &parts {
                let hl = if parts.len() == 1 { h } else { pow_idx(g, h, *e) };
                let c = &span[&hl];
                coords[i * rank + off..i * rank + off + c.len()].copy_from_slice(c);
            }
        }
        Ok(AbelianStructure {
            sub: sub.clone(),
            gens,
            orders,
            coords,
        })
    }

    pub fn subgroup(&self) -> &Arc<SubgroupTable> {
        &self.sub
    }

    pub fn gens(&self) -> &[u32] {
        &self.gens
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn order(&self) -> usize {
        self.sub.order()
    }

    /// Coordinates of a parent index, if it lies in the subgroup.
    pub fn coords_of(&self, i: u32) -> Option<&[u32]> {
        let r = self.rank();
        self.sub.position(i).map(|p| &self.coords[p * r..(p + 1) * r])
    }

    pub fn coords_of_elem(&self, g: &Mat2) -> Option<&[u32]> {
        self.sub.parent().index_of(g).and_then(|i| self.coords_of(i))
    }

    /// Every character, in lexicographic order of exponent vectors.
    pub fn characters(self: &Arc<Self>) -> impl Iterator<Item = MultChar> + '_ {
        let total: u64 = self.orders.iter().product();
        (0..total).map(move |mut k| {
            let mut exps = vec![0u64; self.rank()];
            for (e, &o) in exps.iter_mut().zip(&self.orders).rev() {
                *e = k % o;
                k /= o;
            }
            MultChar {
                structure: self.clone(),
                exps,
            }
        })
    }
}

/// A character of a finite abelian group, given by exponents on its basis.
#[derive(Clone, Debug)]
pub struct MultChar {
    structure: Arc<AbelianStructure>,
    exps: Vec<u64>,
}

impl PartialEq for MultChar {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.structure, &other.structure) && self.exps == other.exps
    }
}

/// Serializable description: the domain label, its basis and the exponents.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CharRecord {
    pub domain: String,
    pub generators: Vec<[u32; 8]>,
    pub orders: Vec<u64>,
    pub exponents: Vec<u64>,
}

impl MultChar {
    pub fn trivial(structure: &Arc<AbelianStructure>) -> Self {
        MultChar {
            structure: structure.clone(),
            exps: vec![0; structure.rank()],
        }
    }

    pub fn from_exponents(structure: &Arc<AbelianStructure>, exps: &[u64]) -> Result<Self> {
        if exps.len() != structure.rank() {
            return Err(Error::PreconditionViolated(format!(
                "expected {} exponents, got {}",
                structure.rank(),
                exps.len()
            )));
        }
        Ok(MultChar {
            structure: structure.clone(),
            exps: exps.iter().zip(&structure.orders).map(|(e, o)| e % o).collect(),
        })
    }

    /// The character taking the given values on the basis.
    pub fn from_generator_values(structure: &Arc<AbelianStructure>, vals: &[Phase]) -> Result<Self> {
        let exps = vals
            .iter()
            .zip(&structure.orders)
            .map(|(v, &o)| {
                if o % v.den() != 0 {
                    return Err(Error::PreconditionViolated("value is not an n-th root of unity".into()));
                }
                Ok(v.num() * (o / v.den()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_exponents(structure, &exps)
    }

    /// The character agreeing with `f` on the basis of `structure`.
    pub fn from_fn(structure: &Arc<AbelianStructure>, f: impl Fn(&Mat2) -> Phase) -> Result<Self> {
        let g = structure.sub.parent();
        let vals: Vec<Phase> = structure.gens.iter().map(|&x| f(g.elem(x))).collect();
        Self::from_generator_values(structure, &vals)
    }

    pub fn structure(&self) -> &Arc<AbelianStructure> {
        &self.structure
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn eval_index(&self, i: u32) -> Option<Phase> {
        let c = self.structure.coords_of(i)?;
        Some(
            c.iter()
                .zip(&self.exps)
                .zip(&self.structure.orders)
                .map(|((&ci, &e), &o)| Phase::new(ci as i128 * e as i128, o))
                .sum(),
        )
    }

    pub fn eval(&self, g: &Mat2) -> Result<Phase> {
        self.structure
            .sub
            .parent()
            .index_of(g)
            .and_then(|i| self.eval_index(i))
            .ok_or_else(|| Error::NotAMember(self.structure.sub.label().to_string()))
    }

    pub fn mul(&self, other: &MultChar) -> Result<MultChar> {
        if !Arc::ptr_eq(&self.structure, &other.structure) {
            return Err(Error::GroupMismatch);
        }
        let exps: Vec<u64> = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Self::from_exponents(&self.structure, &exps)
    }

    pub fn inverse(&self) -> MultChar {
        let exps: Vec<u64> = self
            .exps
            .iter()
            .zip(&self.structure.orders)
            .map(|(&e, &o)| (o - e) % o)
            .collect();
        MultChar {
            structure: self.structure.clone(),
            exps,
        }
    }

    pub fn pow(&self, k: i64) -> MultChar {
        let exps: Vec<u64> = self
            .exps
            .iter()
            .zip(&self.structure.orders)
            .map(|(&e, &o)| (e as i128 * k as i128).rem_euclid(o as i128) as u64)
            .collect();
        MultChar {
            structure: self.structure.clone(),
            exps,
        }
    }

    /// Restriction to a subgroup (given by its own structure, over the same parent).
    pub fn restrict(&self, target: &Arc<AbelianStructure>) -> Result<MultChar> {
        let g = target.sub.parent();
        let vals = target
            .gens
            .iter()
            .map(|&x| self.eval(g.elem(x)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_generator_values(target, &vals)
    }

    /// Whether the character is trivial on the given subgroup.
    pub fn trivial_on(&self, sub: &SubgroupTable) -> bool {
        let g = sub.parent();
        sub.gens()
            .iter()
            .all(|&x| self.eval(g.elem(x)).is_ok_and(Phase::is_one))
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .zip(&self.structure.orders)
            .map(|(&e, &o)| Phase::new(e as i128, o).den())
            .fold(1, |a, b| a / gcd(a, b) * b)
    }

    pub fn record(&self) -> CharRecord {
        let g = self.structure.sub.parent();
        CharRecord {
            domain: self.structure.sub.label().to_string(),
            generators: self.structure.gens.iter().map(|&x| g.elem(x).residues()).collect(),
            orders: self.structure.orders.clone(),
            exponents: self.exps.clone(),
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
