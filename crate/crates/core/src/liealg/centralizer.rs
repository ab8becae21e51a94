use super::LieElem;
use crate::error::{Error, Result};
use crate::group::{GroupTable, Mat2, SubgroupTable};
use crate::phase::Phase;
use crate::ring::{Quad, RingCtx};
use std::sync::Arc;

/// The shapes of Lie elements whose centralizer has a closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Scalar diagonal, unit upper-right entry: centralized by `[[a, b], [μb, a]]`
    /// with `μ` the ratio of the lower-left to the upper-right entry.
    Special { mu: Quad },
    /// Diagonal with unit difference of the diagonal entries: centralized by the torus.
    Diagonal,
}

impl Shape {
    pub fn of(ctx: &RingCtx, x: &LieElem) -> Result<Shape> {
        let m = &x.body;
        if m.a == m.d && ctx.is_unit(m.b) {
            let mu = ctx.mul(m.c, ctx.inv(m.b)?);
            return Ok(Shape::Special { mu });
        }
        if m.b.is_zero() && m.c.is_zero() && ctx.is_unit(ctx.sub(m.a, m.d)) {
            return Ok(Shape::Diagonal);
        }
        Err(Error::PreconditionViolated(format!(
            "no closed-form centralizer for {m:?}"
        )))
    }

    pub fn contains(&self, ctx: &RingCtx, g: &Mat2) -> bool {
        match *self {
            Shape::Special { mu } => g.a == g.d && g.c == ctx.mul(mu, g.b),
            Shape::Diagonal => g.b.is_zero() && g.c.is_zero(),
        }
    }
}

/// `T(X)`, the centralizer in the enumerated group, from the closed form.
pub fn centralizer(table: &Arc<GroupTable>, x: &LieElem) -> Result<SubgroupTable> {
    let ctx = table.ctx().clone();
    let shape = Shape::of(&ctx, x)?;
    SubgroupTable::from_predicate(table, "T(X)", move |g| shape.contains(&ctx, g))
}

/// Elements of `sub` commuting with the body of `x`, by direct scan.
pub fn fixed_points(sub: &SubgroupTable, x: &LieElem) -> Result<SubgroupTable> {
    let g = sub.parent();
    let ctx = g.ctx();
    let members = sub
        .members()
        .iter()
        .copied()
        .filter(|&i| {
            let k = g.elem(i);
            ctx.mat_mul(k, &x.body) == ctx.mat_mul(&x.body, k)
        })
        .collect();
    SubgroupTable::from_members(g, "fix(X)", members)
}

/// `{k ∈ sub : k⁻¹Xk - X ∈ 𝔨_s}`.
pub fn coset_centralizer(sub: &SubgroupTable, x: &LieElem, s: i64) -> Result<SubgroupTable> {
    let g = sub.parent();
    let ctx = g.ctx();
    let need = s + x.shift as i64;
    if need > ctx.level() as i64 {
        return Err(Error::PrecisionExceeded {
            shift: x.shift,
            level: ctx.level(),
        });
    }
    let members = sub
        .members()
        .iter()
        .copied()
        .filter(|&i| {
            let k = g.elem(i);
            let moved = ctx.mat_mul(&ctx.mat_mul(&ctx.mat_inv_unitary(k), &x.body), k);
            let diff = ctx.mat_sub(&moved, &x.body);
            diff.entries().iter().all(|&e| ctx.val(e) as i64 >= need)
        })
        .collect();
    SubgroupTable::from_members(g, "C(X+k_s)", members)
}

/// `{g ∈ ambient : ψ(g⁻¹hg) = ψ(h) for all h ∈ domain}`, scanning every `h`.
pub fn normalizer_of_char(
    ambient: &SubgroupTable,
    domain: &SubgroupTable,
    psi: impl Fn(&Mat2) -> Result<Phase>,
) -> Result<SubgroupTable> {
    if !domain.is_normal_in(ambient) {
        return Err(Error::DomainNotNormal);
    }
    let g = ambient.parent();
    let values: Vec<Phase> = domain.elements().map(&psi).collect::<Result<_>>()?;
    let mut members = Vec::new();
    for &k in ambient.members() {
        let ki = g.inv(k);
        let fixes = domain
            .members()
            .iter()
            .zip(&values)
            .all(|(&h, v)| domain.position(g.mul(g.mul(ki, h), k)).is_some_and(|p| values[p] == *v));
        if fixes {
            members.push(k);
        }
    }
    SubgroupTable::from_members(g, "N(psi)", members)
}

/// The first `g` (by index) in `sub` with `g·X1·g⁻¹ = X2` on bodies.
pub fn brute_conjugator_search(sub: &SubgroupTable, x1: &LieElem, x2: &LieElem) -> Option<u32> {
    if x1.shift != x2.shift {
        return None;
    }
    let g = sub.parent();
    let ctx = g.ctx();
    sub.members()
        .iter()
        .copied()
        .find(|&i| ctx.mat_mul(g.elem(i), &x1.body) == ctx.mat_mul(&x2.body, g.elem(i)))
}
