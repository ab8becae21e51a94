//! The Lie algebra of `K`: elements of negative depth carried with an explicit
//! shift, the characters `Ψ_X` they define on congruence subgroups, centralizers,
//! normalizers of characters, nilpotent orbits, and lifting into centralizers.

mod centralizer;
mod hensel;

pub use centralizer::{
    brute_conjugator_search, centralizer, coset_centralizer, fixed_points, normalizer_of_char, Shape,
};
pub use hensel::{cayley, hensel_lift, random_admissible, random_centralizer_elem, random_congruence_elem};

use crate::error::{Error, Result};
use crate::group::Mat2;
use crate::phase::Phase;
use crate::ring::{Quad, RingCtx, Shifted};
use serde::Serialize;

/// The matrix `p^{-shift}·body`, with `body` known modulo `p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LieElem {
    pub body: Mat2,
    pub shift: u32,
}

/// `(shift, 8 residues)`, as written to certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LieRecord {
    pub shift: u32,
    pub residues: [u32; 8],
}

impl LieElem {
    pub fn new(body: Mat2, shift: u32) -> Self {
        LieElem { body, shift }
    }

    pub fn integral(body: Mat2) -> Self {
        LieElem { body, shift: 0 }
    }

    pub fn zero() -> Self {
        LieElem::integral(Mat2::default())
    }

    pub fn record(&self) -> LieRecord {
        LieRecord {
            shift: self.shift,
            residues: self.body.residues(),
        }
    }
}

/// `conj(M)^T·w + w·M = 0` on the body.
pub fn is_in_algebra(ctx: &RingCtx, x: &LieElem) -> bool {
    let m = &x.body;
    let ct = Mat2::new(ctx.conj(m.a), ctx.conj(m.c), ctx.conj(m.b), ctx.conj(m.d));
    let s = ctx.mat_add(&ctx.mat_mul(&ct, &Mat2::WEYL), &ctx.mat_mul(&Mat2::WEYL, m));
    s == Mat2::default()
}

/// Least entry valuation minus the shift; a zero entry counts as `N`.
pub fn depth(ctx: &RingCtx, x: &LieElem) -> i64 {
    x.body.entries().iter().map(|&e| ctx.val(e)).min().unwrap() as i64 - x.shift as i64
}

/// Membership in the lattice `𝔨_r`.
pub fn in_lattice(ctx: &RingCtx, x: &LieElem, r: i64) -> bool {
    depth(ctx, x) >= r
}

fn check_window(ctx: &RingCtx, shift: u32) -> Result<()> {
    if shift >= ctx.level() {
        return Err(Error::PrecisionExceeded {
            shift,
            level: ctx.level(),
        });
    }
    Ok(())
}

/// `Tr(XY)` as a shifted element.
pub fn trace_pair(ctx: &RingCtx, x: &LieElem, y: &LieElem) -> Result<Shifted> {
    let shift = x.shift + y.shift;
    check_window(ctx, shift)?;
    Ok(Shifted::new(ctx.mat_trace(&ctx.mat_mul(&x.body, &y.body)), shift))
}

/// `[X, Y] = XY - YX`.
pub fn bracket(ctx: &RingCtx, x: &LieElem, y: &LieElem) -> Result<LieElem> {
    let shift = x.shift + y.shift;
    check_window(ctx, shift)?;
    let xy = ctx.mat_mul(&x.body, &y.body);
    let yx = ctx.mat_mul(&y.body, &x.body);
    Ok(LieElem::new(ctx.mat_sub(&xy, &yx), shift))
}

/// `g·X·g⁻¹` for unitary `g`.
pub fn conjugate(ctx: &RingCtx, g: &Mat2, x: &LieElem) -> LieElem {
    LieElem::new(ctx.mat_conjugate(g, &x.body), x.shift)
}

/// `ψ(Tr(X(k - I)))`.
pub fn psi_x(ctx: &RingCtx, x: &LieElem, k: &Mat2) -> Result<Phase> {
    check_window(ctx, x.shift)?;
    let km = ctx.mat_sub(k, &Mat2::IDENTITY);
    ctx.psi(Shifted::new(ctx.mat_trace(&ctx.mat_mul(&x.body, &km)), x.shift))
}

/// The body of `x` rewritten at shift `to`.
fn rescale(ctx: &RingCtx, x: Shifted, to: u32) -> Result<Quad> {
    if x.shift <= to {
        Ok(ctx.mul(x.body, ctx.p_power(to - x.shift)))
    } else {
        ctx.div_p_pow(x.body, x.shift - to)
    }
}

/// `X(z) + X̃(u, v) = [[z√ε, u√ε], [v√ε, z√ε]]` at shift `d`, for rational `z, u, v`
/// with `ν(z) >= -d` and `ν(v) > ν(u) = -d`.
pub fn make_x(ctx: &RingCtx, z: Shifted, u: Shifted, v: Shifted, d: u32) -> Result<LieElem> {
    check_window(ctx, d)?;
    for (name, w) in [("z", z), ("u", u), ("v", v)] {
        if !w.body.is_rational() {
            return Err(Error::ValuationViolation(format!("{name} is not rational")));
        }
    }
    let (vz, vu, vv) = (ctx.shifted_val(z), ctx.shifted_val(u), ctx.shifted_val(v));
    let d_ = -(d as i64);
    if !z.body.is_zero() && vz < d_ {
        return Err(Error::ValuationViolation(format!("ν(z) = {vz} < -{d}")));
    }
    if vu != d_ {
        return Err(Error::ValuationViolation(format!("ν(u) = {vu}, expected -{d}")));
    }
    if !v.body.is_zero() && vv <= d_ {
        return Err(Error::ValuationViolation(format!("ν(v) = {vv} <= -{d}")));
    }
    let w = |x: Shifted| rescale(ctx, x, d).map(|b| ctx.mul(b, Quad::OMEGA));
    let zb = w(z)?;
    Ok(LieElem::new(Mat2::new(zb, w(u)?, w(v)?, zb), d))
}

/// A nilpotent orbit label: zero, or `δ = unit·p^exp` kept symbolically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum NilpotentLabel {
    Zero,
    Class { unit: u32, exp: i32 },
}

/// Which conjugation action orbits are taken under.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitMode {
    K,
    G,
}

impl NilpotentLabel {
    pub fn new(ctx: &RingCtx, unit: i64, exp: i32) -> Result<Self> {
        let u = ctx.reduce(unit);
        if (u as u64).is_multiple_of(ctx.p()) {
            return Err(Error::NonUnit);
        }
        Ok(NilpotentLabel::Class { unit: u, exp })
    }

    /// `X_δ = [[0, δ√ε], [0, 0]]`.
    pub fn element(&self, ctx: &RingCtx) -> LieElem {
        match *self {
            NilpotentLabel::Zero => LieElem::zero(),
            NilpotentLabel::Class { unit, exp } => {
                let u = ctx.base(unit as i64);
                let (b, shift) = if exp >= 0 {
                    (ctx.mul(u, ctx.p_power(exp as u32)), 0)
                } else {
                    (u, (-exp) as u32)
                };
                LieElem::new(
                    Mat2::new(Quad::ZERO, ctx.mul(b, Quad::OMEGA), Quad::ZERO, Quad::ZERO),
                    shift,
                )
            }
        }
    }
}

/// Whether two nilpotent labels lie in the same orbit: under `K` the valuation of
/// `δ` decides, under `G` only its parity (norms from the unramified extension
/// are exactly the elements of even valuation).
pub fn nilpotent_orbit_equiv(l1: NilpotentLabel, l2: NilpotentLabel, mode: OrbitMode) -> bool {
    use NilpotentLabel::*;
    match (l1, l2) {
        (Zero, Zero) => true,
        (Class { exp: e1, .. }, Class { exp: e2, .. }) => match mode {
            OrbitMode::K => e1 == e2,
            OrbitMode::G => (e1 - e2).rem_euclid(2) == 0,
        },
        _ => false,
    }
}

/// Brute-force oracle for `G`-conjugacy of labels: some `a = p^{-j}·b` with `b` in
/// `O_E/p^N` and `N(a)·δ₁ = δ₂`, so that `diag(a, conj(a)⁻¹)` carries `X_{δ₁}` to `X_{δ₂}`.
/// Returns `(b, j)`.
pub fn norm_conjugator_search(ctx: &RingCtx, l1: NilpotentLabel, l2: NilpotentLabel) -> Option<(Quad, i32)> {
    use NilpotentLabel::*;
    let (u1, e1, u2, e2) = match (l1, l2) {
        (Zero, Zero) => return Some((Quad::ONE, 0)),
        (Class { unit: u1, exp: e1 }, Class { unit: u2, exp: e2 }) => (u1, e1, u2, e2),
        _ => return None,
    };
    let m = ctx.modulus() as i64;
    for j in -16..=16 {
        // N(b)·u₁ = u₂·p^t with t = e₂ - e₁ + 2j, visible only when 0 <= t < N
        let t = e2 - e1 + 2 * j;
        if t < 0 || t >= ctx.level() as i32 {
            continue;
        }
        let target = ctx.mul(ctx.base(u2 as i64), ctx.p_power(t as u32));
        let hit = (0..m)
            .flat_map(|re| (0..m).map(move |im| (re, im)))
            .map(|(re, im)| ctx.elem(re, im))
            .find(|&b| ctx.mul(ctx.base(ctx.norm(b) as i64), ctx.base(u1 as i64)) == target);
        if let Some(b) = hit {
            return Some((b, j));
        }
    }
    None
}

#[cfg(test)]
mod tests;
