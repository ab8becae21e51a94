use super::sd::{DatumKind, InducingData};
use super::Setting;
use crate::chars::{AbelianStructure, MultChar, Torus};
use crate::error::{Error, Result};
use crate::group::Mat2;
use crate::liealg::{centralizer, make_x, psi_x, LieElem};
use crate::phase::Phase;
use crate::ring::{Quad, RingCtx, Shifted};
use serde::Serialize;
use std::sync::Arc;

/// A matrix `p^{-shift}·body` over `E`, not necessarily integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScaledMat {
    pub body: Mat2,
    pub shift: u32,
}

/// `Γ = diag(x, -conj(x))` with `x = p^{-r}·(re + im·ω)`; the residues are small
/// representatives, so the datum moves between levels unchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GammaDatum {
    pub re: u32,
    pub im: u32,
    pub r: u32,
}

impl GammaDatum {
    pub fn x_body(&self, ctx: &RingCtx) -> Quad {
        ctx.elem(self.re as i64, self.im as i64)
    }

    /// `Γ` as a Lie element at shift `r`.
    pub fn element(&self, ctx: &RingCtx) -> LieElem {
        let x = self.x_body(ctx);
        LieElem::new(Mat2::new(x, Quad::ZERO, Quad::ZERO, ctx.neg(ctx.conj(x))), self.r)
    }

    /// `γ = x₁·p^d·ω`, integral of valuation `d - r`.
    pub fn gamma(&self, ctx: &RingCtx, d: u32) -> Quad {
        ctx.mul(ctx.elem(0, self.re as i64), ctx.p_power(d - self.r))
    }

    /// `Y_χ = [[x₂ω, ε⁻¹p^{-d}ω], [x₁²p^dω, x₂ω]]` at shift `d`.
    pub fn y_chi(&self, ctx: &RingCtx, d: u32) -> Result<LieElem> {
        let r = self.r;
        let (x1, x2) = (ctx.base(self.re as i64), ctx.base(self.im as i64));
        let eps_inv = ctx.inv(ctx.base(ctx.eps() as i64))?;
        let x1sq = ctx.mul(x1, x1);
        let v = if d >= 2 * r {
            Shifted::integral(ctx.mul(x1sq, ctx.p_power(d - 2 * r)))
        } else {
            Shifted::new(x1sq, 2 * r - d)
        };
        make_x(ctx, Shifted::new(x2, r), Shifted::new(eps_inv, d), v, d)
    }

    /// `g_d = [[1, -½γ⁻¹], [γ, ½]]`, scaled by `p^{d-r}` to make it integral.
    pub fn g_d(&self, ctx: &RingCtx, d: u32) -> Result<ScaledMat> {
        let e = d - self.r;
        let pe = ctx.p_power(e);
        let half = ctx.base(ctx.half() as i64);
        let w = ctx.elem(0, self.re as i64);
        let b = ctx.neg(ctx.mul(half, ctx.inv(w)?));
        let c = ctx.mul(w, ctx.p_power(2 * e));
        Ok(ScaledMat {
            body: Mat2::new(pe, b, c, ctx.mul(half, pe)),
            shift: e,
        })
    }
}

fn check_minimal_positive(torus: &Torus, chi: &MultChar) -> Result<u32> {
    let prof = torus.depth_profile(chi);
    if !prof.minimal || prof.depth == 0 {
        return Err(Error::PreconditionViolated(format!(
            "need minimal positive depth, got depth {} (true depth {})",
            prof.depth, prof.true_depth
        )));
    }
    Ok(prof.depth)
}

/// Every `x` in the window `p^{-r}/p^{-⌊r/2⌋}` with `χ(t) = ψ(Tr(Γ(t - I)))` on `T_{⌊r/2⌋+1}`,
/// in lexicographic order of residues.
pub fn admissible_gammas(torus: &Torus, chi: &MultChar) -> Result<Vec<GammaDatum>> {
    let r = check_minimal_positive(torus, chi)?;
    let ctx = torus.ctx();
    let domain = torus.filtration(r / 2 + 1);
    let targets: Vec<(Mat2, Phase)> = domain
        .elements()
        .map(|t| Ok((*t, chi.eval(t)?)))
        .collect::<Result<_>>()?;
    let window = r.div_ceil(2);
    let mut found = Vec::new();
    for re in ctx.residues(window) {
        for im in ctx.residues(window) {
            let datum = GammaDatum { re, im, r };
            let big = datum.element(ctx);
            let ok = targets.iter().all(|(t, v)| psi_x(ctx, &big, t).is_ok_and(|w| w == *v));
            if ok {
                found.push(datum);
            }
        }
    }
    Ok(found)
}

/// The first admissible `Γ` for a character of minimal depth `r >= 1`.
pub fn find_gamma(torus: &Torus, chi: &MultChar) -> Result<GammaDatum> {
    admissible_gammas(torus, chi)?
        .into_iter()
        .next()
        .ok_or(Error::NotRealizable)
}

/// `Y_χ = Γ^{g_d}`, its centralizer `T(Y_χ)` and `ζ_χ(t) = χ†(a + bγ)` for
/// `t = [[a, b], [bγ², a]]`, with the conjugation identity checked on bodies.
pub fn build_y_chi(setting: &Setting, chi: &MultChar, gamma: &GammaDatum, d: u32) -> Result<InducingData> {
    let r = gamma.r;
    if d <= r {
        return Err(Error::PreconditionViolated(format!("d = {d} must exceed r = {r}")));
    }
    let level = setting.level();
    if level.n() < d + 1 {
        return Err(Error::LevelTooLow {
            have: level.n(),
            need: d + 1,
        });
    }
    let ctx = setting.ctx();
    let y = gamma.y_chi(ctx, d)?;

    let g = gamma.g_d(ctx, d)?;
    let big = gamma.element(ctx);
    let lhs = ctx.mat_mul(&g.body, &ctx.mat_scale(&big.body, ctx.p_power(d - r)));
    if lhs != ctx.mat_mul(&y.body, &g.body) {
        return Err(Error::ConstructionCheck("Y_χ is not the g_d-conjugate of Γ".into()));
    }
    let gh = Mat2::new(
        ctx.conj(g.body.a),
        ctx.conj(g.body.c),
        ctx.conj(g.body.b),
        ctx.conj(g.body.d),
    );
    let form = ctx.mat_mul(&gh, &ctx.mat_mul(&Mat2::WEYL, &g.body));
    if form != ctx.mat_scale(&Mat2::WEYL, ctx.p_power(2 * g.shift)) {
        return Err(Error::ConstructionCheck("g_d is not unitary".into()));
    }

    let tx = Arc::new(centralizer(level.table(), &y)?);
    let structure = Arc::new(AbelianStructure::compute(&tx)?);
    let gam = gamma.gamma(ctx, d);
    let zeta_at = |t: &Mat2| -> Result<Phase> {
        let bg = ctx.mul(t.b, gam);
        chi.eval(&Mat2::new(ctx.add(t.a, bg), Quad::ZERO, Quad::ZERO, ctx.sub(t.a, bg)))
    };
    let gen_vals: Vec<Phase> = structure
        .gens()
        .iter()
        .map(|&i| zeta_at(level.table().elem(i)))
        .collect::<Result<_>>()?;
    let zeta = MultChar::from_generator_values(&structure, &gen_vals)?;
    for (&i, t) in tx.members().iter().zip(tx.elements()) {
        if zeta.eval_index(i) != Some(zeta_at(t)?) {
            return Err(Error::ConstructionCheck(
                "χ†(a + bγ) is not multiplicative on T(Y_χ)".into(),
            ));
        }
    }
    Ok(InducingData {
        x: y,
        d,
        centralizer: tx,
        zeta,
        kind: DatumKind::Regular { gamma: *gamma, g_d: g },
    })
}
