use super::gamma::{GammaDatum, ScaledMat};
use super::Setting;
use crate::chars::{AbelianStructure, MultChar};
use crate::classfun::{induce_fn, ClassFunction, NEAR_INT_TOL};
use crate::error::{Error, Result};
use crate::group::{left_transversal, Named, SubgroupTable};
use crate::liealg::{psi_x, LieElem, NilpotentLabel};
use crate::phase::Phase;
use std::sync::Arc;

/// Where the inducing data came from.
#[derive(Clone, Debug)]
pub enum DatumKind {
    /// `X = X_{unit·p^{-d}}`, `T(X) = Z𝓤`, `ζ = θ` on the center.
    Nilpotent { label: NilpotentLabel, theta: MultChar },
    /// `X = Y_χ = Γ^{g_d}`.
    Regular { gamma: GammaDatum, g_d: ScaledMat },
}

/// `X` of depth `-d`, its centralizer `T(X)` and a character `ζ` of `T(X)`.
#[derive(Clone, Debug)]
pub struct InducingData {
    pub x: LieElem,
    pub d: u32,
    pub centralizer: Arc<SubgroupTable>,
    pub zeta: MultChar,
    pub kind: DatumKind,
}

/// `S_d(X, ζ)` together with the data it was induced from.
#[derive(Clone, Debug)]
pub struct SdComponent {
    pub data: InducingData,
    pub character: ClassFunction,
}

/// Inducing data for `S_d(X_{unit·p^{-d}}, θ)`, with `θ` a character of the center
/// of the torus at the same level.
pub fn nilpotent_datum(setting: &Setting, unit: i64, d: u32, theta: &MultChar) -> Result<InducingData> {
    let level = setting.level();
    if level.n() < d + 1 {
        return Err(Error::LevelTooLow {
            have: level.n(),
            need: d + 1,
        });
    }
    if !Arc::ptr_eq(theta.structure(), setting.torus().center()) {
        return Err(Error::GroupMismatch);
    }
    let ctx = setting.ctx();
    let label = NilpotentLabel::new(ctx, unit, -(d as i32))?;
    let x = label.element(ctx);
    let zu = level.subgroup(Named::CenterUnipotent)?;
    let structure = Arc::new(AbelianStructure::compute(&zu)?);
    let gen_vals: Vec<Phase> = structure
        .gens()
        .iter()
        .map(|&i| theta.eval(&ctx.scalar(level.table().elem(i).a)))
        .collect::<Result<_>>()?;
    let zeta = MultChar::from_generator_values(&structure, &gen_vals)?;
    Ok(InducingData {
        x,
        d,
        centralizer: zu,
        zeta,
        kind: DatumKind::Nilpotent {
            label,
            theta: theta.clone(),
        },
    })
}

/// The character `Ψ_{X,ζ}(tj) = ζ(t)·Ψ_X(j)` of `T(X)J_d`, as the subgroup and its
/// values by position. Checks agreement on `T(X) ∩ J_d` and multiplicativity.
pub fn extend_psi_x_zeta(setting: &Setting, data: &InducingData) -> Result<(SubgroupTable, Vec<Phase>)> {
    let level = setting.level();
    let ctx = setting.ctx();
    let g = level.table();
    let tx = &data.centralizer;
    let j = level.subgroup(Named::J(data.d))?;
    let meet = tx.intersection(&j, "T(X)∩J")?;
    for (&h, m) in meet.members().iter().zip(meet.elements()) {
        if data.zeta.eval_index(h) != Some(psi_x(ctx, &data.x, m)?) {
            return Err(Error::IncompatibleOnIntersection);
        }
    }
    let psi_j: Vec<Phase> = j.elements().map(|m| psi_x(ctx, &data.x, m)).collect::<Result<_>>()?;
    let prod = tx.product(&j, "T(X)J")?;
    let mut values: Vec<Option<Phase>> = vec![None; prod.order()];
    for t in left_transversal(&meet, tx)? {
        let zt = data.zeta.eval_index(t).expect("transversal lies in T(X)");
        for (&jj, &pj) in j.members().iter().zip(&psi_j) {
            let pos = prod.position(g.mul(t, jj)).expect("product member");
            values[pos] = Some(zt + pj);
        }
    }
    let values: Vec<Phase> = values
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::ConstructionCheck("T(X)J_d not covered".into()))?;
    for &s in prod.gens() {
        let vs = values[prod.position(s).expect("generator")];
        for (&h, &vh) in prod.members().iter().zip(&values) {
            if values[prod.position(g.mul(s, h)).expect("closed")] != vs + vh {
                return Err(Error::ConstructionCheck("Ψ_{X,ζ} is not multiplicative".into()));
            }
        }
    }
    Ok((prod, values))
}

/// `S_d(X, ζ) = Ind_{T(X)J_d}^K Ψ_{X,ζ}`, checked irreducible of depth `d` and
/// degree `(q² - 1)q^{d-1}`.
pub fn build_s_d(setting: &Setting, data: InducingData) -> Result<SdComponent> {
    let level = setting.level();
    let d = data.d;
    if level.n() < d + 1 {
        return Err(Error::LevelTooLow {
            have: level.n(),
            need: d + 1,
        });
    }
    let (sub, values) = extend_psi_x_zeta(setting, &data)?;
    let character = induce_fn(
        &sub,
        |i| values[sub.position(i).expect("member")].to_complex(),
        setting.classes(),
    )?;
    let norm = character.norm_sq();
    if (norm - 1.0).abs() > NEAR_INT_TOL {
        return Err(Error::IrreducibilityFailed(norm));
    }
    let q = setting.ctx().q();
    let expected = ((q * q - 1) * q.pow(d - 1)) as f64;
    if (character.degree() - expected).abs() > NEAR_INT_TOL {
        return Err(Error::ConstructionCheck(format!(
            "degree {} instead of {expected}",
            character.degree()
        )));
    }
    let depth = character.rep_depth(level)?.depth;
    if depth != d {
        return Err(Error::ConstructionCheck(format!("depth {depth} instead of {d}")));
    }
    Ok(SdComponent { data, character })
}
