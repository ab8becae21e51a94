//! Restriction of principal series to `K`: the truncations `V^{K_n}`, the
//! components `S_d(X, ζ)`, the canonical decomposition with its certificate,
//! and the identification and near-identity checks built on top of them.

mod apps;
mod certificate;
mod decompose;
mod gamma;
mod sd;

pub use apps::{
    centralizer_elements, key_identification, near_identity_dimensions, near_identity_expansion,
    structural_order_check, tau_fixed_dimension_closed, tau_fixed_dimension_sum, tau_nilpotent, Parity,
};
pub use certificate::{
    round12, CheckRecord, ComponentRecord, DatumRecord, DecompositionCertificate, IdentificationRecord,
    NearIdentityRecord, Rung, StructuralRecord, SCHEMA_VERSION,
};
pub use decompose::{canonical_decomposition, det_class_function, CanonicalDecomposition};
pub use gamma::{admissible_gammas, build_y_chi, find_gamma, GammaDatum, ScaledMat};
pub use sd::{build_s_d, extend_psi_x_zeta, nilpotent_datum, DatumKind, InducingData, SdComponent};

use crate::chars::{DepthProfile, MultChar, Torus};
use crate::classfun::{induce_fn, near_integer, restrict_to_filtration, ClassFunction};
use crate::error::{Error, Result};
use crate::group::{ConjClasses, Level, Named};
use crate::ring::RingCtx;
use num_complex::Complex64;
use std::sync::Arc;

/// `K/K_N` together with the torus `T_0/T_N` at the same level.
#[derive(Clone, Debug)]
pub struct Setting {
    level: Arc<Level>,
    torus: Arc<Torus>,
}

impl Setting {
    pub fn new(level: Arc<Level>) -> Result<Self> {
        let torus = Torus::shared(level.ctx())?;
        Ok(Setting { level, torus })
    }

    /// Process-wide shared tables at the context's level.
    pub fn shared(ctx: &RingCtx) -> Result<Self> {
        Self::new(Level::shared(ctx)?)
    }

    pub fn level(&self) -> &Arc<Level> {
        &self.level
    }

    pub fn torus(&self) -> &Arc<Torus> {
        &self.torus
    }

    pub fn ctx(&self) -> &RingCtx {
        self.level.ctx()
    }

    pub fn classes(&self) -> &Arc<ConjClasses> {
        self.level.classes()
    }

    /// `q + 1` times `q^{N-1}`, the degree of `V^{K_N}`.
    pub fn truncation_degree(&self, n: u32) -> u64 {
        let q = self.ctx().q();
        (q + 1) * q.pow(n.saturating_sub(1))
    }
}

/// A principal series, recorded through its torus character.
#[derive(Clone, Debug)]
pub struct PrincipalSeriesSpec {
    pub chi: MultChar,
    pub profile: DepthProfile,
    /// The central character `θ = χ|_Z`.
    pub theta: MultChar,
}

impl PrincipalSeriesSpec {
    pub fn new(torus: &Torus, chi: MultChar) -> Result<Self> {
        if !Arc::ptr_eq(chi.structure(), torus.structure()) {
            return Err(Error::GroupMismatch);
        }
        let profile = torus.depth_profile(&chi);
        let theta = torus.central_character(&chi)?;
        Ok(PrincipalSeriesSpec { chi, profile, theta })
    }

    /// Least `n` with `V^{K_n}` nonzero.
    pub fn first_nonzero(&self) -> u32 {
        if self.profile.trivial {
            1
        } else {
            self.profile.depth + 1
        }
    }
}

/// `V_χ^{K_n} = Ind_{BK_n}^K χ`, with `χ` extended trivially across `U` and `K_n`.
pub fn principal_series_truncation(setting: &Setting, spec: &PrincipalSeriesSpec, n: u32) -> Result<ClassFunction> {
    let level = setting.level();
    if n > level.n() {
        return Err(Error::LevelTooLow {
            have: level.n(),
            need: n,
        });
    }
    let need = spec.first_nonzero();
    if n < need {
        return Err(Error::DepthTooLow {
            depth: spec.profile.depth,
            need,
        });
    }
    let sub = level.subgroup(Named::BorelFilt(n))?;
    let g = level.table();
    let torus = setting.torus();
    let values: Vec<Complex64> = sub
        .members()
        .iter()
        .map(|&i| Ok(torus.dagger(&spec.chi, g.elem(i).a)?.to_complex()))
        .collect::<Result<_>>()?;
    induce_fn(&sub, |i| values[sub.position(i).expect("member")], setting.classes())
}

/// `⟨Res_{K_m} f, 1⟩`, the dimension of the `K_m`-fixed vectors.
pub fn fixed_dimension(f: &ClassFunction, level: &Level, m: u32) -> Result<f64> {
    let r = if m == 0 {
        f.clone()
    } else {
        restrict_to_filtration(f, level, m)?
    };
    let one = ClassFunction::trivial(r.classes());
    Ok(r.inner(&one)?.re)
}

/// `dim Hom_K(V^{K_d}, V^{K_d})`, read off the self inner product.
pub fn intertwining_dimension(setting: &Setting, spec: &PrincipalSeriesSpec, d: u32) -> Result<i64> {
    let v = principal_series_truncation(setting, spec, d)?;
    near_integer(v.norm_sq()).ok_or(Error::DecompositionResidual(v.norm_sq()))
}

/// The predicted intertwining dimension with `r` the true depth: `d + 1` when
/// `r = 0` and `χ` is trivial on the rational units, `d - r` otherwise.
pub fn predicted_intertwining(profile: &DepthProfile, d: u32) -> i64 {
    if profile.true_depth == 0 && profile.split_trivial {
        d as i64 + 1
    } else {
        d as i64 - profile.true_depth as i64
    }
}
