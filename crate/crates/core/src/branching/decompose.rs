use super::certificate::{all_passed, pair, round12, CheckRecord, ComponentRecord, DatumRecord};
use super::certificate::{DecompositionCertificate, Rung, SCHEMA_VERSION};
use super::gamma::{build_y_chi, find_gamma};
use super::sd::{build_s_d, nilpotent_datum, DatumKind, InducingData};
use super::{principal_series_truncation, PrincipalSeriesSpec, Setting};
use crate::chars::MultChar;
use crate::classfun::{near_integer, ClassFunction, NEAR_INT_TOL, RESIDUAL_TOL};
use crate::error::{Error, Result};

/// The certificate together with the class functions it describes.
#[derive(Clone, Debug)]
pub struct CanonicalDecomposition {
    pub certificate: DecompositionCertificate,
    /// `V_χ^{K_N}`.
    pub truncation: ClassFunction,
    /// One class function per certificate component, in the same order.
    pub components: Vec<ClassFunction>,
}

/// The class function `g ↦ φ(det g)` on `K/K_N`.
pub fn det_class_function(setting: &Setting, phi: &MultChar) -> Result<ClassFunction> {
    let torus = setting.torus();
    ClassFunction::from_phases(setting.classes(), |g| torus.det_value(phi, g))
}

fn datum_record(data: &InducingData) -> DatumRecord {
    match &data.kind {
        DatumKind::Nilpotent { label, theta } => DatumRecord::Nilpotent {
            label: *label,
            x: data.x.record(),
            d: data.d,
            theta: theta.record(),
        },
        DatumKind::Regular { gamma, .. } => DatumRecord::Regular {
            gamma: [gamma.re, gamma.im],
            r: gamma.r,
            y: data.x.record(),
            d: data.d,
            zeta: data.zeta.record(),
        },
    }
}

struct Piece {
    label: String,
    datum: DatumRecord,
    character: ClassFunction,
    s_depth: Option<u32>,
}

/// The pieces for a character of minimal depth, before any twist.
fn minimal_pieces(setting: &Setting, chi: &MultChar) -> Result<Vec<Piece>> {
    let torus = setting.torus();
    let spec = PrincipalSeriesSpec::new(torus, chi.clone())?;
    let r = spec.profile.depth;
    let n = setting.level().n();
    let mut pieces = Vec::new();
    let head = principal_series_truncation(setting, &spec, r + 1)?;
    if r == 0 && spec.profile.split_trivial {
        let phi = torus.phi_det_solve(chi, -1)?;
        let linear = det_class_function(setting, &phi)?;
        let steinberg = head.sub(&linear)?;
        pieces.push(Piece {
            label: "linear".into(),
            datum: DatumRecord::Linear { phi: phi.record() },
            character: linear,
            s_depth: None,
        });
        pieces.push(Piece {
            label: "steinberg".into(),
            datum: DatumRecord::Steinberg { phi: phi.record() },
            character: steinberg,
            s_depth: None,
        });
    } else {
        pieces.push(Piece {
            label: "head".into(),
            datum: DatumRecord::Borel { n: r + 1 },
            character: head,
            s_depth: None,
        });
    }
    let gamma = if r > 0 { Some(find_gamma(torus, chi)?) } else { None };
    for d in r + 1..n {
        let data = match &gamma {
            None => nilpotent_datum(setting, 1, d, &spec.theta)?,
            Some(g) => build_y_chi(setting, chi, g, d)?,
        };
        let datum = datum_record(&data);
        let comp = build_s_d(setting, data)?;
        pieces.push(Piece {
            label: format!("S_{d}"),
            datum,
            character: comp.character,
            s_depth: Some(d),
        });
    }
    Ok(pieces)
}

/// `V_χ^{K_N} = V_χ^{K_{r+1}} ⊕ S_{r+1} ⊕ … ⊕ S_{N-1}`, with nilpotent inducing data
/// when `r = 0` and `Y_χ`-data when `r > 0`; characters of non-minimal depth are
/// decomposed through their minimal factor and twisted back by `φ∘det`.
pub fn canonical_decomposition(setting: &Setting, chi: &MultChar) -> Result<CanonicalDecomposition> {
    let torus = setting.torus();
    let ctx = setting.ctx();
    let level = setting.level();
    let n = level.n();
    let spec = PrincipalSeriesSpec::new(torus, chi.clone())?;
    if n < spec.first_nonzero() {
        return Err(Error::LevelTooLow {
            have: n,
            need: spec.first_nonzero(),
        });
    }
    let (phi, chi_min) = torus.minimal_depth_factorization(chi)?;
    let mut pieces = minimal_pieces(setting, &chi_min)?;
    let twist = if phi.is_trivial() {
        None
    } else {
        let lambda = det_class_function(setting, &phi)?;
        for p in &mut pieces {
            p.character = p.character.twist(&lambda)?;
        }
        Some(phi.record())
    };

    let truncation = principal_series_truncation(setting, &spec, n)?;
    let mut residual = truncation.clone();
    let mut records = Vec::new();
    let mut checks = Vec::new();
    for p in &pieces {
        residual = residual.sub(&p.character)?;
        let inner = truncation.inner(&p.character)?;
        let multiplicity = near_integer(inner.re)
            .filter(|_| inner.im.abs() < NEAR_INT_TOL)
            .unwrap_or(-1);
        let below = match p.s_depth {
            Some(d) if d >= spec.first_nonzero() => {
                let lower = principal_series_truncation(setting, &spec, d)?;
                Some(pair(p.character.inner(&lower)?))
            }
            Some(_) => Some([0.0, 0.0]),
            None => None,
        };
        records.push(ComponentRecord {
            label: p.label.clone(),
            datum: p.datum.clone(),
            degree: p.character.degree().round() as u64,
            depth: p.character.rep_depth(level)?.depth,
            multiplicity,
            inner_with_truncation: pair(inner),
            self_inner: round12(p.character.norm_sq()),
            inner_below_depth: below,
        });
    }
    let residual_norm = residual.norm_sq().max(0.0).sqrt();
    if residual_norm > RESIDUAL_TOL {
        return Err(Error::DecompositionResidual(residual_norm));
    }

    let degree_sum: u64 = records.iter().map(|c| c.degree).sum();
    let expected_degree = setting.truncation_degree(n);
    let mut degrees: Vec<u64> = records.iter().map(|c| c.degree).collect();
    degrees.sort_unstable();
    degrees.dedup();
    checks.push(CheckRecord::new(
        "degrees sum to (q+1)q^(N-1)",
        degree_sum == expected_degree,
    ));
    checks.push(CheckRecord::new(
        "every component is irreducible",
        records.iter().all(|c| (c.self_inner - 1.0).abs() < NEAR_INT_TOL),
    ));
    checks.push(CheckRecord::new(
        "multiplicity-free",
        records.iter().all(|c| c.multiplicity == 1),
    ));
    checks.push(CheckRecord::new(
        "component degrees pairwise distinct",
        degrees.len() == records.len(),
    ));
    checks.push(CheckRecord::new(
        "S_d has no K_d-fixed vectors",
        records
            .iter()
            .filter_map(|c| c.inner_below_depth)
            .all(|[re, im]| re.abs() < NEAR_INT_TOL && im.abs() < NEAR_INT_TOL),
    ));
    checks.push(CheckRecord::new("residual vanishes", residual_norm <= RESIDUAL_TOL));

    let certificate = DecompositionCertificate {
        schema: SCHEMA_VERSION,
        record: "decomposition",
        p: ctx.p(),
        epsilon: ctx.eps(),
        level: n,
        chi: chi.record(),
        profile: spec.profile,
        twist,
        passed: all_passed(&checks),
        components: records,
        degree_sum,
        expected_degree,
        residual_norm: round12(residual_norm),
        rung: Rung::FullCharacter,
        checks,
    };
    Ok(CanonicalDecomposition {
        certificate,
        truncation,
        components: pieces.into_iter().map(|p| p.character).collect(),
    })
}
