//! Machine-readable records, one JSON object per line. Floats are rounded to
//! twelve decimal digits so that identical runs give identical bytes.

use crate::chars::{CharRecord, DepthProfile};
use crate::liealg::{LieRecord, NilpotentLabel};
use num_complex::Complex64;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

pub fn round12(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub(crate) fn pair(z: Complex64) -> [f64; 2] {
    [round12(z.re), round12(z.im)]
}

/// How much of a claim was checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rung {
    /// Equality of full class functions on an enumerated quotient.
    FullCharacter,
    /// Equality of inducing data on standalone subgroups.
    InducingData,
    /// Dimension arithmetic only.
    Dimensions,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub claim: String,
    pub passed: bool,
}

impl CheckRecord {
    pub fn new(claim: impl Into<String>, passed: bool) -> Self {
        CheckRecord {
            claim: claim.into(),
            passed,
        }
    }
}

/// What a component was induced from.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum DatumRecord {
    /// `Ind_{BK_n}^K χ`.
    Borel { n: u32 },
    /// `g ↦ φ(det g)`.
    Linear { phi: CharRecord },
    /// The Steinberg representation twisted by `φ∘det`.
    Steinberg { phi: CharRecord },
    Nilpotent {
        label: NilpotentLabel,
        x: LieRecord,
        d: u32,
        theta: CharRecord,
    },
    Regular {
        gamma: [u32; 2],
        r: u32,
        y: LieRecord,
        d: u32,
        zeta: CharRecord,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentRecord {
    pub label: String,
    pub datum: DatumRecord,
    pub degree: u64,
    pub depth: u32,
    pub multiplicity: i64,
    /// `⟨V^{K_N}, component⟩`.
    pub inner_with_truncation: [f64; 2],
    pub self_inner: f64,
    /// `⟨component, V^{K_d}⟩` for an `S_d` component.
    pub inner_below_depth: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionCertificate {
    pub schema: u32,
    pub record: &'static str,
    pub p: u64,
    pub epsilon: u64,
    pub level: u32,
    pub chi: CharRecord,
    pub profile: DepthProfile,
    /// `φ` with `χ = (φ∘det)·χ_min`, when `χ` is not of minimal depth.
    pub twist: Option<CharRecord>,
    pub components: Vec<ComponentRecord>,
    pub degree_sum: u64,
    pub expected_degree: u64,
    pub residual_norm: f64,
    pub rung: Rung,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentificationRecord {
    pub schema: u32,
    pub record: &'static str,
    pub p: u64,
    pub r: u32,
    pub d: u32,
    pub gamma: [u32; 2],
    pub rung: Rung,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NearIdentityRecord {
    pub schema: u32,
    pub record: &'static str,
    pub p: u64,
    pub r: u32,
    pub level: Option<u32>,
    pub theta: Option<CharRecord>,
    /// `(φ, k)` from reducing `θ` to `φ²·ρ^k`.
    pub reduction: Option<(CharRecord, u32)>,
    /// `(q + 1)q^{2r} - q(q^{2r} - 1) - (q^{2r} - 1)`.
    pub trivial_multiplicity_formula: i64,
    pub trivial_multiplicity_computed: Option<f64>,
    pub fixed_dimensions: Vec<(String, f64)>,
    pub residual: Option<f64>,
    pub rung: Rung,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructuralRecord {
    pub schema: u32,
    pub record: &'static str,
    pub p: u64,
    pub enumerated_order: u64,
    /// `q(q + 1)(q - 1)²`.
    pub candidate_minus_squared: u64,
    /// `q(q - 1)(q + 1)²`.
    pub candidate_plus_squared: u64,
    pub matches: &'static str,
    /// `(n, [K : BK_n], (q + 1)q^{n-1})`.
    pub borel_indices: Vec<(u32, u64, u64)>,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
}

pub(crate) fn all_passed(checks: &[CheckRecord]) -> bool {
    checks.iter().all(|c| c.passed)
}
