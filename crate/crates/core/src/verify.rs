//! Named verification suites. Each suite checks a family of claims at finite level
//! and reports one line per claim; a failing check is report content, not an error.

use crate::branching::{
    build_s_d, intertwining_dimension, key_identification, near_identity_dimensions, near_identity_expansion,
    nilpotent_datum, predicted_intertwining, structural_order_check, PrincipalSeriesSpec, Setting, SCHEMA_VERSION,
};
use crate::chars::{MultChar, Torus};
use crate::classfun::{decompose, induce_fn, irreducibles, ClassFunction};
use crate::error::{Error, Result};
use crate::group::{ceil_half, DoubleCosets, Level, Named, DEFAULT_BUDGET};
use crate::liealg::{
    brute_conjugator_search, centralizer, fixed_points, hensel_lift, nilpotent_orbit_equiv, norm_conjugator_search,
    normalizer_of_char, psi_x, random_admissible, NilpotentLabel, OrbitMode, Shape,
};
use crate::ring::RingCtx;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    DoubleCosets,
    IntertwiningDims,
    SdIrreducible,
    Normalizers,
    Hensel,
    Orbits,
    NearIdentity,
    Identification,
    Structural,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::DoubleCosets,
        Suite::IntertwiningDims,
        Suite::SdIrreducible,
        Suite::Normalizers,
        Suite::Hensel,
        Suite::Orbits,
        Suite::NearIdentity,
        Suite::Identification,
        Suite::Structural,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::DoubleCosets => "double-cosets",
            Suite::IntertwiningDims => "intertwining-dims",
            Suite::SdIrreducible => "sd-irreducible",
            Suite::Normalizers => "normalizers",
            Suite::Hensel => "hensel",
            Suite::Orbits => "orbits",
            Suite::NearIdentity => "near-identity",
            Suite::Identification => "identification",
            Suite::Structural => "structural",
        }
    }

    /// Smallest level the suite can run at.
    pub fn min_level(self) -> u32 {
        match self {
            Suite::DoubleCosets | Suite::IntertwiningDims | Suite::Orbits | Suite::Structural => 1,
            Suite::SdIrreducible | Suite::Normalizers | Suite::NearIdentity | Suite::Identification => 2,
            Suite::Hensel => 2,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub p: u64,
    pub eps: u64,
    pub level: u32,
    pub budget: u64,
    pub cache_dir: Option<PathBuf>,
    pub trials: u32,
    pub seed: u64,
}

impl VerifyConfig {
    pub fn new(p: u64, eps: u64, level: u32) -> Self {
        VerifyConfig {
            p,
            eps,
            level,
            budget: DEFAULT_BUDGET,
            cache_dir: None,
            trials: 100,
            seed: 1,
        }
    }

    pub fn ctx(&self, n: u32) -> Result<RingCtx> {
        RingCtx::new(self.p, self.eps, n)
    }

    /// `K/K_n`, through the on-disk cache when one is configured.
    pub fn level_at(&self, n: u32) -> Result<Arc<Level>> {
        let ctx = self.ctx(n)?;
        match &self.cache_dir {
            Some(root) => Ok(Arc::new(Level::cached(&ctx, self.budget, root)?)),
            None if self.budget == DEFAULT_BUDGET => Level::shared(&ctx),
            None => Ok(Arc::new(Level::enumerate(&ctx, self.budget)?)),
        }
    }

    pub fn setting_at(&self, n: u32) -> Result<Setting> {
        Setting::new(self.level_at(n)?)
    }
}

/// One checked claim.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimLine {
    pub schema: u32,
    pub record: &'static str,
    pub suite: &'static str,
    pub p: u64,
    pub claim: String,
    pub citation: &'static str,
    pub passed: bool,
    pub detail: Value,
}

struct Report<'a> {
    suite: Suite,
    cfg: &'a VerifyConfig,
    lines: Vec<ClaimLine>,
}

impl Report<'_> {
    /// Record a claim; an error while checking it counts as a failure.
    fn claim(
        &mut self,
        claim: impl Into<String>,
        citation: &'static str,
        check: impl FnOnce() -> Result<(bool, Value)>,
    ) {
        let (passed, detail) = check().unwrap_or_else(|e| (false, json!({ "error": e.to_string() })));
        self.lines.push(ClaimLine {
            schema: SCHEMA_VERSION,
            record: "claim",
            suite: self.suite.name(),
            p: self.cfg.p,
            claim: claim.into(),
            citation,
            passed,
            detail,
        });
    }
}

/// Run a suite at the configured `p`, `ε` and level.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<ClaimLine>> {
    cfg.ctx(1)?;
    if cfg.level < suite.min_level() {
        return Err(Error::LevelTooLow {
            have: cfg.level,
            need: suite.min_level(),
        });
    }
    let mut rep = Report {
        suite,
        cfg,
        lines: Vec::new(),
    };
    match suite {
        Suite::DoubleCosets => double_cosets(&mut rep),
        Suite::IntertwiningDims => intertwining_dims(&mut rep),
        Suite::SdIrreducible => sd_irreducible(&mut rep),
        Suite::Normalizers => normalizers(&mut rep),
        Suite::Hensel => hensel(&mut rep),
        Suite::Orbits => orbits(&mut rep),
        Suite::NearIdentity => near_identity(&mut rep),
        Suite::Identification => identification(&mut rep),
        Suite::Structural => structural(&mut rep),
    }
    Ok(rep.lines)
}

pub fn all_passed(lines: &[ClaimLine]) -> bool {
    lines.iter().all(|l| l.passed)
}

fn double_cosets(rep: &mut Report) {
    let cfg = rep.cfg;
    let q = cfg.p;
    rep.claim(
        "B\\K/B has two double cosets at level 1",
        "Bruhat decomposition of the residual group",
        || {
            let l = cfg.level_at(1)?;
            let b = l.subgroup(Named::Borel)?;
            let n = DoubleCosets::compute(&b, &b, l.full())?.count();
            Ok((n == 2, json!({ "double_cosets": n })))
        },
    );
    rep.claim(
        "Ind_B 1 at level 1 is trivial plus an irreducible of degree q",
        "level-one decomposition of the Borel induction",
        || {
            let l = cfg.level_at(1)?;
            let b = l.subgroup(Named::Borel)?;
            let v = induce_fn(&b, |_| Complex64::new(1.0, 0.0), l.classes())?;
            let irr = irreducibles(l.classes())?;
            let dec = decompose(&v, &irr)?;
            let parts: Vec<(i64, f64)> = dec
                .multiplicities
                .iter()
                .zip(&irr)
                .filter(|(m, _)| **m != 0)
                .map(|(m, c)| (*m, c.degree().round()))
                .collect();
            let one = ClassFunction::trivial(l.classes());
            let ok = (v.degree() - (q + 1) as f64).abs() < 1e-9
                && (v.norm_sq() - 2.0).abs() < 1e-6
                && (v.inner(&one)?.re - 1.0).abs() < 1e-6
                && parts == vec![(1, 1.0), (1, q as f64)]
                && dec.remainder_norm < 1e-6;
            Ok((
                ok,
                json!({ "degree": v.degree().round(), "self_inner": v.norm_sq(), "components": parts }),
            ))
        },
    );
    for n in 1..=cfg.level {
        rep.claim(
            format!("[K : BK_{n}] = (q+1)q^{}", n - 1),
            "index of the Iwahori-type subgroups",
            || {
                let l = cfg.level_at(cfg.level)?;
                let bk = l.subgroup(Named::BorelFilt(n))?;
                let index = (l.order() / bk.order()) as u64;
                let expect = (q + 1) * q.pow(n - 1);
                Ok((
                    index == expect && l.order() % bk.order() == 0,
                    json!({ "index": index, "expected": expect }),
                ))
            },
        );
    }
}

fn intertwining_dims(rep: &mut Report) {
    let cfg = rep.cfg;
    let setting = match cfg.setting_at(cfg.level) {
        Ok(s) => s,
        Err(e) => {
            rep.claim("tables enumerate", "setup", || Err(e));
            return;
        }
    };
    for chi in setting.torus().characters() {
        let record = chi.record();
        rep.claim(
            format!(
                "<V^K_d, V^K_d> for chi {:?}, nonzero d <= {}",
                record.exponents, cfg.level
            ),
            "intertwining dimensions of truncated principal series",
            || {
                let spec = PrincipalSeriesSpec::new(setting.torus(), chi.clone())?;
                let mut rows = Vec::new();
                let mut ok = true;
                for d in spec.first_nonzero()..=cfg.level {
                    let got = intertwining_dimension(&setting, &spec, d)?;
                    let want = predicted_intertwining(&spec.profile, d);
                    ok &= got == want;
                    rows.push(json!({ "d": d, "computed": got, "predicted": want }));
                }
                Ok((ok, json!({ "profile": spec.profile, "rows": rows })))
            },
        );
    }
}

fn center_characters(torus: &Torus) -> Result<[(&'static str, MultChar); 2]> {
    Ok([
        ("trivial", torus.central_character(&torus.trivial())?),
        ("delta", torus.delta()),
    ])
}

fn sd_irreducible(rep: &mut Report) {
    let cfg = rep.cfg;
    let q = cfg.p;
    for d in 1..cfg.level {
        for which in ["trivial", "delta"] {
            rep.claim(
                format!(
                    "S_{d}(X_(p^-{d}), theta = {which}) is irreducible of degree (q^2-1)q^{} and depth {d}",
                    d - 1
                ),
                "irreducibility of the depth-d components",
                || {
                    let s = cfg.setting_at(d + 1)?;
                    let theta = center_characters(s.torus())?
                        .into_iter()
                        .find(|c| c.0 == which)
                        .unwrap()
                        .1;
                    let sd = build_s_d(&s, nilpotent_datum(&s, 1, d, &theta)?)?;
                    let degree = sd.character.degree().round() as u64;
                    let depth = sd.character.rep_depth(s.level())?.depth;
                    let norm = sd.character.norm_sq();
                    let ok = degree == (q * q - 1) * q.pow(d - 1) && depth == d && (norm - 1.0).abs() < 1e-6;
                    Ok((ok, json!({ "degree": degree, "depth": depth, "self_inner": norm })))
                },
            );
        }
    }
}

fn normalizers(rep: &mut Report) {
    let cfg = rep.cfg;
    for d in 1..cfg.level {
        let run = |rep: &mut Report, which: &str| {
            let (claim, citation) = match which {
                "cent" => (
                    format!("closed-form T(X) equals the brute centralizer, d = {d}"),
                    "centralizers of nilpotent elements",
                ),
                "full" => (
                    format!("normalizer of Psi_X in K equals T(X)K_{}, d = {d}", ceil_half(d)),
                    "normalizer of Psi_X",
                ),
                _ => (
                    format!("normalizer of Psi_X on J_{d} within T(X)K_{} equals T(X)J_{d}", d / 2),
                    "normalizer of Psi_X on J_d for even d",
                ),
            };
            rep.claim(claim, citation, || {
                let l = cfg.level_at(d + 1)?;
                let ctx = l.ctx();
                let x = NilpotentLabel::new(ctx, 1, -(d as i32))?.element(ctx);
                let tx = Arc::new(centralizer(l.table(), &x)?);
                match which {
                    "cent" => {
                        let brute = fixed_points(l.full(), &x)?;
                        Ok((
                            brute.same_members(&tx),
                            json!({ "order": tx.order(), "brute": brute.order() }),
                        ))
                    }
                    "full" => {
                        let domain = l.subgroup(Named::Filtration(d / 2 + 1))?;
                        let nz = normalizer_of_char(l.full(), &domain, |k| psi_x(ctx, &x, k))?;
                        let expect = tx.product(&*l.subgroup(Named::Filtration(ceil_half(d)))?, "T(X)K")?;
                        Ok((
                            nz.same_members(&expect),
                            json!({ "normalizer": nz.order(), "expected": expect.order() }),
                        ))
                    }
                    _ => {
                        let ambient = tx.product(&*l.subgroup(Named::Filtration(d / 2))?, "T(X)K")?;
                        let domain = l.subgroup(Named::J(d))?;
                        let nz = normalizer_of_char(&ambient, &domain, |k| psi_x(ctx, &x, k))?;
                        let expect = tx.product(&domain, "T(X)J")?;
                        Ok((
                            nz.same_members(&expect),
                            json!({ "normalizer": nz.order(), "expected": expect.order() }),
                        ))
                    }
                }
            });
        };
        run(rep, "cent");
        run(rep, "full");
        if d % 2 == 0 {
            run(rep, "even");
        }
    }
}

fn hensel(rep: &mut Report) {
    let cfg = rep.cfg;
    for s in [1, 2].into_iter().filter(|&s| s < cfg.level) {
        rep.claim(
            format!("{} random admissible inputs lift into T(X) modulo K_{s}", cfg.trials),
            "lifting into the centralizer",
            || {
                let ctx = cfg.ctx(cfg.level)?;
                let p = cfg.p as i64;
                let mus = [
                    ctx.base(p),
                    ctx.base(cfg.eps as i64 * p),
                    ctx.base(p * p),
                    ctx.base(cfg.eps as i64 * p * p),
                ];
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + s as u64);
                let mut good = 0;
                for i in 0..cfg.trials {
                    let mu = mus[i as usize % mus.len()];
                    let k = random_admissible(&ctx, mu, s, &mut rng);
                    let ok = hensel_lift(&ctx, &k, mu, s).is_ok_and(|lifted| {
                        ctx.is_unitary(&lifted)
                            && Shape::Special { mu }.contains(&ctx, &lifted)
                            && ctx.in_congruence(&ctx.mat_mul(&ctx.mat_inv_unitary(&lifted), &k), s)
                    });
                    good += ok as u32;
                }
                Ok((
                    good == cfg.trials,
                    json!({ "passed": good, "trials": cfg.trials, "level": cfg.level }),
                ))
            },
        );
    }
}

fn orbits(rep: &mut Report) {
    let cfg = rep.cfg;
    let n = cfg.level.max(2);
    for (u1, e1, u2, e2) in [(1, 0, 2, 0), (1, 0, 1, 1), (1, 1, 2, 1)] {
        rep.claim(
            format!("brute search in K/K_{n}: X_({u1}p^{e1}) ~K X_({u2}p^{e2}) iff equal valuations"),
            "K-orbits of nilpotent elements",
            || {
                let l = cfg.level_at(n)?;
                let ctx = l.ctx();
                let (a, b) = (NilpotentLabel::new(ctx, u1, e1)?, NilpotentLabel::new(ctx, u2, e2)?);
                let found = brute_conjugator_search(l.full(), &a.element(ctx), &b.element(ctx)).is_some();
                let rule = nilpotent_orbit_equiv(a, b, OrbitMode::K);
                Ok((found == rule, json!({ "brute": found, "rule": rule })))
            },
        );
    }
    rep.claim(
        "G-orbit parity rule agrees with a norm search on 20 labels",
        "G-orbits of nilpotent elements",
        || {
            let ctx = cfg.ctx(n)?;
            let units: Vec<i64> = (1..cfg.p as i64).take(2).collect();
            let mut labels = Vec::new();
            for exp in -5..5 {
                for &u in &units {
                    labels.push(NilpotentLabel::new(&ctx, u, exp)?);
                }
            }
            labels.truncate(20);
            let mut mismatches = Vec::new();
            for &a in &labels {
                for &b in &labels {
                    let rule = nilpotent_orbit_equiv(a, b, OrbitMode::G);
                    let brute = norm_conjugator_search(&ctx, a, b).is_some();
                    if rule != brute {
                        mismatches.push(format!("{a:?} {b:?}"));
                    }
                }
            }
            Ok((
                mismatches.is_empty(),
                json!({ "labels": labels.len(), "mismatches": mismatches }),
            ))
        },
    );
}

fn near_identity(rep: &mut Report) {
    let cfg = rep.cfg;
    for which in ["trivial", "delta"] {
        rep.claim(
            format!("Res_K1 of the depth-zero principal series with theta = {which} is (q+1)1 + tau sums"),
            "near-identity expansion",
            || {
                let s = cfg.setting_at(cfg.level)?;
                let torus = s.torus();
                let theta = center_characters(torus)?.into_iter().find(|c| c.0 == which).unwrap().1;
                let chi = torus
                    .characters()
                    .find(|c| {
                        let prof = torus.depth_profile(c);
                        prof.minimal && prof.depth == 0 && torus.central_character(c).is_ok_and(|t| t == theta)
                    })
                    .ok_or(Error::NotRealizable)?;
                let rec = near_identity_expansion(&s, &chi)?;
                Ok((
                    rec.passed,
                    serde_json::to_value(&rec).map_err(|e| Error::Serialization(e.to_string()))?,
                ))
            },
        );
    }
    for r in 0..4 {
        rep.claim(
            format!("fixed-dimension bookkeeping at r = {r} gives multiplicity q+1"),
            "near-identity expansion, dimensions",
            || {
                let rec = near_identity_dimensions(cfg.p, r);
                Ok((
                    rec.passed,
                    serde_json::to_value(&rec).map_err(|e| Error::Serialization(e.to_string()))?,
                ))
            },
        );
    }
}

fn identification(rep: &mut Report) {
    let cfg = rep.cfg;
    for d in 1..cfg.level {
        for which in ["trivial", "delta"] {
            rep.claim(
                format!("S_{d}(X_(eps^-1 p^-{d}), theta) = S_{d}(X_(p^-{d}), theta) for theta = {which}"),
                "identification of inducing data, depth zero",
                || {
                    let s = cfg.setting_at(d + 1)?;
                    let ctx = s.ctx();
                    let theta = center_characters(s.torus())?
                        .into_iter()
                        .find(|c| c.0 == which)
                        .unwrap()
                        .1;
                    let eps_inv = ctx.inv(ctx.base(cfg.eps as i64))?.re as i64;
                    let a = build_s_d(&s, nilpotent_datum(&s, eps_inv, d, &theta)?)?;
                    let b = build_s_d(&s, nilpotent_datum(&s, 1, d, &theta)?)?;
                    let dev = a.character.max_deviation(&b.character)?;
                    Ok((dev < 1e-6, json!({ "max_deviation": dev, "rung": "full-character" })))
                },
            );
        }
    }
    rep.claim(
        "r = 1, d = 3: inducing data of Y_chi and X_(eps^-1 p^-3) agree",
        "identification of inducing data, d > 2r",
        || {
            let torus = Torus::shared(&cfg.ctx(2)?)?;
            let chi = torus
                .characters()
                .find(|c| {
                    let prof = torus.depth_profile(c);
                    prof.minimal && prof.depth == 1
                })
                .ok_or(Error::NotRealizable)?;
            let rec = key_identification(&torus, &chi, 3, cfg.budget)?;
            Ok((
                rec.passed,
                serde_json::to_value(&rec).map_err(|e| Error::Serialization(e.to_string()))?,
            ))
        },
    );
}

fn structural(rep: &mut Report) {
    let cfg = rep.cfg;
    rep.claim(
        "enumerated |K/K_1| decides between q(q+1)(q-1)^2 and q(q-1)(q+1)^2",
        "order of the residual unitary group",
        || {
            let rec = structural_order_check(cfg.p, cfg.eps, cfg.budget)?;
            Ok((
                rec.passed,
                serde_json::to_value(&rec).map_err(|e| Error::Serialization(e.to_string()))?,
            ))
        },
    );
}
