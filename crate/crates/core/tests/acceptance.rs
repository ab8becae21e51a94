//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

use num_complex::Complex64;
use std::time::{Duration, Instant};
use unibranch_core::branching::{
    build_s_d, canonical_decomposition, intertwining_dimension, key_identification, near_identity_expansion,
    nilpotent_datum, predicted_intertwining, structural_order_check, tau_fixed_dimension_closed,
    tau_fixed_dimension_sum, Parity, PrincipalSeriesSpec, Rung, Setting,
};
use unibranch_core::chars::Torus;
use unibranch_core::classfun::{decompose, induce_fn, irreducibles};
use unibranch_core::group::DEFAULT_BUDGET;
use unibranch_core::verify::{all_passed, run_suite, Suite, VerifyConfig};
use unibranch_core::{Level, Named, Result, RingCtx};

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn setting(n: u32) -> Result<Setting> {
    Setting::shared(&RingCtx::new(3, 2, n)?)
}

fn suite(s: Suite, n: u32) -> Outcome {
    let lines = run_suite(s, &VerifyConfig::new(3, 2, n))?;
    let failed: Vec<&str> = lines.iter().filter(|l| !l.passed).map(|l| l.claim.as_str()).collect();
    Ok((
        all_passed(&lines) && !lines.is_empty(),
        format!("{} claims, failed {:?}", lines.len(), failed),
    ))
}

fn level_one_decomposition() -> Outcome {
    let l = Level::shared(&RingCtx::new(3, 2, 1)?)?;
    let b = l.subgroup(Named::Borel)?;
    let v = induce_fn(&b, |_| Complex64::new(1.0, 0.0), l.classes())?;
    let irr = irreducibles(l.classes())?;
    let dec = decompose(&v, &irr)?;
    let mut parts: Vec<(i64, u64)> = dec
        .multiplicities
        .iter()
        .zip(&irr)
        .filter(|(m, _)| **m != 0)
        .map(|(m, c)| (*m, c.degree().round() as u64))
        .collect();
    parts.sort();
    let ok = (v.degree() - 4.0).abs() < 1e-6
        && (v.norm_sq() - 2.0).abs() < 1e-6
        && parts == vec![(1, 1), (1, 3)]
        && dec.remainder_norm < 1e-6;
    Ok((
        ok,
        format!(
            "degree {:.0}, <V,V> = {:.6}, components {parts:?}",
            v.degree(),
            v.norm_sq()
        ),
    ))
}

fn intertwining_dimensions() -> Outcome {
    let s = setting(2)?;
    let mut counts = [0usize; 4];
    let mut ok = true;
    for chi in s.torus().characters() {
        let spec = PrincipalSeriesSpec::new(s.torus(), chi)?;
        let got = intertwining_dimension(&s, &spec, 2)?;
        ok &= got == predicted_intertwining(&spec.profile, 2);
        let prof = &spec.profile;
        let expect = if prof.true_depth == 0 && prof.split_trivial {
            3
        } else if prof.true_depth == 0 {
            2
        } else {
            1
        };
        ok &= got == expect;
        counts[got.clamp(0, 3) as usize] += 1;
    }
    let total: usize = counts.iter().sum();
    ok &= total == 72;
    Ok((
        ok,
        format!(
            "{total} characters; value 3: {}, 2: {}, 1: {}",
            counts[3], counts[2], counts[1]
        ),
    ))
}

fn sd_irreducible() -> Outcome {
    let mut ok = true;
    let mut found = Vec::new();
    for d in [1u32, 2] {
        let s = setting(d + 1)?;
        let theta = s.torus().central_character(&s.torus().trivial())?;
        let sd = build_s_d(&s, nilpotent_datum(&s, 1, d, &theta)?)?;
        let degree = sd.character.degree().round() as u64;
        ok &= (sd.character.norm_sq() - 1.0).abs() < 1e-6 && degree == [8, 24][d as usize - 1];
        found.push(degree);
    }
    Ok((ok, format!("degrees {found:?}, self inner product 1")))
}

fn full_branching() -> Outcome {
    let s = setting(2)?;
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for chi in s.torus().characters() {
        let c = canonical_decomposition(&s, &chi)?.certificate;
        ok &= c.passed && c.degree_sum == 12 && c.components.iter().all(|x| x.multiplicity == 1);
        worst = worst.max(c.residual_norm);
        count += 1;
    }
    let s3 = setting(3)?;
    let torus = s3.torus();
    let chi = torus
        .characters()
        .find(|c| {
            let p = torus.depth_profile(c);
            p.minimal && p.depth == 1
        })
        .expect("a minimal depth-one character exists");
    let c = canonical_decomposition(&s3, &chi)?.certificate;
    let degrees: Vec<u64> = c.components.iter().map(|x| x.degree).collect();
    ok &= count == 72 && c.passed && degrees == vec![12, 24] && c.degree_sum == 36 && c.residual_norm < 1e-6;
    worst = worst.max(c.residual_norm);
    Ok((
        ok,
        format!("{count} certificates at N=2; N=3 depth one: {degrees:?}; max residual {worst:e}"),
    ))
}

fn orbits() -> Outcome {
    let lines = run_suite(Suite::Orbits, &VerifyConfig::new(3, 2, 2))?;
    let brute: Vec<bool> = lines.iter().take(2).map(|l| l.detail["brute"] == true).collect();
    let ok = all_passed(&lines) && lines.len() == 4 && brute == vec![true, false];
    Ok((
        ok,
        format!(
            "X_1 ~ X_2: {}, X_1 ~ X_p: {}; parity rule on 20 labels",
            brute[0], brute[1]
        ),
    ))
}

fn hensel() -> Outcome {
    let lines = run_suite(Suite::Hensel, &VerifyConfig::new(3, 2, 4))?;
    let counts: Vec<String> = lines
        .iter()
        .map(|l| format!("{}/{}", l.detail["passed"], l.detail["trials"]))
        .collect();
    Ok((all_passed(&lines) && lines.len() == 2, format!("s = 1, 2: {counts:?}")))
}

fn identification() -> Outcome {
    let torus = Torus::shared(&RingCtx::new(3, 2, 2)?)?;
    let chi = torus
        .characters()
        .find(|c| {
            let p = torus.depth_profile(c);
            p.minimal && p.depth == 1
        })
        .expect("a minimal depth-one character exists");
    let rec = key_identification(&torus, &chi, 3, DEFAULT_BUDGET)?;
    let (consistent, detail) = suite(Suite::Identification, 3)?;
    let ok = rec.passed && rec.rung == Rung::InducingData && consistent;
    Ok((
        ok,
        format!(
            "r=1 d=3 {} checks on rung {:?}; depth-zero full equality: {detail}",
            rec.checks.len(),
            rec.rung
        ),
    ))
}

fn near_identity() -> Outcome {
    let s = setting(2)?;
    let torus = s.torus();
    let mut ok = true;
    let mut seen = Vec::new();
    for theta in [torus.central_character(&torus.trivial())?, torus.delta()] {
        let chi = torus
            .characters()
            .find(|c| {
                let p = torus.depth_profile(c);
                p.minimal && p.depth == 0 && torus.central_character(c).is_ok_and(|t| t == theta)
            })
            .expect("theta extends to a depth-zero character");
        let rec = near_identity_expansion(&s, &chi)?;
        let dims: Vec<f64> = rec.fixed_dimensions.iter().skip(1).map(|x| x.1).collect();
        ok &= rec.passed && dims == vec![0.0, 0.0] && rec.residual.is_some_and(|r| r < 1e-6);
        seen.push(rec.residual.unwrap_or(f64::NAN));
    }
    let even = tau_fixed_dimension_closed(3, Parity::Even, 1);
    ok &= even == 24 && tau_fixed_dimension_sum(3, Parity::Even, 1) == 24;
    Ok((ok, format!("residuals {seen:?}; q(q^2-1) at r=1: {even}")))
}

fn structural() -> Outcome {
    let mut ok = true;
    let mut found = Vec::new();
    for (p, eps, order) in [(3, 2, 96), (5, 2, 720)] {
        let rec = structural_order_check(p, eps, DEFAULT_BUDGET)?;
        ok &= rec.passed && rec.enumerated_order == order && rec.matches == "q(q-1)(q+1)^2";
        ok &= rec.borel_indices.iter().all(|&(_, got, want)| got == want);
        found.push(format!("p={p}: {} ({})", rec.enumerated_order, rec.matches));
    }
    Ok((ok, found.join(", ")))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "1 level-one Borel induction is 1 + St",
            level_one_decomposition,
            Some(Duration::from_secs(1)),
        ),
        (
            "2 intertwining dimensions at N=2",
            intertwining_dimensions,
            Some(Duration::from_secs(60)),
        ),
        (
            "3 S_d irreducible of degree 8 and 24",
            sd_irreducible,
            Some(Duration::from_secs(900)),
        ),
        ("4 canonical decompositions at N=2 and N=3", full_branching, None),
        ("5 normalizers of Psi_X", || suite(Suite::Normalizers, 3), None),
        ("6 nilpotent orbits", orbits, None),
        ("7 Hensel lifting, 100 trials", hensel, Some(Duration::from_secs(60))),
        ("8 identification for d > 2r", identification, None),
        ("9 near-identity expansion at r=0", near_identity, None),
        ("10 order of K/K_1 at p=3,5", structural, None),
    ];
    let mut failures = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let (mut ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let took = start.elapsed();
        let mut note = String::new();
        if let Some(limit) = limit.filter(|l| took > *l) {
            ok = false;
            note = format!(" (over the {limit:?} limit)");
        }
        failures += usize::from(!ok);
        println!(
            "{} criterion {name}: {detail} [{:.2}s]{note}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
