use unibranch_core::verify::{all_passed, run_suite, Suite, VerifyConfig};
use unibranch_core::Error;

fn run(suite: Suite, p: u64, eps: u64, n: u32) -> Vec<unibranch_core::verify::ClaimLine> {
    let lines = run_suite(suite, &VerifyConfig::new(p, eps, n)).unwrap();
    for l in lines.iter().filter(|l| !l.passed) {
        eprintln!("{}", serde_json::to_string(l).unwrap());
    }
    lines
}

#[test]
fn double_cosets_at_level_two() {
    let lines = run(Suite::DoubleCosets, 3, 2, 2);
    assert_eq!(lines.len(), 4);
    assert!(all_passed(&lines));
}

#[test]
fn intertwining_dims_cover_every_character() {
    let lines = run(Suite::IntertwiningDims, 3, 2, 2);
    assert_eq!(lines.len(), 72);
    assert!(all_passed(&lines));
}

#[test]
fn sd_irreducible_through_depth_two() {
    let lines = run(Suite::SdIrreducible, 3, 2, 3);
    assert_eq!(lines.len(), 4);
    assert!(all_passed(&lines));
}

#[test]
fn normalizers_through_depth_two() {
    let lines = run(Suite::Normalizers, 3, 2, 3);
    assert_eq!(lines.len(), 5);
    assert!(all_passed(&lines));
}

#[test]
fn hensel_at_level_four() {
    let lines = run(Suite::Hensel, 3, 2, 4);
    assert_eq!(lines.len(), 2);
    assert!(all_passed(&lines));
}

#[test]
fn orbits_at_level_two() {
    let lines = run(Suite::Orbits, 3, 2, 2);
    assert_eq!(lines.len(), 4);
    assert!(all_passed(&lines));
}

#[test]
fn near_identity_at_level_two() {
    let lines = run(Suite::NearIdentity, 3, 2, 2);
    assert_eq!(lines.len(), 6);
    assert!(all_passed(&lines));
}

#[test]
fn identification_at_level_two() {
    let lines = run(Suite::Identification, 3, 2, 2);
    assert_eq!(lines.len(), 3);
    assert!(all_passed(&lines));
}

#[test]
fn structural_at_three_and_five() {
    assert!(all_passed(&run(Suite::Structural, 3, 2, 1)));
    assert!(all_passed(&run(Suite::Structural, 5, 2, 1)));
}

#[test]
fn suite_names_round_trip() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!(matches!("no-such-suite".parse::<Suite>(), Err(Error::UnknownSuite(_))));
    assert!(matches!(
        run_suite(Suite::Normalizers, &VerifyConfig::new(3, 2, 1)),
        Err(Error::LevelTooLow { have: 1, need: 2 })
    ));
    assert!(matches!(
        run_suite(Suite::Orbits, &VerifyConfig::new(2, 1, 1)),
        Err(Error::EvenResidualChar(2))
    ));
}
