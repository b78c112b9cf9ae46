use oppo_core::group::Series;
use oppo_core::pipeline::{
    run_verification, stability_range_induction, Cache, RangeError, Report, RunConfig, Status, StabilityRangeRule, SuiteKind,
};
use proptest::prelude::*;

const KMAX: usize = 12;

fn thresholds(rule: &StabilityRangeRule) -> Vec<i64> {
    rule.thresholds[1..].to_vec()
}

#[test]
fn special_linear_from_infinite_centre() {
    let sl = stability_range_induction(&StabilityRangeRule::sah(KMAX), Series::SL).unwrap();
    assert_eq!(thresholds(&sl), (1..=KMAX as i64).map(|k| 2 * k - 1).collect::<Vec<_>>());
    assert_eq!(sl.closed_form().to_string(), "n >= 2k-1");
}

#[test]
fn unitary_from_any_division_ring() {
    let u = stability_range_induction(&StabilityRangeRule::van_der_kallen(KMAX), Series::U).unwrap();
    assert_eq!(thresholds(&u), (1..=KMAX as i64).map(|k| 2 * k).collect::<Vec<_>>());
    assert_eq!(u.closed_form().to_string(), "n >= 2k");
}

#[test]
fn unitary_and_orthogonal_from_infinite_centre() {
    for series in [Series::U, Series::SO] {
        let r = stability_range_induction(&StabilityRangeRule::sah(KMAX), series).unwrap();
        let expected: Vec<i64> = (1..=KMAX as i64).map(|k| if k == 1 { 2 } else { k }).collect();
        assert_eq!(thresholds(&r), expected, "{series}");
        assert_eq!(r.closed_form().to_string(), "n >= 2 for k = 1; n >= k for k >= 2");
    }
}

#[test]
fn orthogonal_from_any_division_ring_matches_unitary() {
    let gl = StabilityRangeRule::van_der_kallen(KMAX);
    assert_eq!(
        stability_range_induction(&gl, Series::SO).unwrap().thresholds,
        stability_range_induction(&gl, Series::U).unwrap().thresholds
    );
}

#[test]
fn non_monotone_input_is_rejected() {
    let bad = StabilityRangeRule { name: "bad".into(), thresholds: vec![0, 3, 1] };
    assert!(matches!(stability_range_induction(&bad, Series::U), Err(RangeError::NotMonotone { k: 2, .. })));
    assert!(matches!(
        stability_range_induction(&StabilityRangeRule::sah(3), Series::GL),
        Err(RangeError::Unsupported(Series::GL))
    ));
}

proptest! {
    // Weaker input never yields a stronger conclusion.
    #[test]
    fn induction_is_monotone_in_the_input(slope in 1i64..4, offset in 0i64..3, extra in 0i64..3) {
        let gl = StabilityRangeRule::linear("a", slope, offset, 8);
        let weaker = StabilityRangeRule::linear("b", slope, offset + extra, 8);
        for series in [Series::SL, Series::U, Series::SO] {
            let a = stability_range_induction(&gl, series).unwrap();
            let b = stability_range_induction(&weaker, series).unwrap();
            prop_assert!(a.check_monotone().is_ok());
            prop_assert!(a.thresholds.iter().zip(&b.thresholds).all(|(x, y)| x <= y));
        }
    }
}

fn gl3_config() -> RunConfig {
    RunConfig::new(Series::GL, 1, 2)
}

#[test]
fn gl3_f2_full_run_passes() {
    let report = run_verification(&gl3_config()).unwrap();
    for suite in &report.suites {
        for c in &suite.claims {
            assert_eq!(c.status, Status::Pass, "{}/{}: {:?}", suite.name, c.name, c.witness);
        }
    }
    assert_eq!(report.exit_code(), 0);
    let names: Vec<&str> = report.suites.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["geometry", "sphericity", "exactness", "e1", "lhs"]);
    // Every ordering of the two types of A_2.
    assert_eq!(report.suite("exactness").unwrap().claims.len(), 3);
    let e1 = report.suite("e1").unwrap();
    assert_eq!(e1.claim("e1[0,2]").unwrap().detail["value"], "Z/4");
    assert_eq!(e1.claim("e1[1,1]").unwrap().detail["value"], "Z/2");
    assert!(report.suites.iter().flat_map(|s| &s.claims).all(|c| !c.verified_range.is_empty()));
}

#[test]
fn over_cap_instance_is_skipped_not_failed() {
    let mut config = RunConfig::new(Series::GL, 1, 5);
    config.suites = vec![SuiteKind::Geometry, SuiteKind::Sphericity];
    let report = run_verification(&config).unwrap();
    assert_eq!(report.status, Status::Skipped);
    assert_eq!(report.exit_code(), 2);
    assert!(report.suites.iter().flat_map(|s| &s.claims).all(|c| c.status == Status::Skipped && c.witness.is_some()));
}

#[test]
fn tight_budget_skips_degree_two_but_keeps_degree_one() {
    let mut config = gl3_config();
    config.suites = vec![SuiteKind::E1];
    config.budget = 50_000;
    let report = run_verification(&config).unwrap();
    let e1 = report.suite("e1").unwrap();
    assert_eq!(e1.claim("e1[0,2]").unwrap().status, Status::Skipped);
    for name in ["e1[0,0]", "e1[0,1]", "e1[1,0]", "e1[1,1]", "e1.row_zero", "e1.cone_total[0]", "e1.cone_total[1]", "e1.quotient_total[0]", "e1.quotient_total[1]"] {
        assert_eq!(e1.claim(name).unwrap().status, Status::Pass, "{name}");
    }
    assert_eq!(report.exit_code(), 2);
}

#[test]
fn warm_cache_reproduces_the_report_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = gl3_config();
    config.suites = vec![SuiteKind::Geometry, SuiteKind::Sphericity, SuiteKind::Lhs];
    config.cache = Some(dir.path().join("cache"));
    config.report = Some(dir.path().join("cold.json"));
    let cold = run_verification(&config).unwrap();
    let cache = Cache::open(dir.path().join("cache")).unwrap();
    assert_eq!(cache.entries().unwrap().len(), 3);
    config.report = Some(dir.path().join("warm.json"));
    let warm = run_verification(&config).unwrap();
    assert_eq!(cold, warm);
    let (a, b) = (std::fs::read(dir.path().join("cold.json")).unwrap(), std::fs::read(dir.path().join("warm.json")).unwrap());
    assert_eq!(a, b);
    let parsed: Report = serde_json::from_slice(&a).unwrap();
    assert_eq!(parsed, cold);
    assert_eq!(cache.clear().unwrap(), 3);
    assert!(cache.entries().unwrap().is_empty());
}

#[test]
fn invalid_configuration_is_rejected() {
    let mut config = gl3_config();
    config.budget = 0;
    assert!(run_verification(&config).is_err());
    config = RunConfig::new(Series::GL, 0, 2);
    assert!(run_verification(&config).is_err());
}
