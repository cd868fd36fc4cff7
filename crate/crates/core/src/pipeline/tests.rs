use super::*;
use crate::digraph::{gen_complete, gen_extremal, gen_random_semidegree};

#[test]
fn complete_sixty() {
    let d = gen_complete(60);
    let (c, report) = find_rs_hamiltonian(&d, &PipelineConfig::default()).unwrap();
    assert!(validate_run(&d, &c));
    assert_eq!(
        report.outcome,
        Outcome::Success {
            cycle_order: 60,
            verified: true
        }
    );
    assert!(report.meets_degree_hypothesis);
}

#[test]
fn dense_random_runs_and_reproduces() {
    let d = gen_random_semidegree(120, 0.8, 5).unwrap();
    let cfg = PipelineConfig::default().with_seed(11);
    let a = find_rs_hamiltonian(&d, &cfg);
    let b = find_rs_hamiltonian(&d, &cfg);
    match (a, b) {
        (Ok((c1, r1)), Ok((c2, r2))) => {
            assert!(validate_run(&d, &c1));
            assert_eq!(c1, c2);
            assert_eq!(r1.without_timings(), r2.without_timings());
        }
        (Err(e1), Err(e2)) => {
            assert_eq!(e1.stage, e2.stage);
            assert_eq!(e1.report.without_timings(), e2.report.without_timings());
        }
        _ => panic!("same seed gave different outcomes"),
    }
}

#[test]
fn too_small_is_a_precondition_failure() {
    let d = gen_complete(20);
    let e = find_rs_hamiltonian(&d, &PipelineConfig::default()).unwrap_err();
    assert_eq!(e.stage, Stage::Precondition);
    assert!(e.report.attempts.is_empty());
}

#[test]
fn extremal_yields_a_report() {
    // δ⁰ = 2n/3 - 1 misses the hypothesis; either outcome is allowed, but a
    // returned cycle must be genuine
    let d = gen_extremal(12).unwrap();
    match find_rs_hamiltonian(&d, &PipelineConfig::default()) {
        Ok((c, _)) => assert!(validate_run(&d, &c)),
        Err(e) => {
            assert!(!e.report.meets_degree_hypothesis);
            assert_eq!(e.report.outcome, Outcome::Failure { stage: e.stage });
            assert_eq!(e.report.attempts.len(), 5);
        }
    }
}

#[test]
fn paper_scale_is_vacuous_at_desk_n() {
    let d = gen_complete(60);
    let cfg = PipelineConfig {
        paper_scale: true,
        retries: 0,
        family_retries: 0,
        ..PipelineConfig::default()
    };
    let e = find_rs_hamiltonian(&d, &cfg).unwrap_err();
    assert_eq!(e.stage, Stage::Family);
}

#[test]
fn validate_run_rejects_bad_cycles() {
    let d = gen_complete(8);
    let good = RsCycle::certify(&d, (0..8).collect()).unwrap();
    assert!(validate_run(&d, &good));
    let short = RsCycle::certify(&d, (0..7).collect()).unwrap();
    assert!(!validate_run(&d, &short));
    let mut broken = d.clone();
    broken.remove_arc(2, 0); // the back arc over 0 1 2
    assert!(!validate_run(&broken, &good));
}

#[test]
fn config_round_trips() {
    let cfg = PipelineConfig {
        gamma: 0.05,
        seed: 99,
        reservoir_connector_cap: Some(30),
        ..PipelineConfig::default()
    };
    let text = cfg.to_toml();
    assert_eq!(PipelineConfig::from_toml(&text).unwrap(), cfg);
    assert!(PipelineConfig::from_toml("gamma = 0.5").is_err());
    assert!(PipelineConfig::from_toml("bogus = 1").is_err());
    let partial = PipelineConfig::from_toml("seed = 3\nretries = 1").unwrap();
    assert_eq!(partial.seed, 3);
    assert_eq!(partial.gamma, 0.1);
}

#[test]
fn report_round_trips() {
    let d = gen_complete(40);
    let (_, report) = find_rs_hamiltonian(&d, &PipelineConfig::default()).unwrap();
    let back = RunReport::from_json(&report.to_json()).unwrap();
    assert_eq!(back, report);
    assert!(report.to_json().contains(REPORT_SCHEMA));
}
