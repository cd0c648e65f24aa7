//! Acceptance battery. Each criterion runs at full strength, prints its
//! one-line verdict, and fails the build if the verdict is not a pass.
//! Criterion 10 drives the installed binary end to end.

use std::process::Command;
use std::time::Instant;

use glinf::sweep::{
    c1_formula_cross_validation, c2_quadratic_form, c3_finite_rank_traces,
    c4_characteristic_identity, c5_reduced_identities, c6_split_casimir, c7_propositions,
    c8_oracle_integrity, c9_tensor_layer, CriterionOutcome, ModuleCache, SweepConfig,
};

fn report(outcome: CriterionOutcome) {
    println!("{outcome}");
    assert!(
        outcome.passed,
        "criterion {} failed: {}",
        outcome.id, outcome.detail
    );
}

#[test]
fn criterion_01_formula_cross_validation() {
    report(c1_formula_cross_validation(
        &SweepConfig::default(),
        &mut ModuleCache::default(),
    ));
}

#[test]
fn criterion_02_quadratic_form_consistency() {
    report(c2_quadratic_form(&SweepConfig::default()));
}

#[test]
fn criterion_03_finite_rank_trace_formula() {
    report(c3_finite_rank_traces(
        &SweepConfig::default(),
        &mut ModuleCache::default(),
    ));
}

#[test]
fn criterion_04_characteristic_identity() {
    report(c4_characteristic_identity(&SweepConfig::default()));
}

#[test]
fn criterion_05_reduced_identities() {
    report(c5_reduced_identities(&SweepConfig::default()));
}

#[test]
fn criterion_06_split_casimir_identity() {
    report(c6_split_casimir(&SweepConfig::default()));
}

#[test]
fn criterion_07_entry_commutators_and_tails() {
    report(c7_propositions(
        &SweepConfig::default(),
        &mut ModuleCache::default(),
    ));
}

#[test]
fn criterion_08_oracle_integrity() {
    report(c8_oracle_integrity(
        &SweepConfig::default(),
        &mut ModuleCache::default(),
    ));
}

#[test]
fn criterion_09_tensor_layer() {
    report(c9_tensor_layer(&SweepConfig::default()));
}

#[test]
fn criterion_10_end_to_end_sweep() {
    let start = Instant::now();
    let output = Command::new(env!("CARGO_BIN_EXE_glinf"))
        .arg("sweep")
        .output()
        .expect("sweep binary runs");
    let seconds = start.elapsed().as_secs_f64();
    let passed = output.status.code() == Some(0) && seconds < 600.0;
    println!(
        "[{}] criterion 10 end-to-end sweep             {seconds:>7.2}s  exit {:?}, budget 600s",
        if passed { "pass" } else { "FAIL" },
        output.status.code()
    );
    assert!(
        output.status.code() == Some(0),
        "sweep exited {:?}:\n{}{}",
        output.status.code(),
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(seconds < 600.0, "sweep took {seconds:.1}s, budget is 600s");
}
