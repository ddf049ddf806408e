//! Acceptance suite: every criterion at full size and stated tolerance.
//!
//! Each test writes one PASS/FAIL line per criterion (plus one line per check)
//! straight to stdout so the lines show up without `--nocapture`. Criteria
//! run one at a time so the wall-clock budgets are not skewed by each other.

use std::io::Write;
use std::sync::Mutex;

use monogamy_lab::verify::{run_criterion, Check, VerifyConfig};

static SERIAL: Mutex<()> = Mutex::new(());

fn run(id: &str) -> Vec<Check> {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let checks = run_criterion(id, &VerifyConfig::default());
    let passed = checks.iter().filter(|c| c.passed).count();
    let verdict = if passed == checks.len() {
        "PASS"
    } else {
        "FAIL"
    };
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "acceptance criterion {id}: {verdict} ({passed}/{} checks)",
        checks.len()
    )
    .unwrap();
    for c in &checks {
        writeln!(out, "    {}", c.summary()).unwrap();
    }
    checks
}

fn assert_all_pass(id: &str) {
    let failed: Vec<String> = run(id)
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.summary())
        .collect();
    assert!(
        failed.is_empty(),
        "criterion {id} failed:\n{}",
        failed.join("\n")
    );
}

#[test]
fn criterion_01_c_max() {
    assert_all_pass("1");
}

#[test]
fn criterion_02_liu_bounds() {
    assert_all_pass("2");
}

#[test]
fn criterion_03_sc_bound_and_w_extremality() {
    assert_all_pass("3");
}

#[test]
fn criterion_04_mixed_example() {
    assert_all_pass("4");
}

#[test]
fn criterion_05_generalized_w() {
    assert_all_pass("5");
}

#[test]
fn criterion_06_discord_sum() {
    assert_all_pass("6");
}

#[test]
fn criterion_07a_product_spectrum() {
    assert_all_pass("7a");
}

/// Known failure. The inequality does not follow from equal-or-larger sums
/// for a convex increasing `f` (e.g. `(½,½,½)` against `(1,½,0)` with `x²`),
/// and `E(√y)` is concave on `[0, 1]` so it fails the precondition outright.
/// The check is run as specified and is expected to report FAIL.
#[test]
#[should_panic(expected = "criterion 7b failed")]
fn criterion_07b_convexity_transfer() {
    assert_all_pass("7b");
}

#[test]
fn criterion_07c_lu_rank() {
    assert_all_pass("7c");
}

#[test]
fn criterion_07d_ckw_residual() {
    assert_all_pass("7d");
}

#[test]
fn criterion_08_stationarity() {
    assert_all_pass("8");
}

#[test]
fn criterion_09_oracle_equivalence() {
    assert_all_pass("9");
}

#[test]
fn criterion_10_uniqueness_probe() {
    assert_all_pass("10");
}
