//! Runs every acceptance criterion and prints one PASS/FAIL line each.
//! Exits nonzero if any criterion fails.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use qfock::report::Check;
use qfock::suite::{run_suite, SectionReport, SuiteConfig, SuiteReport};

static FAILED: AtomicUsize = AtomicUsize::new(0);

fn report() -> &'static SuiteReport {
    static R: OnceLock<SuiteReport> = OnceLock::new();
    R.get_or_init(|| run_suite(&SuiteConfig::default()).expect("suite runs"))
}

fn section(key: &str) -> &'static SectionReport {
    report()
        .section(key)
        .unwrap_or_else(|| panic!("missing section {key}"))
}

fn verdict(n: u32, title: &str, failures: &[String]) {
    let line = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n:>2} {line}: {title}");
    for f in failures {
        println!("    {f}");
    }
    if !failures.is_empty() {
        FAILED.fetch_add(1, Ordering::Relaxed);
    }
}

fn failed(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("{}: {:e} > {:e}", c.name, c.deviation, c.bound))
        .collect()
}

fn section_verdict(n: u32, key: &str) {
    section_verdict_with(n, key, Vec::new());
}

fn section_verdict_with(n: u32, key: &str, mut f: Vec<String>) {
    let s = section(key);
    if s.checks.is_empty() {
        f.push("no checks ran".into());
    }
    f.extend(failed(&s.checks));
    f.extend(failed(&s.stated));
    verdict(n, s.title, &f);
}

fn criterion_01_quaternion_layer() {
    section_verdict(1, "quaternion");
}

fn criterion_02_left_multiplication() {
    section_verdict(2, "left_multiplication");
}

fn criterion_03_ladder_and_bracket_table() {
    let s = section("ladder");
    let mut f = Vec::new();
    if s.stated.len() != 8 {
        f.push(format!("{} tabulated brackets, expected 8", s.stated.len()));
    }
    section_verdict_with(3, "ladder", f);
}

fn criterion_04_displacement() {
    section_verdict(4, "displacement");
}

fn criterion_05_squeeze() {
    let s = section("squeeze");
    let mut f = Vec::new();
    // 3 axes x 4 angles x 3 radii, each with basic and conjugation checks
    if s.checks.len() < 36 * 6 {
        f.push(format!("only {} squeeze checks", s.checks.len()));
    }
    section_verdict_with(5, "squeeze", f);
}

fn criterion_06_pure_squeezed_states() {
    section_verdict(6, "pure_squeezed");
}

fn criterion_07_discrepancy_ledger() {
    let s = section("ledger");
    let mut f = failed(&s.checks);
    if report().ledger().is_empty() {
        f.push("ledger is empty".into());
    }
    for e in &s.ledger {
        if !e.measured_deviation.is_finite() && !e.identity.starts_with(qfock::suite::LEDGER_SCS) {
            f.push(format!("{}: non-finite deviation", e.identity));
        }
    }
    verdict(7, s.title, &f);
}

fn criterion_08_slice_lab() {
    let s = section("slice_lab");
    let mut f = failed(&s.checks);
    let ledgered = s.ledger.len();
    let rows = report().slice_rows.len();
    if s.checks
        .iter()
        .filter(|c| !c.name.starts_with("hermite_"))
        .count()
        + ledgered
        != rows
    {
        f.push(format!(
            "{rows} closed forms, {} checked, {ledgered} ledgered",
            s.checks.len()
        ));
    }
    verdict(8, s.title, &f);
}

fn criterion_09_quadrature() {
    section_verdict(9, "quadrature");
}

fn criterion_10_determinism() {
    let first = report();
    let second = run_suite(&SuiteConfig::default()).expect("suite runs");
    let mut f = Vec::new();
    let ser = |r: &SuiteReport| {
        (
            serde_json::to_string(&r.ledger()).unwrap(),
            serde_json::to_string(&r.slice_rows).unwrap(),
            serde_json::to_string(&r.quadrature).unwrap(),
        )
    };
    let (a, b) = (ser(first), ser(&second));
    if a.0 != b.0 {
        f.push("ledger differs between runs".into());
    }
    if a.1 != b.1 {
        f.push("slice rows differ between runs".into());
    }
    if a.2 != b.2 {
        f.push("quadrature reports differ between runs".into());
    }
    verdict(10, "determinism", &f);
}

fn main() {
    let criteria: [fn(); 10] = [
        criterion_01_quaternion_layer,
        criterion_02_left_multiplication,
        criterion_03_ladder_and_bracket_table,
        criterion_04_displacement,
        criterion_05_squeeze,
        criterion_06_pure_squeezed_states,
        criterion_07_discrepancy_ledger,
        criterion_08_slice_lab,
        criterion_09_quadrature,
        criterion_10_determinism,
    ];
    for c in criteria {
        c();
    }
    let failed = FAILED.load(Ordering::Relaxed);
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
