use std::process::ExitCode;
use std::time::Instant;

use geodom::suite::{run_suite, DEFAULT_SEED};

fn main() -> ExitCode {
    let start = Instant::now();
    let report = run_suite(DEFAULT_SEED);
    for c in &report.criteria {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        println!("{verdict} [{}] {} ({} checks, {} failed): {}", c.id, c.name, c.cases, c.failures, c.detail);
    }
    println!("suite finished in {:.1?}", start.elapsed());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
