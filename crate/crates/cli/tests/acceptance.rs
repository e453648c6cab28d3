//! Acceptance criteria 1-11: one PASS/FAIL line each, non-zero exit if any
//! criterion fails.

use std::process::ExitCode;

use bec_impurity::rates::BoxOracleConfig;
use bec_impurity_cli::checks;

fn main() -> ExitCode {
    let budget = BoxOracleConfig::new(1.0, 1.0, 1.0).max_points;
    let results = checks::run_all(budget);
    println!();
    println!("acceptance criteria");
    for c in &results {
        println!("{c}");
    }
    let failed = results.iter().filter(|c| !c.passed).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    println!();
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
