//! Runs the quick theorem checks and prints their JSON reports.
//!
//! `cargo run --release --example verify_reports -- [theorem id ...]`

use polydots::verify::{run, VerifyParams};

fn main() {
    let ids: Vec<String> = std::env::args().skip(1).collect();
    let defaults = ["pick-shoelace", "fig2-census", "turn-identity", "nested-diamond", "single-turn-claims", "solver-sanity"];
    let ids: Vec<&str> = if ids.is_empty() { defaults.to_vec() } else { ids.iter().map(String::as_str).collect() };
    let params = VerifyParams::default();
    for id in ids {
        match run(id, &params) {
            Ok(report) => {
                let verdict = if report.passed() { "pass" } else { "FAIL" };
                println!("{id}: {verdict}, {} checked, {} violations", report.checked, report.violations.len());
                println!("{}", report.to_json());
            }
            Err(e) => eprintln!("{id}: {e}"),
        }
    }
}
