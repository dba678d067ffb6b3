//! Parse a scenario file, print diagnostics or the machine-readable report.
//!
//! `cargo run --example scenario_file -- scenarios/replicator.scn`

use genprob::outcome_probabilities;
use genprob::scenario_io::{parse_scenario, render_report, ReportFormat};

const FALLBACK: &str = "\
scenario inline
prestates m
situation s bits 4
result a prestate m
result b prestate m
outcome seen = a
outcome unseen = b
";

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).unwrap_or_else(|e| {
            eprintln!("{path}: {e}");
            std::process::exit(1)
        }),
        None => FALLBACK.to_string(),
    };

    let doc = parse_scenario(&text);
    for d in &doc.diagnostics {
        eprintln!("{d}");
    }
    let Some(scenario) = doc.scenario else {
        std::process::exit(1)
    };
    match outcome_probabilities(&scenario) {
        Ok(table) => print!("{}", render_report(&table, ReportFormat::Machine)),
        Err(e) => {
            eprintln!("{}: {e}", e.code());
            std::process::exit(1)
        }
    }
}
