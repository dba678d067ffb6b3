//! Situations given as machine programs: each program's first record is
//! the observer's prestate and the rest are its results. Entropies come
//! from the shortest program producing the same output.

use genprob::outcome_probabilities;
use genprob::scenario_io::{parse_scenario, render_report, ReportFormat};

const SOURCE: &str = r#"
scenario coin
prestates 1
situation heads program "OUT1 SEP OUT0 HALT"
situation tails program "OUT1 SEP OUT1 SEP OUT0 OUT0 HALT"
outcome zero = 0
outcome other = 1 00
"#;

fn main() {
    let doc = parse_scenario(SOURCE);
    for d in &doc.diagnostics {
        eprintln!("{d}");
    }
    let scenario = doc.scenario.expect("scenario parses");
    for sit in &scenario.situations {
        println!("{} has H = {} bits", sit.id, sit.entropy_bits);
    }
    let table = outcome_probabilities(&scenario).unwrap();
    print!("{}", render_report(&table, ReportFormat::Table));
}
