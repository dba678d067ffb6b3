//! One situation copies the observer three times; two copies see a dead
//! cat. Each copy is equally likely, so the dead-cat outcome gets 2/3.

use genprob::scenario_io::{render_report, ReportFormat};
use genprob::{outcome_probabilities, Scenario, Situation};

fn main() {
    let scenario = Scenario::new("replicator")
        .prestates(["m"])
        .situation(
            Situation::new("s", 3)
                .result("cat-dead-1", "m")
                .result("cat-dead-2", "m")
                .result("cat-alive", "m"),
        )
        .outcome("cat-dead", ["cat-dead-1", "cat-dead-2"])
        .outcome("cat-alive", ["cat-alive"]);

    let table = outcome_probabilities(&scenario).unwrap();
    print!("{}", render_report(&table, ReportFormat::Table));
}
