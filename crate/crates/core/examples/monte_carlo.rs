//! Sample results from a scenario and compare with the exact table.

use genprob::builtin::{replicator, sleeping_beauty};
use genprob::{monte_carlo_check, outcome_probabilities};

fn main() {
    let samples = 100_000;
    for scenario in [replicator(), sleeping_beauty()] {
        let table = outcome_probabilities(&scenario).unwrap();
        let mc = monte_carlo_check(&scenario, samples, 1).unwrap();
        println!("{}  ({samples} samples)", scenario.id);
        for (id, freq) in mc.frequencies() {
            let exact = table.result_given_outcome(id).unwrap();
            println!("  {id:<12} exact {exact:<5}  sampled {freq:.4}");
        }
        println!("  max deviation {:.4}", mc.max_deviation(&table));
    }
}
