//! Heads wakes the sleeper once, tails twice. Each coin face is one
//! equally short situation, so heads keeps probability 1/2 and the two
//! tails awakenings split the other half.

use genprob::builtin::sleeping_beauty;
use genprob::outcome_probabilities;

fn main() {
    let scenario = sleeping_beauty();
    let table = outcome_probabilities(&scenario).unwrap();

    for o in &table.outcomes {
        println!(
            "p({}) = {}",
            o.id,
            table.outcome_probability(&o.id).unwrap()
        );
    }
    for sit in &scenario.situations {
        for r in &sit.results {
            println!(
                "p({} | outcome) = {}   p({} | {}) = {}",
                r.id,
                table.result_given_outcome(&r.id).unwrap(),
                r.id,
                sit.id,
                table.result_given_situation(&r.id, &sit.id).unwrap()
            );
        }
    }
}
