//! Adding the same number of bits to every situation rescales Z but
//! leaves every probability untouched.

use genprob::builtin::sleeping_beauty;
use genprob::outcome_probabilities;

fn main() {
    let base = sleeping_beauty();
    let reference = outcome_probabilities(&base).unwrap();
    for shift in [0, 1, 5, 14, 40] {
        let table = outcome_probabilities(&base.shift_entropy(shift)).unwrap();
        println!(
            "+{shift:<2} bits  Z = {:<24}  same probabilities: {}",
            table.normalization.to_string(),
            table.probabilities == reference.probabilities
        );
    }
}
