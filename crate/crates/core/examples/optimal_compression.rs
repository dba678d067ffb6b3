//! Shortest generating program for each output, found by exhaustive search.

use genprob::enumerator::optimal_compression;
use genprob::mlang::{EvalLimit, Output};

fn main() {
    let depth = 18;
    for target in ["", "1", "11", "1111", "11111111", "0|0|0|0", "10|01"] {
        let out: Output = target.parse().unwrap();
        match optimal_compression(&out, depth, EvalLimit::default()).unwrap() {
            Some(c) => println!(
                "{:<12} {:>2} bits  {}",
                format!("\"{target}\""),
                c.entropy_bits,
                c.program
            ),
            None => println!(
                "{:<12} nothing within {depth} bits",
                format!("\"{target}\"")
            ),
        }
    }
}
