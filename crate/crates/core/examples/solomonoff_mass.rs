//! Depth-bounded algorithmic probability of a few outputs, and how it
//! grows as deeper programs are admitted.

use genprob::enumerator::estimate_probability;
use genprob::mlang::{EvalLimit, Output};

fn main() {
    let limit = EvalLimit::default();
    for target in ["", "0", "1", "01", "1|0", "000000"] {
        let out: Output = target.parse().unwrap();
        println!("target \"{target}\"");
        for depth in [9, 12, 15, 18] {
            let est = estimate_probability(&out, depth, limit).unwrap();
            let h = est
                .entropy_estimate()
                .map_or("-".to_string(), |h| format!("{h:.3}"));
            println!(
                "  depth {depth:2}  mass {:<14}  ~{:.6}  generators {:5}  -log2 {h}",
                est.mass.to_string(),
                est.mass.to_f64(),
                est.generator_count
            );
        }
    }
}
