//! Total weight of halting programs per depth. Prefix-freeness keeps it
//! below one; the rest is held by programs that diverge or fault.

use genprob::enumerator::kraft_profile;
use genprob::mlang::EvalLimit;

fn main() {
    let max = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(18);
    let profile = kraft_profile(max, EvalLimit::default()).unwrap();
    println!("depth  programs  halted  diverged  errors  mass");
    for r in profile {
        println!(
            "{:5}  {:8}  {:6}  {:8}  {:6}  {:.6}",
            r.depth_bits,
            r.program_count,
            r.halted,
            r.diverged,
            r.runtime_errors,
            r.total_mass.to_f64()
        );
        assert!(r.satisfies_kraft());
    }
}
