//! Assemble a program, show its encoding and run it.
//!
//! `cargo run --example run_program -- "INC JZ +1 OUT1 OUT0 SEP OUT1 HALT"`

use genprob::mlang::{evaluate, EvalLimit, Evaluation, Program};

fn main() {
    let source = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "INC JZ +1 OUT1 OUT0 SEP OUT1 HALT".to_string());
    let program: Program = match source.parse() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };

    println!("program   {program}");
    println!(
        "bits      {} ({} bits)",
        program.bits(),
        program.length_bits()
    );

    match evaluate(&program, EvalLimit::default()) {
        Evaluation::Halted(trace) => {
            println!("output    \"{}\"", trace.raw_output());
            for (i, record) in trace.records().iter().enumerate() {
                println!("record {i}  \"{record}\"");
            }
        }
        Evaluation::Diverged => println!("ran out of fuel"),
        Evaluation::RuntimeError(e) => println!("runtime error: {e}"),
    }
}
