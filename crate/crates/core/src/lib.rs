//! Algorithmic generative probability.
//!
//! Two halves share one reference machine:
//!
//! * [`mlang`] and [`enumerator`]: a tiny prefix-free counter-machine
//!   language, exhaustive program enumeration, and depth-bounded
//!   Solomonoff mass, optimal compressions and Kraft sums, all in exact
//!   dyadic arithmetic.
//! * [`calculus`] and [`scenario_io`]: observer scenarios (situations,
//!   results, outcomes) evaluated to exact outcome and result
//!   probabilities, read from a small line-oriented file format.
//!
//! ```
//! use genprob::{builtin, calculus::outcome_probabilities};
//!
//! let table = outcome_probabilities(&builtin::sleeping_beauty()).unwrap();
//! assert_eq!(table.outcome_probability("H").unwrap().to_string(), "1/2");
//! ```
//!
//! Runnable walkthroughs live in `examples/`; the `genprob` binary wraps
//! the same API for batch use.

pub mod builtin;
pub mod calculus;
pub mod cli;
pub mod dyadic;
pub mod enumerator;
pub mod mlang;
pub mod scenario_io;

pub use calculus::{
    monte_carlo_check, outcome_probabilities, resolve_outcomes, validate_scenario, OutcomeTable,
    Scenario, Situation,
};
pub use dyadic::Dyadic;
pub use enumerator::{estimate_probability, kraft_report, optimal_compression, MassEstimate};
pub use mlang::{evaluate, EvalLimit, Evaluation, Output, Program};
pub use scenario_io::{parse_scenario, render_report, ReportFormat};
