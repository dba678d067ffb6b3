//! The `genprob` command line.
//!
//! Exit status is 0 on success, 1 when a scenario file has diagnostics (or
//! cannot be read), and 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::builtin;
use crate::calculus::{monte_carlo_check, outcome_probabilities, Scenario};
use crate::enumerator::{
    enumerate_valid, estimate_probability, kraft_profile, optimal_compression,
};
use crate::mlang::{EvalLimit, Evaluation, Output, DEFAULT_MAX_STEPS};
use crate::scenario_io::{
    parse_scenario_with, render_report, render_simulation, ParseOptions, ReportFormat, Severity,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DIAGNOSTICS: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "genprob",
    version,
    about = "Exact generative probabilities and program enumeration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a scenario file
    Eval {
        path: PathBuf,
        #[command(flatten)]
        fuel: Fuel,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Evaluate a built-in scenario
    Examples {
        #[arg(value_enum)]
        name: Example,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// List every valid program up to a depth, with what it does
    Enumerate {
        #[command(flatten)]
        depth: Depth,
        #[command(flatten)]
        fuel: Fuel,
    },
    /// Depth-bounded Solomonoff mass of an output (`0`, `1`, `|` for SEP)
    Prob {
        #[arg(value_parser = parse_output)]
        target: Output,
        #[command(flatten)]
        depth: Depth,
        #[command(flatten)]
        fuel: Fuel,
    },
    /// Shortest program producing an output
    Compress {
        #[arg(value_parser = parse_output)]
        target: Output,
        #[command(flatten)]
        depth: Depth,
        #[command(flatten)]
        fuel: Fuel,
    },
    /// Total weight of halting programs at each depth
    Kraft {
        #[command(flatten)]
        depth: Depth,
        #[command(flatten)]
        fuel: Fuel,
    },
    /// Monte Carlo check of a scenario file against its exact table
    Simulate {
        path: PathBuf,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        fuel: Fuel,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Debug, Args)]
struct Depth {
    /// Largest program size in bits
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u32).range(3..=40))]
    max_bits: u32,
}

#[derive(Debug, Args)]
struct Fuel {
    /// Step budget per program run
    #[arg(long, env = "GENPROB_FUEL", default_value_t = DEFAULT_MAX_STEPS,
          value_parser = clap::value_parser!(u64).range(1..))]
    fuel: u64,
}

impl Fuel {
    fn limit(&self) -> EvalLimit {
        EvalLimit::new(self.fuel).expect("clap enforces fuel >= 1")
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Machine,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Table => ReportFormat::Table,
            Format::Machine => ReportFormat::Machine,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Example {
    Replicator,
    SleepingBeauty,
}

fn parse_output(s: &str) -> Result<Output, String> {
    s.parse()
        .map_err(|e: crate::mlang::OutputParseError| e.to_string())
}

/// Runs one invocation, writing the report to `out` and diagnostics to
/// `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "genprob: {e}");
            EXIT_DIAGNOSTICS
        }
    }
}

fn load(path: &Path, fuel: &Fuel, err: &mut dyn Write) -> std::io::Result<Option<Scenario>> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            writeln!(err, "{}: {e}", path.display())?;
            return Ok(None);
        }
    };
    let options = ParseOptions {
        limit: fuel.limit(),
        ..ParseOptions::default()
    };
    let doc = parse_scenario_with(&text, &options);
    for d in &doc.diagnostics {
        writeln!(err, "{}:{d}", path.display())?;
    }
    debug_assert_eq!(
        doc.scenario.is_some(),
        !doc.diagnostics
            .iter()
            .any(|d| d.severity == Severity::Error)
    );
    Ok(doc.scenario)
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<u8> {
    match cmd {
        Command::Eval { path, fuel, format } => {
            let Some(s) = load(&path, &fuel, err)? else {
                return Ok(EXIT_DIAGNOSTICS);
            };
            match outcome_probabilities(&s) {
                Ok(table) => out.write_all(render_report(&table, format.into()).as_bytes())?,
                Err(e) => {
                    writeln!(err, "{}: {e} ({})", path.display(), e.code())?;
                    return Ok(EXIT_DIAGNOSTICS);
                }
            }
        }
        Command::Examples { name, format } => {
            let name = match name {
                Example::Replicator => builtin::NAMES[0],
                Example::SleepingBeauty => builtin::NAMES[1],
            };
            let s = builtin::by_name(name).expect("built-in names resolve");
            let table = outcome_probabilities(&s).expect("built-in scenarios are valid");
            out.write_all(render_report(&table, format.into()).as_bytes())?;
        }
        Command::Enumerate { depth, fuel } => {
            let limit = fuel.limit();
            let programs =
                enumerate_valid(depth.max_bits as usize).expect("clap enforces max_bits >= 3");
            for p in programs {
                let what = match p.evaluate(limit) {
                    Evaluation::Halted(t) => format!("output \"{}\"", t.raw_output()),
                    Evaluation::Diverged => "diverged".to_string(),
                    Evaluation::RuntimeError(e) => format!("error: {e}"),
                };
                writeln!(
                    out,
                    "{:>2}  {:<24}  {:<40}  {what}",
                    p.length_bits(),
                    p.bits(),
                    p.to_string()
                )?;
            }
        }
        Command::Prob {
            target,
            depth,
            fuel,
        } => {
            let est = estimate_probability(&target, depth.max_bits as usize, fuel.limit())
                .expect("clap enforces max_bits >= 3");
            writeln!(out, "target      \"{}\"", est.target)?;
            writeln!(out, "depth       {} bits", est.depth_bits)?;
            writeln!(out, "mass        {}", est.mass)?;
            writeln!(out, "generators  {}", est.generator_count)?;
            match &est.shortest {
                Some(p) => writeln!(out, "shortest    {p}  ({} bits)", p.length_bits())?,
                None => writeln!(out, "shortest    none")?,
            }
        }
        Command::Compress {
            target,
            depth,
            fuel,
        } => {
            match optimal_compression(&target, depth.max_bits as usize, fuel.limit())
                .expect("clap enforces max_bits >= 3")
            {
                Some(c) => {
                    writeln!(out, "target   \"{}\"", c.target)?;
                    writeln!(out, "program  {}", c.program)?;
                    writeln!(out, "bits     {}", c.program.bits())?;
                    writeln!(out, "entropy  {} bits", c.entropy_bits)?;
                }
                None => writeln!(
                    out,
                    "target \"{target}\": no program within {} bits",
                    depth.max_bits
                )?,
            }
        }
        Command::Kraft { depth, fuel } => {
            let profile = kraft_profile(depth.max_bits as usize, fuel.limit())
                .expect("clap enforces max_bits >= 3");
            writeln!(out, "depth  programs  halted  diverged  errors  total_mass")?;
            for r in profile {
                writeln!(
                    out,
                    "{:>5}  {:>8}  {:>6}  {:>8}  {:>6}  {}",
                    r.depth_bits,
                    r.program_count,
                    r.halted,
                    r.diverged,
                    r.runtime_errors,
                    r.total_mass
                )?;
            }
        }
        Command::Simulate {
            path,
            samples,
            seed,
            fuel,
            format,
        } => {
            let Some(s) = load(&path, &fuel, err)? else {
                return Ok(EXIT_DIAGNOSTICS);
            };
            let result = outcome_probabilities(&s)
                .and_then(|table| monte_carlo_check(&s, samples, seed).map(|mc| (table, mc)));
            match result {
                Ok((table, mc)) => {
                    out.write_all(render_simulation(&table, &mc, format.into()).as_bytes())?
                }
                Err(e) => {
                    writeln!(err, "{}: {e} ({})", path.display(), e.code())?;
                    return Ok(EXIT_DIAGNOSTICS);
                }
            }
        }
    }
    Ok(EXIT_OK)
}
