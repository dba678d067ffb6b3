//! Exhaustive enumeration of valid programs and the quantities built on it:
//! depth-bounded Solomonoff mass, optimal compressions and Kraft sums.
//!
//! Everything here is a lower bound at an explicit depth. Programs that run
//! out of fuel or jump out of range generate nothing and carry no mass.

use rayon::prelude::*;
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::mlang::{BitString, EvalLimit, Evaluation, Opcode, Output, Program};

pub const MIN_PROGRAM_BITS: usize = 3;

/// Prefix width used to split work in [`estimate_probability`].
pub const DEFAULT_PARTITION_BITS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("bit budget {0} is below the minimum program length of 3")]
    BudgetTooSmall(usize),
}

fn check_budget(max_bits: usize) -> Result<(), EnumError> {
    if max_bits < MIN_PROGRAM_BITS {
        Err(EnumError::BudgetTooSmall(max_bits))
    } else {
        Ok(())
    }
}

/// Whether `n` bits split into 3- and 7-bit instructions.
fn splits_into_instructions(n: usize) -> bool {
    (0..=n / 7).any(|jumps| (n - 7 * jumps).is_multiple_of(3))
}

/// Whether `rest` bits can hold zero or more instructions followed by `HALT`.
fn completable(rest: usize) -> bool {
    rest >= MIN_PROGRAM_BITS && splits_into_instructions(rest - MIN_PROGRAM_BITS)
}

/// Streams valid programs in nondecreasing length, lexicographic by bits
/// within a length, optionally restricted to those starting with a prefix.
///
/// Instruction codes form a prefix code, so trying instructions in encoding
/// order at each slot yields the bit strings of one length in order.
#[derive(Clone, Debug)]
pub struct ValidPrograms {
    choices: Vec<Opcode>,
    prefix: BitString,
    max_bits: usize,
    length: usize,
    placed: Vec<usize>,
    bits: BitString,
    cursor: usize,
}

impl ValidPrograms {
    fn new(prefix: BitString, max_bits: usize) -> Self {
        let length = prefix.len().max(MIN_PROGRAM_BITS);
        Self {
            choices: Opcode::all().collect(),
            prefix,
            max_bits,
            length,
            placed: Vec::new(),
            bits: BitString::new(),
            cursor: 0,
        }
    }

    fn fits_prefix(&self, op: Opcode, at: usize) -> bool {
        let p = self.prefix.bits();
        (0..op.bit_len())
            .filter(|j| at + j < p.len())
            .all(|j| op.bit_at(j) == p[at + j])
    }
}

impl Iterator for ValidPrograms {
    type Item = Program;

    fn next(&mut self) -> Option<Program> {
        loop {
            if self.length > self.max_bits {
                return None;
            }
            if self.cursor == self.choices.len() {
                match self.placed.pop() {
                    Some(i) => {
                        let len = self.bits.len() - self.choices[i].bit_len();
                        self.bits.truncate(len);
                        self.cursor = i + 1;
                    }
                    None => {
                        self.length += 1;
                        self.cursor = 0;
                    }
                }
                continue;
            }

            let op = self.choices[self.cursor];
            self.cursor += 1;
            let at = self.bits.len();
            let end = at + op.bit_len();
            if end > self.length || !self.fits_prefix(op, at) {
                continue;
            }
            if op == Opcode::Halt {
                if end == self.length {
                    let mut ops: Vec<Opcode> =
                        self.placed.iter().map(|&i| self.choices[i]).collect();
                    ops.push(Opcode::Halt);
                    let program = Program::from_instructions(ops)
                        .expect("enumerator places HALT only in final position");
                    return Some(program);
                }
                continue;
            }
            if completable(self.length - end) {
                self.placed.push(self.cursor - 1);
                op.encode_into(&mut self.bits);
                self.cursor = 0;
            }
        }
    }
}

/// Every valid program of at most `max_bits` bits, shortest first.
pub fn enumerate_valid(max_bits: usize) -> Result<ValidPrograms, EnumError> {
    check_budget(max_bits)?;
    Ok(ValidPrograms::new(BitString::new(), max_bits))
}

/// The valid programs of at most `max_bits` bits whose encoding starts with
/// `prefix`.
pub fn enumerate_valid_with_prefix(
    prefix: &BitString,
    max_bits: usize,
) -> Result<ValidPrograms, EnumError> {
    check_budget(max_bits)?;
    Ok(ValidPrograms::new(prefix.clone(), max_bits))
}

/// Disjoint pieces covering every valid program of at most `max_bits` bits:
/// the programs shorter than `prefix_bits`, then one piece per
/// `prefix_bits`-wide prefix.
fn partitions(max_bits: usize, prefix_bits: usize) -> Vec<ValidPrograms> {
    let mut parts = Vec::with_capacity((1 << prefix_bits) + 1);
    if prefix_bits > MIN_PROGRAM_BITS {
        parts.push(ValidPrograms::new(
            BitString::new(),
            (prefix_bits - 1).min(max_bits),
        ));
    }
    parts.extend(
        (0..1u64 << prefix_bits)
            .map(|p| ValidPrograms::new(BitString::from_u64(p, prefix_bits), max_bits)),
    );
    parts
}

/// Lower bound on the Solomonoff probability of `target` at a fixed depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassEstimate {
    pub target: Output,
    pub depth_bits: usize,
    /// Sum of `2^-|g|` over halting generators of at most `depth_bits` bits.
    pub mass: Dyadic,
    pub generator_count: u64,
    /// The first generator in enumeration order.
    pub shortest: Option<Program>,
}

impl MassEstimate {
    /// `-log2(mass)`, or `None` when nothing generated the target.
    pub fn entropy_estimate(&self) -> Option<f64> {
        (!self.mass.is_zero()).then(|| -self.mass.to_f64().log2())
    }
}

#[derive(Clone, Debug, Default)]
struct Tally {
    mass: Dyadic,
    count: u64,
    shortest: Option<Program>,
}

impl Tally {
    fn add(&mut self, program: Program) {
        self.mass += Dyadic::pow2_neg(program.length_bits() as u32);
        self.count += 1;
        let better = match &self.shortest {
            None => true,
            Some(s) => program.enumeration_key() < s.enumeration_key(),
        };
        if better {
            self.shortest = Some(program);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.mass += other.mass;
        self.count += other.count;
        if let Some(p) = other.shortest {
            let better = match &self.shortest {
                None => true,
                Some(s) => p.enumeration_key() < s.enumeration_key(),
            };
            if better {
                self.shortest = Some(p);
            }
        }
        self
    }

    fn into_estimate(self, target: &Output, depth_bits: usize) -> MassEstimate {
        MassEstimate {
            target: target.clone(),
            depth_bits,
            mass: self.mass,
            generator_count: self.count,
            shortest: self.shortest,
        }
    }
}

fn generates(program: &Program, target: &Output, limit: EvalLimit) -> bool {
    match program.evaluate(limit) {
        Evaluation::Halted(trace) => trace.raw_output() == target,
        _ => false,
    }
}

fn tally_generators(programs: ValidPrograms, target: &Output, limit: EvalLimit) -> Tally {
    let mut tally = Tally::default();
    for p in programs.filter(|p| generates(p, target, limit)) {
        tally.add(p);
    }
    tally
}

/// Depth-`max_bits` lower bound on the probability that a random program
/// outputs exactly `target` (separators included).
///
/// Work is split across prefixes and run in parallel; the result does not
/// depend on the split.
pub fn estimate_probability(
    target: &Output,
    max_bits: usize,
    limit: EvalLimit,
) -> Result<MassEstimate, EnumError> {
    estimate_probability_partitioned(target, max_bits, limit, DEFAULT_PARTITION_BITS)
}

pub fn estimate_probability_sequential(
    target: &Output,
    max_bits: usize,
    limit: EvalLimit,
) -> Result<MassEstimate, EnumError> {
    let programs = enumerate_valid(max_bits)?;
    Ok(tally_generators(programs, target, limit).into_estimate(target, max_bits))
}

/// Like [`estimate_probability`] with the enumeration split on every
/// `prefix_bits`-wide prefix.
pub fn estimate_probability_partitioned(
    target: &Output,
    max_bits: usize,
    limit: EvalLimit,
    prefix_bits: usize,
) -> Result<MassEstimate, EnumError> {
    check_budget(max_bits)?;
    let tallies: Vec<Tally> = partitions(max_bits, prefix_bits)
        .into_par_iter()
        .map(|part| tally_generators(part, target, limit))
        .collect();
    let total = tallies.into_iter().fold(Tally::default(), Tally::merge);
    Ok(total.into_estimate(target, max_bits))
}

/// The shortest program generating a target: its optimal compression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressionResult {
    pub target: Output,
    pub program: Program,
    pub entropy_bits: usize,
}

/// The shortest, then lexicographically least, halting program of at most
/// `max_bits` bits that outputs `target`.
pub fn optimal_compression(
    target: &Output,
    max_bits: usize,
    limit: EvalLimit,
) -> Result<Option<CompressionResult>, EnumError> {
    Ok(enumerate_valid(max_bits)?
        .find(|p| generates(p, target, limit))
        .map(|program| CompressionResult {
            target: target.clone(),
            entropy_bits: program.length_bits(),
            program,
        }))
}

/// Total weight of all halting programs up to a depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KraftReport {
    pub depth_bits: usize,
    pub total_mass: Dyadic,
    pub program_count: u64,
    pub halted: u64,
    pub diverged: u64,
    pub runtime_errors: u64,
}

impl KraftReport {
    fn empty(depth_bits: usize) -> Self {
        Self {
            depth_bits,
            total_mass: Dyadic::zero(),
            program_count: 0,
            halted: 0,
            diverged: 0,
            runtime_errors: 0,
        }
    }

    pub fn satisfies_kraft(&self) -> bool {
        self.total_mass <= Dyadic::one()
    }
}

pub fn kraft_report(max_bits: usize, limit: EvalLimit) -> Result<KraftReport, EnumError> {
    let mut profile = kraft_profile(max_bits, limit)?;
    Ok(profile.pop().expect("profile covers at least depth 3"))
}

/// Cumulative [`KraftReport`]s for every depth from 3 to `max_bits`, from a
/// single pass over the programs.
pub fn kraft_profile(max_bits: usize, limit: EvalLimit) -> Result<Vec<KraftReport>, EnumError> {
    check_budget(max_bits)?;
    let per_length: Vec<Vec<KraftReport>> = partitions(max_bits, DEFAULT_PARTITION_BITS)
        .into_par_iter()
        .map(|part| {
            let mut by_len: Vec<KraftReport> = (0..=max_bits).map(KraftReport::empty).collect();
            for p in part {
                let slot = &mut by_len[p.length_bits()];
                slot.program_count += 1;
                match p.evaluate(limit) {
                    Evaluation::Halted(_) => {
                        slot.halted += 1;
                        slot.total_mass += Dyadic::pow2_neg(p.length_bits() as u32);
                    }
                    Evaluation::Diverged => slot.diverged += 1,
                    Evaluation::RuntimeError(_) => slot.runtime_errors += 1,
                }
            }
            by_len
        })
        .collect();

    let mut running = KraftReport::empty(0);
    let mut out = Vec::new();
    for len in 0..=max_bits {
        for part in &per_length {
            let s = &part[len];
            running.total_mass += &s.total_mass;
            running.program_count += s.program_count;
            running.halted += s.halted;
            running.diverged += s.diverged;
            running.runtime_errors += s.runtime_errors;
        }
        if len >= MIN_PROGRAM_BITS {
            out.push(KraftReport {
                depth_bits: len,
                ..running.clone()
            });
        }
    }
    Ok(out)
}
