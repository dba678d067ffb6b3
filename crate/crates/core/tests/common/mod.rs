//! A deliberately naive reference for the machine and its enumeration.
//!
//! Bit strings are plain integers; every string up to the depth is tried,
//! decoded by hand and run by a separate interpreter. Nothing here calls the
//! crate's decoder, evaluator or enumerator.

#![allow(dead_code)]

use std::collections::BTreeMap;

pub const FUEL: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ins {
    Halt,
    Inc,
    Dec,
    Swap,
    Out(char),
    Jz(i64),
}

fn bit(value: u32, len: u32, i: u32) -> u32 {
    (value >> (len - 1 - i)) & 1
}

fn field(value: u32, len: u32, at: u32, width: u32) -> u32 {
    (0..width).fold(0, |acc, j| (acc << 1) | bit(value, len, at + j))
}

/// Decodes the `len`-bit string `value`; `None` unless it is exactly one
/// program ending in its only HALT.
pub fn naive_decode(value: u32, len: u32) -> Option<Vec<Ins>> {
    let mut at = 0;
    let mut out = Vec::new();
    while at + 3 <= len {
        let op = field(value, len, at, 3);
        at += 3;
        let ins = match op {
            0 => Ins::Halt,
            1 => Ins::Inc,
            2 => Ins::Dec,
            3 => Ins::Swap,
            4 => Ins::Out('0'),
            5 => Ins::Out('1'),
            6 => Ins::Out('|'),
            _ => {
                if at + 4 > len {
                    return None;
                }
                let raw = field(value, len, at, 4) as i64;
                at += 4;
                Ins::Jz(if raw >= 8 { raw - 16 } else { raw })
            }
        };
        out.push(ins);
        if ins == Ins::Halt {
            return (at == len).then_some(out);
        }
    }
    None
}

/// Output text (`|` for SEP) of a halting run, or `None`.
pub fn naive_run(code: &[Ins], fuel: u64) -> Option<String> {
    let mut a: u64 = 0;
    let mut b: u64 = 0;
    let mut pc: i64 = 0;
    let mut used = 0;
    let mut out = String::new();
    let n = code.len() as i64;
    while pc != n {
        if used >= fuel {
            return None;
        }
        used += 1;
        match code[pc as usize] {
            Ins::Halt => return Some(out),
            Ins::Inc => a += 1,
            Ins::Dec => a = a.saturating_sub(1),
            Ins::Swap => std::mem::swap(&mut a, &mut b),
            Ins::Out(c) => out.push(c),
            Ins::Jz(k) => {
                if a == 0 {
                    let t = pc + 1 + k;
                    if t < 0 || t > n {
                        return None;
                    }
                    pc = t;
                    continue;
                }
            }
        }
        pc += 1;
    }
    Some(out)
}

pub fn bits_text(value: u32, len: u32) -> String {
    (0..len)
        .map(|i| if bit(value, len, i) == 1 { '1' } else { '0' })
        .collect()
}

#[derive(Clone, Debug, Default)]
pub struct NaiveGenerators {
    /// `(len, bits)` of every halting generator, in enumeration order.
    pub programs: Vec<(u32, String)>,
}

impl NaiveGenerators {
    /// Mass at `depth` as a numerator over `2^scale`.
    pub fn mass(&self, depth: u32, scale: u32) -> u64 {
        self.programs
            .iter()
            .filter(|(l, _)| *l <= depth)
            .map(|(l, _)| 1u64 << (scale - l))
            .sum()
    }

    pub fn count(&self, depth: u32) -> u64 {
        self.programs.iter().filter(|(l, _)| *l <= depth).count() as u64
    }

    pub fn shortest(&self, depth: u32) -> Option<&str> {
        self.programs
            .iter()
            .find(|(l, _)| *l <= depth)
            .map(|(_, b)| b.as_str())
    }
}

#[derive(Debug, Default)]
pub struct NaiveSurvey {
    pub max_bits: u32,
    /// Every valid program as `(len, bits)`, shortest then lexicographic.
    pub valid: Vec<(u32, String)>,
    /// Halting generators per output.
    pub by_output: BTreeMap<String, NaiveGenerators>,
    /// Halting programs per length.
    pub halting_by_len: Vec<u64>,
}

impl NaiveSurvey {
    /// Kraft sum at `depth` as a numerator over `2^scale`.
    pub fn kraft(&self, depth: u32, scale: u32) -> u64 {
        (0..=depth)
            .map(|l| self.halting_by_len[l as usize] << (scale - l))
            .sum()
    }
}

/// Tries every bit string of length `0..=max_bits`.
pub fn naive_survey(max_bits: u32) -> NaiveSurvey {
    assert!(max_bits <= 24);
    let mut survey = NaiveSurvey {
        max_bits,
        halting_by_len: vec![0; max_bits as usize + 1],
        ..Default::default()
    };
    for len in 0..=max_bits {
        for value in 0..(1u32 << len) {
            let Some(code) = naive_decode(value, len) else {
                continue;
            };
            let text = bits_text(value, len);
            survey.valid.push((len, text.clone()));
            if let Some(out) = naive_run(&code, FUEL) {
                survey.halting_by_len[len as usize] += 1;
                survey
                    .by_output
                    .entry(out)
                    .or_default()
                    .programs
                    .push((len, text));
            }
        }
    }
    survey
}

/// `numerator / 2^exponent` rescaled to a numerator over `2^scale`.
pub fn rescale(numerator: &num_bigint::BigUint, exponent: u32, scale: u32) -> u64 {
    assert!(exponent <= scale);
    let n: u64 = numerator.try_into().expect("fits in u64 at test depths");
    n << (scale - exponent)
}
