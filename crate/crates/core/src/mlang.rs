//! The reference model language: a two-counter machine that writes bits.
//!
//! A program is a prefix-free bit string. Each instruction starts with a
//! three-bit opcode; `JZ` is followed by a four-bit two's-complement offset.
//!
//! | opcode | bits  | effect                                         |
//! |--------|-------|------------------------------------------------|
//! | `HALT` | `000` | stop                                           |
//! | `INC`  | `001` | `A += 1`                                       |
//! | `DEC`  | `010` | `A -= 1`, saturating at 0                      |
//! | `SWAP` | `011` | exchange `A` and `B`                           |
//! | `OUT0` | `100` | emit `0`                                       |
//! | `OUT1` | `101` | emit `1`                                       |
//! | `SEP`  | `110` | emit a record separator                        |
//! | `JZ k` | `111` | if `A == 0`, jump `k` past the next instruction |
//!
//! A valid program has exactly one `HALT` and it is the last instruction,
//! which is what makes the set of valid programs prefix-free.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub const DEFAULT_MAX_STEPS: u64 = 10_000;

pub const OPCODE_BITS: usize = 3;
pub const OPERAND_BITS: usize = 4;

/// A sequence of bits. `Ord` is plain lexicographic with `0 < 1`; see
/// [`Program::enumeration_key`] for the length-first order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    /// The low `len` bits of `value`, most significant first.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64);
        Self((0..len).rev().map(|i| (value >> i) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn starts_with(&self, prefix: &BitString) -> bool {
        self.0.starts_with(&prefix.0)
    }

    pub fn prefix(&self, len: usize) -> BitString {
        Self(self.0[..len].to_vec())
    }

    pub fn truncate(&mut self, len: usize) {
        self.0.truncate(len);
    }

    fn push_bits(&mut self, value: u8, width: usize) {
        for i in (0..width).rev() {
            self.0.push((value >> i) & 1 == 1);
        }
    }

    fn read(&self, at: usize, width: usize) -> u8 {
        self.0[at..at + width]
            .iter()
            .fold(0u8, |acc, &b| (acc << 1) | u8::from(b))
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        Self(bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid bit character {0:?}")]
pub struct BitParseError(pub char);

/// Accepts `0`/`1`, ignoring whitespace and `_`.
impl FromStr for BitString {
    type Err = BitParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .filter(|c| !c.is_whitespace() && *c != '_')
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BitParseError(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

/// Relative jump distance for `JZ`, in `-8..=7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JumpOffset(i8);

impl JumpOffset {
    pub const MIN: i8 = -8;
    pub const MAX: i8 = 7;

    pub fn new(offset: i8) -> Option<Self> {
        (Self::MIN..=Self::MAX)
            .contains(&offset)
            .then_some(Self(offset))
    }

    pub fn get(self) -> i8 {
        self.0
    }

    fn to_bits(self) -> u8 {
        (self.0 as u8) & 0x0f
    }

    fn from_bits(bits: u8) -> Self {
        let v = (bits & 0x0f) as i8;
        Self(if v >= 8 { v - 16 } else { v })
    }
}

impl fmt::Display for JumpOffset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Opcode {
    Halt,
    Inc,
    Dec,
    Swap,
    Out0,
    Out1,
    Sep,
    Jz(JumpOffset),
}

impl Opcode {
    /// Every instruction, ordered by its encoding.
    pub fn all() -> impl Iterator<Item = Opcode> {
        [
            Opcode::Halt,
            Opcode::Inc,
            Opcode::Dec,
            Opcode::Swap,
            Opcode::Out0,
            Opcode::Out1,
            Opcode::Sep,
        ]
        .into_iter()
        .chain((0u8..16).map(|b| Opcode::Jz(JumpOffset::from_bits(b))))
    }

    pub fn code(self) -> u8 {
        match self {
            Opcode::Halt => 0b000,
            Opcode::Inc => 0b001,
            Opcode::Dec => 0b010,
            Opcode::Swap => 0b011,
            Opcode::Out0 => 0b100,
            Opcode::Out1 => 0b101,
            Opcode::Sep => 0b110,
            Opcode::Jz(_) => 0b111,
        }
    }

    pub fn bit_len(self) -> usize {
        match self {
            Opcode::Jz(_) => OPCODE_BITS + OPERAND_BITS,
            _ => OPCODE_BITS,
        }
    }

    /// Bit `i` of this instruction's encoding.
    pub fn bit_at(self, i: usize) -> bool {
        if i < OPCODE_BITS {
            (self.code() >> (OPCODE_BITS - 1 - i)) & 1 == 1
        } else if let Opcode::Jz(off) = self {
            (off.to_bits() >> (OPCODE_BITS + OPERAND_BITS - 1 - i)) & 1 == 1
        } else {
            panic!("bit {i} out of range for {self}")
        }
    }

    pub fn encode_into(self, bits: &mut BitString) {
        bits.push_bits(self.code(), OPCODE_BITS);
        if let Opcode::Jz(off) = self {
            bits.push_bits(off.to_bits(), OPERAND_BITS);
        }
    }

    pub fn encode(self) -> BitString {
        let mut bits = BitString::new();
        self.encode_into(&mut bits);
        bits
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            Opcode::Halt => "HALT",
            Opcode::Inc => "INC",
            Opcode::Dec => "DEC",
            Opcode::Swap => "SWAP",
            Opcode::Out0 => "OUT0",
            Opcode::Out1 => "OUT1",
            Opcode::Sep => "SEP",
            Opcode::Jz(_) => "JZ",
        }
    }
}

impl fmt::Display for Opcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Opcode::Jz(off) => write!(f, "JZ {off}"),
            op => f.write_str(op.mnemonic()),
        }
    }
}

/// Why a bit string or instruction list is not a valid program.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Error)]
pub enum DecodeError {
    /// A fragment shorter than an opcode is left over.
    #[error("trailing bits after last complete instruction")]
    TrailingBits,
    #[error("program does not end in HALT")]
    NoHalt,
    #[error("HALT is followed by further instructions")]
    EarlyHalt,
    #[error("JZ operand is truncated")]
    TruncatedOperand,
}

impl DecodeError {
    pub fn code(self) -> &'static str {
        match self {
            DecodeError::TrailingBits => "TRAILING_BITS",
            DecodeError::NoHalt => "NO_HALT",
            DecodeError::EarlyHalt => "EARLY_HALT",
            DecodeError::TruncatedOperand => "TRUNCATED_OPERAND",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Program {
    bits: BitString,
    instructions: Vec<Opcode>,
}

impl Program {
    pub fn decode(bits: &BitString) -> Result<Program, DecodeError> {
        let n = bits.len();
        let mut instructions = Vec::new();
        let mut at = 0;
        loop {
            if at == n {
                return Err(DecodeError::NoHalt);
            }
            if n - at < OPCODE_BITS {
                return Err(DecodeError::TrailingBits);
            }
            let code = bits.read(at, OPCODE_BITS);
            at += OPCODE_BITS;
            let op = match code {
                0b000 => Opcode::Halt,
                0b001 => Opcode::Inc,
                0b010 => Opcode::Dec,
                0b011 => Opcode::Swap,
                0b100 => Opcode::Out0,
                0b101 => Opcode::Out1,
                0b110 => Opcode::Sep,
                _ => {
                    if n - at < OPERAND_BITS {
                        return Err(DecodeError::TruncatedOperand);
                    }
                    let off = JumpOffset::from_bits(bits.read(at, OPERAND_BITS));
                    at += OPERAND_BITS;
                    Opcode::Jz(off)
                }
            };
            instructions.push(op);
            if op == Opcode::Halt {
                return match n - at {
                    0 => Ok(Program {
                        bits: bits.clone(),
                        instructions,
                    }),
                    rest if rest < OPCODE_BITS => Err(DecodeError::TrailingBits),
                    _ => Err(DecodeError::EarlyHalt),
                };
            }
        }
    }

    pub fn from_instructions(instructions: Vec<Opcode>) -> Result<Program, DecodeError> {
        match instructions.iter().position(|&op| op == Opcode::Halt) {
            None => return Err(DecodeError::NoHalt),
            Some(i) if i + 1 != instructions.len() => return Err(DecodeError::EarlyHalt),
            Some(_) => {}
        }
        let mut bits = BitString::new();
        for &op in &instructions {
            op.encode_into(&mut bits);
        }
        Ok(Program { bits, instructions })
    }

    /// Parses either the bit form (`"101000"`) or the mnemonic form
    /// (`"OUT1 HALT"`).
    pub fn parse(text: &str) -> Result<Program, ProgramParseError> {
        text.parse()
    }

    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn instructions(&self) -> &[Opcode] {
        &self.instructions
    }

    pub fn length_bits(&self) -> usize {
        self.bits.len()
    }

    /// Orders by length, then lexicographically by bits.
    pub fn enumeration_key(&self) -> (usize, &BitString) {
        (self.bits.len(), &self.bits)
    }

    pub fn evaluate(&self, limit: EvalLimit) -> Evaluation {
        evaluate(self, limit)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, op) in self.instructions.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProgramParseError {
    #[error("unknown mnemonic `{0}`")]
    UnknownMnemonic(String),
    #[error("JZ needs an offset")]
    MissingOffset,
    #[error("bad JZ offset `{0}` (expected an integer in -8..=7)")]
    BadOffset(String),
    #[error(transparent)]
    Bits(#[from] BitParseError),
    #[error("{} ({})", .0, .0.code())]
    Invalid(#[from] DecodeError),
}

fn parse_offset(text: &str) -> Result<JumpOffset, ProgramParseError> {
    text.parse::<i8>()
        .ok()
        .and_then(JumpOffset::new)
        .ok_or_else(|| ProgramParseError::BadOffset(text.to_string()))
}

impl FromStr for Program {
    type Err = ProgramParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let looks_binary = s
            .chars()
            .all(|c| c == '0' || c == '1' || c == '_' || c.is_whitespace());
        if looks_binary && s.chars().any(|c| c == '0' || c == '1') {
            let bits: BitString = s.parse()?;
            return Ok(Program::decode(&bits)?);
        }

        let mut ops = Vec::new();
        let mut tokens = s.split_whitespace().peekable();
        while let Some(tok) = tokens.next() {
            let upper = tok.to_ascii_uppercase();
            let op = match upper.as_str() {
                "HALT" => Opcode::Halt,
                "INC" => Opcode::Inc,
                "DEC" => Opcode::Dec,
                "SWAP" => Opcode::Swap,
                "OUT0" => Opcode::Out0,
                "OUT1" => Opcode::Out1,
                "SEP" => Opcode::Sep,
                "JZ" => {
                    let arg = tokens.next().ok_or(ProgramParseError::MissingOffset)?;
                    Opcode::Jz(parse_offset(arg)?)
                }
                // JZ(+1) / JZ(-3) as a single token
                t if t.starts_with("JZ(") && t.ends_with(')') => {
                    Opcode::Jz(parse_offset(&tok[3..tok.len() - 1])?)
                }
                _ => return Err(ProgramParseError::UnknownMnemonic(tok.to_string())),
            };
            ops.push(op);
        }
        Ok(Program::from_instructions(ops)?)
    }
}

/// One output symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
    Sep,
}

impl Symbol {
    pub fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Sep => '|',
        }
    }
}

/// A raw output stream over `{0, 1, SEP}`.
///
/// Text form writes `SEP` as `|`; `·` is accepted on input as well, so
/// `1|0` and `1·0` are the same output.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Output(Vec<Symbol>);

impl Output {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Self(symbols)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Splits at separators. The empty output has no records; otherwise
    /// empty records are kept.
    pub fn records(&self) -> Vec<String> {
        if self.0.is_empty() {
            return Vec::new();
        }
        self.0
            .split(|&s| s == Symbol::Sep)
            .map(|rec| rec.iter().map(|s| s.as_char()).collect())
            .collect()
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid output symbol {0:?} (expected 0, 1 or |)")]
pub struct OutputParseError(pub char);

impl FromStr for Output {
    type Err = OutputParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(Symbol::Zero),
                '1' => Ok(Symbol::One),
                '|' | '·' => Ok(Symbol::Sep),
                other => Err(OutputParseError(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

/// The output of a halting run, with its record structure. Record 0 is the
/// pre-observation state label; the rest are result labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Trace {
    raw_output: Output,
    records: Vec<String>,
}

impl Trace {
    pub fn new(raw_output: Output) -> Self {
        let records = raw_output.records();
        Self {
            raw_output,
            records,
        }
    }

    pub fn raw_output(&self) -> &Output {
        &self.raw_output
    }

    pub fn records(&self) -> &[String] {
        &self.records
    }

    pub fn prestate(&self) -> Option<&str> {
        self.records.first().map(String::as_str)
    }

    pub fn results(&self) -> &[String] {
        self.records.get(1..).unwrap_or(&[])
    }
}

/// Step budget for a single run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EvalLimit {
    max_steps: u64,
}

impl EvalLimit {
    pub fn new(max_steps: u64) -> Option<Self> {
        (max_steps >= 1).then_some(Self { max_steps })
    }

    pub fn max_steps(self) -> u64 {
        self.max_steps
    }
}

impl Default for EvalLimit {
    fn default() -> Self {
        Self {
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Error)]
pub enum RuntimeError {
    #[error("jump from instruction {from} to {target} leaves the program")]
    JumpOutOfRange { from: usize, target: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluation {
    Halted(Trace),
    /// Ran out of fuel.
    Diverged,
    RuntimeError(RuntimeError),
}

impl Evaluation {
    pub fn trace(&self) -> Option<&Trace> {
        match self {
            Evaluation::Halted(t) => Some(t),
            _ => None,
        }
    }

    pub fn into_trace(self) -> Option<Trace> {
        match self {
            Evaluation::Halted(t) => Some(t),
            _ => None,
        }
    }
}

/// Runs `program` with both counters at zero.
///
/// Every executed instruction, `HALT` included, costs one step. A jump to
/// exactly one past the last instruction ends the run as if it had halted;
/// any other target outside the program is a runtime error.
pub fn evaluate(program: &Program, limit: EvalLimit) -> Evaluation {
    let code = program.instructions();
    let (mut a, mut b) = (0u64, 0u64);
    let mut pc = 0usize;
    let mut steps = 0u64;
    let mut out = Vec::new();

    loop {
        if pc == code.len() {
            break;
        }
        if steps == limit.max_steps {
            return Evaluation::Diverged;
        }
        steps += 1;
        match code[pc] {
            Opcode::Halt => break,
            Opcode::Inc => a = a.saturating_add(1),
            Opcode::Dec => a = a.saturating_sub(1),
            Opcode::Swap => std::mem::swap(&mut a, &mut b),
            Opcode::Out0 => out.push(Symbol::Zero),
            Opcode::Out1 => out.push(Symbol::One),
            Opcode::Sep => out.push(Symbol::Sep),
            Opcode::Jz(off) => {
                if a == 0 {
                    let target = pc as i64 + 1 + i64::from(off.get());
                    if target < 0 || target > code.len() as i64 {
                        return Evaluation::RuntimeError(RuntimeError::JumpOutOfRange {
                            from: pc,
                            target,
                        });
                    }
                    pc = target as usize;
                    continue;
                }
            }
        }
        pc += 1;
    }
    Evaluation::Halted(Trace::new(Output::new(out)))
}
