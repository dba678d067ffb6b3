//! The scenario file format and report rendering.
//!
//! Scenario files are line oriented. `#` starts a comment; tokens are
//! separated by whitespace and may be double-quoted.
//!
//! ```text
//! format 1                      # optional
//! scenario <id>
//! prestates <label> [<label> ...]
//! situation <id> [bits <int>] [program "<mnemonics>"]
//!   result <id> prestate <label>
//! outcome <id> = <result-id> [<result-id> ...]
//! ```
//!
//! Situations with `bits` are *declared*: their results are listed with
//! `result` lines. Situations with `program` are *enumerated*: the program
//! is run, record 0 of its output names the prestate, the remaining records
//! become results, and the entropy is the length of the optimal compression
//! of the program's output. A file uses one mode throughout. When no
//! situation declares `bits` or `program`, every situation gets 3 bits.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::calculus::{
    validate_scenario, CalculusError, MonteCarloReport, OutcomeTable, ResultRef, Scenario,
    Situation, Violation, Warning, DEFAULT_ENTROPY_BITS,
};
use crate::enumerator::optimal_compression;
use crate::mlang::{EvalLimit, Evaluation, Program};

pub const FORMAT_VERSION: u32 = 1;

/// Largest `bits` value the parser accepts.
pub const MAX_DECLARED_BITS: u32 = 65_535;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl Position {
    pub const START: Position = Position { line: 1, column: 1 };
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub position: Position,
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {sev}: {}", self.position, self.message)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Declared,
    Enumerated,
}

#[derive(Clone, Debug)]
pub struct ScenarioDocument {
    pub source: String,
    /// Present iff `diagnostics` holds no errors.
    pub scenario: Option<Scenario>,
    pub mode: Mode,
    pub diagnostics: Vec<Diagnostic>,
}

impl ScenarioDocument {
    pub fn has_errors(&self) -> bool {
        self.diagnostics
            .iter()
            .any(|d| d.severity == Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics
            .iter()
            .filter(|d| d.severity == Severity::Error)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ParseOptions {
    /// Fuel for running enumerated-mode programs and compression searches.
    pub limit: EvalLimit,
    /// Deepest compression search for an enumerated situation. Longer
    /// programs fall back to their own length, with a warning.
    pub max_search_bits: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self {
            limit: EvalLimit::default(),
            max_search_bits: 24,
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    text: String,
    quoted: bool,
    pos: Position,
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<Token>, Diagnostic> {
    let mut tokens = Vec::new();
    let mut chars = line.chars().enumerate().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let pos = Position {
            line: line_no,
            column: i + 1,
        };
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '"' {
            chars.next();
            let mut text = String::new();
            let mut closed = false;
            for (_, c) in chars.by_ref() {
                if c == '"' {
                    closed = true;
                    break;
                }
                text.push(c);
            }
            if !closed {
                return Err(Diagnostic {
                    position: pos,
                    severity: Severity::Error,
                    message: "unterminated string".into(),
                });
            }
            tokens.push(Token {
                text,
                quoted: true,
                pos,
            });
            continue;
        }
        let mut text = String::new();
        while let Some(&(_, c)) = chars.peek() {
            if c.is_whitespace() || c == '#' || c == '"' {
                break;
            }
            text.push(c);
            chars.next();
        }
        tokens.push(Token {
            text,
            quoted: false,
            pos,
        });
    }
    Ok(tokens)
}

#[derive(Debug)]
struct ResultDecl {
    id: String,
    pos: Position,
    prestate_pos: Position,
}

#[derive(Debug)]
struct SituationDecl {
    id: String,
    pos: Position,
    bits: Option<(u32, Position)>,
    program: Option<(String, Position)>,
    results: Vec<(ResultDecl, String)>,
}

#[derive(Debug)]
struct OutcomeDecl {
    id: String,
    pos: Position,
    results: Vec<(String, Position)>,
}

#[derive(Default)]
struct Parser {
    diagnostics: Vec<Diagnostic>,
    header: Option<(String, Position)>,
    first_statement: Option<Position>,
    prestates: Option<Vec<(String, Position)>>,
    situations: Vec<SituationDecl>,
    outcomes: Vec<OutcomeDecl>,
}

impl Parser {
    fn error(&mut self, pos: Position, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic {
            position: pos,
            severity: Severity::Error,
            message: message.into(),
        });
    }

    fn warning(&mut self, pos: Position, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic {
            position: pos,
            severity: Severity::Warning,
            message: message.into(),
        });
    }

    fn end_of(tokens: &[Token]) -> Position {
        let last = tokens.last().expect("statements have a keyword");
        Position {
            line: last.pos.line,
            column: last.pos.column + last.text.chars().count() + if last.quoted { 2 } else { 0 },
        }
    }

    fn expect_ident<'t>(&mut self, tokens: &'t [Token], i: usize, what: &str) -> Option<&'t Token> {
        match tokens.get(i) {
            Some(t) if !t.quoted && !t.text.is_empty() && t.text != "=" => Some(t),
            Some(t) => {
                self.error(t.pos, format!("expected {what}, found `{}`", t.text));
                None
            }
            None => {
                self.error(Self::end_of(tokens), format!("expected {what}"));
                None
            }
        }
    }

    fn no_extra(&mut self, tokens: &[Token], from: usize) {
        if let Some(t) = tokens.get(from) {
            self.error(t.pos, format!("unexpected token `{}`", t.text));
        }
    }

    fn statement(&mut self, tokens: &[Token]) {
        let kw = &tokens[0];
        if self.first_statement.is_none() {
            self.first_statement = Some(kw.pos);
            if kw.text != "scenario" && kw.text != "format" {
                self.error(kw.pos, "missing scenario header");
            }
        }
        match kw.text.as_str() {
            "format" => self.format_line(tokens),
            "scenario" => self.scenario_line(tokens),
            "prestates" => self.prestates_line(tokens),
            "situation" => self.situation_line(tokens),
            "result" => self.result_line(tokens),
            "outcome" => self.outcome_line(tokens),
            other => self.error(kw.pos, format!("unknown keyword `{other}`")),
        }
    }

    fn format_line(&mut self, tokens: &[Token]) {
        if self.header.is_some() || self.first_statement != Some(tokens[0].pos) {
            self.error(tokens[0].pos, "`format` must be the first statement");
        }
        let Some(t) = self.expect_ident(tokens, 1, "format version") else {
            return;
        };
        match t.text.parse::<u32>() {
            Ok(FORMAT_VERSION) => {}
            Ok(v) => self.error(t.pos, format!("unsupported format version {v}")),
            Err(_) => self.error(t.pos, format!("invalid integer `{}`", t.text)),
        }
        self.no_extra(tokens, 2);
    }

    fn scenario_line(&mut self, tokens: &[Token]) {
        if let Some((_, first)) = &self.header {
            let first = *first;
            self.error(
                tokens[0].pos,
                format!("duplicate scenario header (first at {first})"),
            );
            return;
        }
        if let Some(t) = self.expect_ident(tokens, 1, "scenario id") {
            self.header = Some((t.text.clone(), tokens[0].pos));
        }
        self.no_extra(tokens, 2);
    }

    fn prestates_line(&mut self, tokens: &[Token]) {
        if self.prestates.is_some() {
            self.error(tokens[0].pos, "duplicate `prestates` line");
            return;
        }
        if tokens.len() < 2 {
            self.error(Self::end_of(tokens), "expected at least one prestate label");
        }
        let mut labels = Vec::new();
        for i in 1..tokens.len() {
            if let Some(t) = self.expect_ident(tokens, i, "prestate label") {
                labels.push((t.text.clone(), t.pos));
            }
        }
        self.prestates = Some(labels);
    }

    fn situation_line(&mut self, tokens: &[Token]) {
        let Some(id) = self.expect_ident(tokens, 1, "situation id") else {
            return;
        };
        let mut decl = SituationDecl {
            id: id.text.clone(),
            pos: id.pos,
            bits: None,
            program: None,
            results: Vec::new(),
        };
        let mut i = 2;
        while i < tokens.len() {
            let key = &tokens[i];
            let Some(value) = tokens.get(i + 1) else {
                self.error(
                    Self::end_of(tokens),
                    format!("expected a value after `{}`", key.text),
                );
                break;
            };
            match key.text.as_str() {
                "bits" if !key.quoted => {
                    if decl.bits.is_some() {
                        self.error(key.pos, "duplicate `bits`");
                    }
                    match value.text.parse::<u32>() {
                        Ok(b) if b <= MAX_DECLARED_BITS => decl.bits = Some((b, value.pos)),
                        Ok(_) => self.error(
                            value.pos,
                            format!("bits value out of range (max {MAX_DECLARED_BITS})"),
                        ),
                        Err(_) => {
                            self.error(value.pos, format!("invalid integer `{}`", value.text))
                        }
                    }
                }
                "program" if !key.quoted => {
                    if decl.program.is_some() {
                        self.error(key.pos, "duplicate `program`");
                    }
                    decl.program = Some((value.text.clone(), value.pos));
                }
                _ => {
                    self.error(
                        key.pos,
                        format!(
                            "unexpected token `{}` (expected `bits` or `program`)",
                            key.text
                        ),
                    );
                    break;
                }
            }
            i += 2;
        }
        self.situations.push(decl);
    }

    fn result_line(&mut self, tokens: &[Token]) {
        if self.situations.is_empty() {
            self.error(tokens[0].pos, "`result` outside a situation");
            return;
        }
        let Some(id) = self.expect_ident(tokens, 1, "result id") else {
            return;
        };
        let id = id.clone();
        match tokens.get(2) {
            Some(t) if t.text == "prestate" && !t.quoted => {}
            Some(t) => {
                self.error(t.pos, format!("expected `prestate`, found `{}`", t.text));
                return;
            }
            None => {
                self.error(Self::end_of(tokens), "expected `prestate`");
                return;
            }
        }
        let Some(label) = self.expect_ident(tokens, 3, "prestate label") else {
            return;
        };
        let label = label.clone();
        self.no_extra(tokens, 4);
        self.situations
            .last_mut()
            .expect("checked above")
            .results
            .push((
                ResultDecl {
                    id: id.text,
                    pos: id.pos,
                    prestate_pos: label.pos,
                },
                label.text,
            ));
    }

    fn outcome_line(&mut self, tokens: &[Token]) {
        let Some(id) = self.expect_ident(tokens, 1, "outcome id") else {
            return;
        };
        let id = id.clone();
        match tokens.get(2) {
            Some(t) if t.text == "=" && !t.quoted => {}
            Some(t) => {
                self.error(t.pos, format!("expected `=`, found `{}`", t.text));
                return;
            }
            None => {
                self.error(Self::end_of(tokens), "expected `=`");
                return;
            }
        }
        let mut results = Vec::new();
        for i in 3..tokens.len() {
            if let Some(t) = self.expect_ident(tokens, i, "result id") {
                results.push((t.text.clone(), t.pos));
            }
        }
        self.outcomes.push(OutcomeDecl {
            id: id.text,
            pos: id.pos,
            results,
        });
    }
}

/// Parses with [`ParseOptions::default`].
pub fn parse_scenario(text: &str) -> ScenarioDocument {
    parse_scenario_with(text, &ParseOptions::default())
}

pub fn parse_scenario_with(text: &str, options: &ParseOptions) -> ScenarioDocument {
    let mut p = Parser::default();
    for (i, line) in text.lines().enumerate() {
        match tokenize(line, i + 1) {
            Ok(tokens) if tokens.is_empty() => {}
            Ok(tokens) => p.statement(&tokens),
            Err(d) => p.diagnostics.push(d),
        }
    }
    let reported = p
        .diagnostics
        .iter()
        .any(|d| d.message == "missing scenario header");
    if p.header.is_none() && !reported {
        p.error(Position::START, "missing scenario header");
    }

    let mode = if p.situations.iter().any(|s| s.program.is_some()) {
        Mode::Enumerated
    } else {
        Mode::Declared
    };
    let scenario = build(&mut p, mode, options);

    let mut diagnostics = p.diagnostics;
    diagnostics.sort_by_key(|d| d.position);
    let has_errors = diagnostics.iter().any(|d| d.severity == Severity::Error);
    ScenarioDocument {
        source: text.to_string(),
        scenario: if has_errors { None } else { scenario },
        mode,
        diagnostics,
    }
}

fn derive_situation(
    p: &mut Parser,
    decl: &SituationDecl,
    options: &ParseOptions,
) -> Option<Situation> {
    let (text, pos) = decl.program.as_ref()?;
    let pos = *pos;
    let program = match Program::parse(text) {
        Ok(program) => program,
        Err(e) => {
            p.error(pos, format!("invalid program: {e}"));
            return None;
        }
    };
    let trace = match program.evaluate(options.limit) {
        Evaluation::Halted(t) => t,
        Evaluation::Diverged => {
            p.error(
                pos,
                format!(
                    "program did not halt within {} steps",
                    options.limit.max_steps()
                ),
            );
            return None;
        }
        Evaluation::RuntimeError(e) => {
            p.error(pos, format!("program failed: {e}"));
            return None;
        }
    };
    let Some(prestate) = trace.prestate() else {
        p.error(pos, "program output has no prestate record");
        return None;
    };
    if trace.results().is_empty() {
        p.error(
            pos,
            format!(
                "program output `{}` has no result records",
                trace.raw_output()
            ),
        );
        return None;
    }
    if trace.records().iter().any(String::is_empty) {
        p.error(
            pos,
            format!(
                "program output `{}` has an empty record",
                trace.raw_output()
            ),
        );
        return None;
    }

    let depth = program.length_bits().min(options.max_search_bits);
    let found = optimal_compression(trace.raw_output(), depth, options.limit)
        .ok()
        .flatten();
    let entropy = match found {
        Some(c) => c.entropy_bits,
        None => {
            p.warning(
                pos,
                format!(
                    "no compression within {depth} bits; using the program's own length {}",
                    program.length_bits()
                ),
            );
            program.length_bits()
        }
    };

    let mut situation = Situation::new(decl.id.clone(), entropy as u32);
    for r in trace.results() {
        situation = situation.result(r.clone(), prestate);
    }
    Some(situation)
}

fn build(p: &mut Parser, mode: Mode, options: &ParseOptions) -> Option<Scenario> {
    let (id, header_pos) = p.header.clone()?;
    let situations = std::mem::take(&mut p.situations);
    let outcomes = std::mem::take(&mut p.outcomes);
    let prestates = p.prestates.take().unwrap_or_default();

    let any_bits = situations.iter().any(|s| s.bits.is_some());
    let mut scenario = Scenario::new(id).prestates(prestates.iter().map(|(l, _)| l.clone()));
    let mut ok = true;

    for decl in &situations {
        match mode {
            Mode::Enumerated => {
                if let Some((_, pos)) = decl.bits {
                    p.error(
                        pos,
                        "cannot mix `bits` with `program` situations in one file",
                    );
                    ok = false;
                }
                if decl.program.is_none() {
                    p.error(
                        decl.pos,
                        format!(
                            "situation `{}` needs a `program` (file is in enumerated mode)",
                            decl.id
                        ),
                    );
                    ok = false;
                    continue;
                }
                if let Some((r, _)) = decl.results.first() {
                    p.error(
                        r.pos,
                        "`result` lines are not allowed under a `program` situation",
                    );
                    ok = false;
                }
                match derive_situation(p, decl, options) {
                    Some(s) => scenario.situations.push(s),
                    None => ok = false,
                }
            }
            Mode::Declared => {
                let bits = match decl.bits {
                    Some((b, _)) => b,
                    None if any_bits => {
                        p.error(
                            decl.pos,
                            format!(
                                "situation `{}` needs `bits` (other situations declare entropies)",
                                decl.id
                            ),
                        );
                        ok = false;
                        DEFAULT_ENTROPY_BITS
                    }
                    None => DEFAULT_ENTROPY_BITS,
                };
                let mut s = Situation::new(decl.id.clone(), bits);
                s.results = decl
                    .results
                    .iter()
                    .map(|(r, label)| ResultRef {
                        id: r.id.clone(),
                        prestate: label.clone(),
                    })
                    .collect();
                scenario.situations.push(s);
            }
        }
    }
    for o in &outcomes {
        scenario = scenario.outcome(o.id.clone(), o.results.iter().map(|(r, _)| r.clone()));
    }
    if !ok {
        return None;
    }

    let report = validate_scenario(&scenario);
    let locate = Locator {
        header: header_pos,
        prestates: &prestates,
        situations: &situations,
        outcomes: &outcomes,
    };
    let mut seen_dups: HashMap<(&'static str, String), usize> = HashMap::new();
    for v in &report.violations {
        let pos = locate.violation(v, &mut seen_dups);
        p.error(pos, format!("{} ({})", v, v.code()));
    }
    for w in &report.warnings {
        let Warning::SplitOutcome { outcome, .. } = w;
        p.warning(locate.outcome(outcome), w.to_string());
    }
    Some(scenario)
}

struct Locator<'a> {
    header: Position,
    prestates: &'a [(String, Position)],
    situations: &'a [SituationDecl],
    outcomes: &'a [OutcomeDecl],
}

impl Locator<'_> {
    fn nth(positions: Vec<Position>, n: usize, fallback: Position) -> Position {
        positions
            .get(n)
            .or(positions.last())
            .copied()
            .unwrap_or(fallback)
    }

    fn situation(&self, id: &str) -> Position {
        self.situations
            .iter()
            .find(|s| s.id == id)
            .map_or(self.header, |s| s.pos)
    }

    fn outcome(&self, id: &str) -> Position {
        self.outcomes
            .iter()
            .find(|o| o.id == id)
            .map_or(self.header, |o| o.pos)
    }

    fn result(&self, id: &str) -> Option<(&SituationDecl, &ResultDecl)> {
        self.situations.iter().find_map(|s| {
            s.results
                .iter()
                .find(|(r, _)| r.id == id)
                .map(|(r, _)| (s, r))
        })
    }

    fn outcome_member(&self, outcome: &str, result: &str, n: usize) -> Position {
        let positions = self
            .outcomes
            .iter()
            .filter(|o| o.id == outcome)
            .flat_map(|o| {
                o.results
                    .iter()
                    .filter(|(r, _)| r == result)
                    .map(|(_, p)| *p)
            })
            .collect();
        Self::nth(positions, n, self.outcome(outcome))
    }

    fn violation(
        &self,
        v: &Violation,
        seen: &mut HashMap<(&'static str, String), usize>,
    ) -> Position {
        let mut next = |kind: &'static str, id: &str| {
            let n = seen.entry((kind, id.to_string())).or_insert(0);
            *n += 1;
            *n
        };
        match v {
            Violation::NoPrestates | Violation::NoSituations => self.header,
            Violation::DuplicatePrestate(id) => {
                let n = next("prestate", id);
                let positions = self
                    .prestates
                    .iter()
                    .filter(|(l, _)| l == id)
                    .map(|(_, p)| *p)
                    .collect();
                Self::nth(positions, n, self.header)
            }
            Violation::DuplicateSituation(id) => {
                let n = next("situation", id);
                let positions = self
                    .situations
                    .iter()
                    .filter(|s| &s.id == id)
                    .map(|s| s.pos)
                    .collect();
                Self::nth(positions, n, self.header)
            }
            Violation::DuplicateResult(id) => {
                let n = next("result", id);
                let positions = self
                    .situations
                    .iter()
                    .flat_map(|s| {
                        s.results
                            .iter()
                            .filter(|(r, _)| &r.id == id)
                            .map(|(r, _)| r.pos)
                    })
                    .collect();
                // enumerated results have no line of their own
                let fallback = self
                    .situations
                    .iter()
                    .find(|s| s.program.is_some())
                    .map_or(self.header, |s| s.pos);
                Self::nth(positions, n, fallback)
            }
            Violation::DuplicateOutcome(id) => {
                let n = next("outcome", id);
                let positions = self
                    .outcomes
                    .iter()
                    .filter(|o| &o.id == id)
                    .map(|o| o.pos)
                    .collect();
                Self::nth(positions, n, self.header)
            }
            Violation::EmptyResults { situation } | Violation::NonPositiveEntropy { situation } => {
                self.situation(situation)
            }
            Violation::EmptyOutcome { outcome } => self.outcome(outcome),
            Violation::UnknownPrestate { result, .. } => match self.result(result) {
                Some((_, r)) => r.prestate_pos,
                None => self.enumerated_owner(result),
            },
            Violation::NonTotalPartition { result } => match self.result(result) {
                Some((_, r)) => r.pos,
                None => self.enumerated_owner(result),
            },
            Violation::UnknownResult { outcome, result } => self.outcome_member(outcome, result, 0),
            Violation::OverlappingPartition { result, outcome } => {
                self.outcome_member(outcome, result, 0)
            }
        }
    }

    /// Enumerated results are reported at their situation's program.
    fn enumerated_owner(&self, _result: &str) -> Position {
        self.situations
            .iter()
            .find_map(|s| s.program.as_ref().map(|(_, p)| *p))
            .unwrap_or(self.header)
    }
}

/// Renders a scenario as a declared-mode document that parses back to the
/// same scenario.
pub fn render_scenario(s: &Scenario) -> Result<String, CalculusError> {
    let mut out = String::new();
    writeln!(out, "format {FORMAT_VERSION}").unwrap();
    writeln!(out, "scenario {}", s.id).unwrap();
    writeln!(out, "prestates {}", s.prestates.join(" ")).unwrap();
    for sit in &s.situations {
        let h = &sit.entropy_bits;
        let bits = h
            .is_integer()
            .then(|| h.to_integer().to_u32())
            .flatten()
            .ok_or_else(|| CalculusError::NonIntegralEntropy {
                situation: sit.id.clone(),
                entropy: h.to_string(),
            })?;
        writeln!(out, "situation {} bits {bits}", sit.id).unwrap();
        for r in &sit.results {
            writeln!(out, "  result {} prestate {}", r.id, r.prestate).unwrap();
        }
    }
    for o in &s.outcomes {
        writeln!(out, "outcome {} = {}", o.id, o.results.join(" ")).unwrap();
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Table,
    Machine,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    pub format: ReportFormat,
    /// Adds decimal approximations next to exact fractions (table only).
    pub decimals: bool,
}

/// `n/d`, always with an explicit denominator.
pub fn fraction(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// `{n,d}` as used by the machine format.
fn pair(q: &BigRational) -> String {
    format!("{{{},{}}}", q.numer(), q.denom())
}

fn bits_text(q: &BigRational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        fraction(q)
    }
}

fn decimal(q: &BigRational) -> String {
    format!("{:.6}", q.to_f64().unwrap_or(f64::NAN))
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Lays out rows in columns separated by two spaces.
fn columns(rows: &[Vec<String>]) -> String {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..width)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if c + 1 < row.len() {
                line.extend(std::iter::repeat_n(' ', widths[c] - cell.chars().count()));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn render_report(table: &OutcomeTable, format: ReportFormat) -> String {
    render_report_with(
        table,
        &ReportOptions {
            format,
            decimals: false,
        },
    )
}

pub fn render_report_with(table: &OutcomeTable, options: &ReportOptions) -> String {
    match options.format {
        ReportFormat::Table => render_table(table, options.decimals),
        ReportFormat::Machine => render_machine(table, None),
    }
}

/// Situation ids in table order, each with its results.
fn situation_rows(table: &OutcomeTable) -> Vec<(&str, Vec<&str>)> {
    let mut by_situation: Vec<(&str, Vec<&str>)> = Vec::new();
    for ((result, situation), _) in &table.probabilities.result_given_situation {
        match by_situation.iter_mut().find(|(s, _)| s == situation) {
            Some((_, rs)) => rs.push(result),
            None => by_situation.push((situation, vec![result])),
        }
    }
    by_situation
}

fn render_table(table: &OutcomeTable, decimals: bool) -> String {
    let probs = &table.probabilities;
    let mut out = format!("scenario {}\n\n", table.scenario);

    let mut head = vec!["outcome", "p(o)"];
    if decimals {
        head.push("~p(o)");
    }
    head.extend(["B", "N(o|L)", "N(o|M|L)", "H(o)", "compression"]);
    let mut rows = vec![head.into_iter().map(String::from).collect::<Vec<_>>()];
    for o in &table.outcomes {
        let p = &probs.outcome[&o.id];
        let mut row = vec![o.id.clone(), fraction(p)];
        if decimals {
            row.push(decimal(p));
        }
        row.extend([
            fraction(&o.branch_factor),
            o.n_compression.to_string(),
            o.n_generators.to_string(),
            bits_text(&o.entropy_bits),
            o.compression_situation.clone(),
        ]);
        rows.push(row);
    }
    out.push_str(&columns(&rows));
    out.push('\n');

    let mut head = vec!["result", "p(r|o)"];
    if decimals {
        head.push("~p(r|o)");
    }
    head.extend(["outcome", "situation", "p(r|i)"]);
    let mut rows = vec![head.into_iter().map(String::from).collect::<Vec<_>>()];
    for ((result, situation), p_ri) in &probs.result_given_situation {
        let p_ro = probs.result_given_outcome.get(result);
        let mut row = vec![
            result.clone(),
            p_ro.map_or_else(|| "-".to_string(), fraction),
        ];
        if decimals {
            row.push(p_ro.map_or_else(|| "-".to_string(), decimal));
        }
        row.extend([
            table
                .outcome_of(result)
                .map_or("-", |o| o.id.as_str())
                .to_string(),
            situation.clone(),
            fraction(p_ri),
        ]);
        rows.push(row);
    }
    out.push_str(&columns(&rows));
    out.push('\n');

    writeln!(out, "Z  {}", fraction(&table.normalization)).unwrap();
    for w in &table.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    out
}

fn render_machine(table: &OutcomeTable, simulation: Option<&MonteCarloReport>) -> String {
    let probs = &table.probabilities;
    let mut out = String::new();
    out.push_str("report {\n");
    writeln!(out, "  format {FORMAT_VERSION}").unwrap();
    writeln!(out, "  scenario {}", quote(&table.scenario)).unwrap();
    writeln!(out, "  normalization {}", pair(&table.normalization)).unwrap();

    out.push_str("  outcomes {\n");
    for o in &table.outcomes {
        writeln!(out, "    outcome {} {{", quote(&o.id)).unwrap();
        writeln!(out, "      probability {}", pair(&probs.outcome[&o.id])).unwrap();
        writeln!(out, "      branch_factor {}", pair(&o.branch_factor)).unwrap();
        writeln!(out, "      n_compression {}", o.n_compression).unwrap();
        writeln!(out, "      n_generators {}", o.n_generators).unwrap();
        writeln!(out, "      entropy_bits {}", pair(&o.entropy_bits)).unwrap();
        writeln!(
            out,
            "      compression_situation {}",
            quote(&o.compression_situation)
        )
        .unwrap();
        let rs: Vec<String> = o.results.iter().map(|r| quote(&r.id)).collect();
        writeln!(out, "      results [{}]", rs.join(" ")).unwrap();
        out.push_str("    }\n");
    }
    out.push_str("  }\n");

    out.push_str("  result_given_outcome {\n");
    for (r, p) in &probs.result_given_outcome {
        writeln!(out, "    {} {}", quote(r), pair(p)).unwrap();
    }
    out.push_str("  }\n");

    out.push_str("  result_given_situation {\n");
    for (situation, results) in situation_rows(table) {
        writeln!(out, "    situation {} {{", quote(situation)).unwrap();
        for r in results {
            let p = &probs.result_given_situation[&(r.to_string(), situation.to_string())];
            writeln!(out, "      {} {}", quote(r), pair(p)).unwrap();
        }
        out.push_str("    }\n");
    }
    out.push_str("  }\n");

    out.push_str("  warnings [");
    let ws: Vec<String> = table
        .warnings
        .iter()
        .map(|w| quote(&w.to_string()))
        .collect();
    out.push_str(&ws.join(" "));
    out.push_str("]\n");

    if let Some(mc) = simulation {
        out.push_str("  simulation {\n");
        writeln!(out, "    samples {}", mc.samples).unwrap();
        writeln!(out, "    seed {}", mc.seed).unwrap();
        for (r, count) in &mc.counts {
            writeln!(out, "    {} {{{},{}}}", quote(r), count, mc.samples).unwrap();
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

/// The exact table next to Monte Carlo frequencies.
pub fn render_simulation(
    table: &OutcomeTable,
    simulation: &MonteCarloReport,
    format: ReportFormat,
) -> String {
    match format {
        ReportFormat::Machine => render_machine(table, Some(simulation)),
        ReportFormat::Table => {
            let mut out = render_table(table, false);
            writeln!(
                out,
                "\nsimulation  samples {}  seed {}\n",
                simulation.samples, simulation.seed
            )
            .unwrap();
            let mut rows = vec![["result", "exact", "empirical", "count", "|diff|"]
                .map(String::from)
                .to_vec()];
            for (r, &count) in &simulation.counts {
                let exact = table.result_given_outcome(r);
                let freq = count as f64 / simulation.samples as f64;
                let diff = exact
                    .and_then(ToPrimitive::to_f64)
                    .map(|e| (freq - e).abs());
                rows.push(vec![
                    r.clone(),
                    exact.map_or_else(|| "-".into(), fraction),
                    format!("{freq:.6}"),
                    count.to_string(),
                    diff.map_or_else(|| "-".into(), |d| format!("{d:.6}")),
                ]);
            }
            out.push_str(&columns(&rows));
            writeln!(out, "\nmax |diff|  {:.6}", simulation.max_deviation(table)).unwrap();
            out
        }
    }
}
