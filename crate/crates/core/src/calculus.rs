//! The exact scenario calculus.
//!
//! A [`Scenario`] lists the indistinguishable pre-observation states, the
//! situations (model programs) that could have produced them, the results
//! each situation generates, and the partition of results into outcomes the
//! observer cannot tell apart. From that the calculus derives, with exact
//! rationals:
//!
//! * the branch factor `B(o) = N(o|L) / N(o|M|L)` of each outcome,
//! * `p(o) = B(o) 2^-H(o) / Z` with `Z = sum_k B(o_k) 2^-H(o_k)`,
//! * `p(r|o) = p(o) / N(o|L)` for the results of the compression situation,
//! * `p(r|i) = 1 / |R(i)|` within each situation.
//!
//! An outcome compresses to the situation of least entropy among those that
//! generate any of its results (lowest situation id on ties).

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Entropy assigned to every situation when a scenario declares none.
pub const DEFAULT_ENTROPY_BITS: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResultRef {
    pub id: String,
    /// The member of `M` this result continues.
    pub prestate: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Situation {
    pub id: String,
    pub entropy_bits: BigRational,
    pub results: Vec<ResultRef>,
}

impl Situation {
    pub fn new(id: impl Into<String>, entropy_bits: u32) -> Self {
        Self::with_entropy(id, BigRational::from_integer(entropy_bits.into()))
    }

    pub fn with_entropy(id: impl Into<String>, entropy_bits: BigRational) -> Self {
        Self {
            id: id.into(),
            entropy_bits,
            results: Vec::new(),
        }
    }

    pub fn result(mut self, id: impl Into<String>, prestate: impl Into<String>) -> Self {
        self.results.push(ResultRef {
            id: id.into(),
            prestate: prestate.into(),
        });
        self
    }

    pub fn contains(&self, result_id: &str) -> bool {
        self.results.iter().any(|r| r.id == result_id)
    }
}

/// A declared equivalence class of results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeClass {
    pub id: String,
    pub results: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub id: String,
    pub prestates: Vec<String>,
    pub situations: Vec<Situation>,
    pub outcomes: Vec<OutcomeClass>,
}

impl Scenario {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            prestates: Vec::new(),
            situations: Vec::new(),
            outcomes: Vec::new(),
        }
    }

    pub fn prestates<I, S>(mut self, labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.prestates.extend(labels.into_iter().map(Into::into));
        self
    }

    pub fn situation(mut self, situation: Situation) -> Self {
        self.situations.push(situation);
        self
    }

    pub fn outcome<I, S>(mut self, id: impl Into<String>, results: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.outcomes.push(OutcomeClass {
            id: id.into(),
            results: results.into_iter().map(Into::into).collect(),
        });
        self
    }

    pub fn find_situation(&self, id: &str) -> Option<&Situation> {
        self.situations.iter().find(|s| s.id == id)
    }

    /// Adds `bits` to every situation's entropy.
    pub fn shift_entropy(&self, bits: i64) -> Scenario {
        let mut shifted = self.clone();
        let delta = BigRational::from_integer(bits.into());
        for s in &mut shifted.situations {
            s.entropy_bits = &s.entropy_bits + &delta;
        }
        shifted
    }

    fn all_results(&self) -> impl Iterator<Item = (&Situation, &ResultRef)> {
        self.situations
            .iter()
            .flat_map(|s| s.results.iter().map(move |r| (s, r)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Violation {
    NoPrestates,
    NoSituations,
    DuplicatePrestate(String),
    DuplicateSituation(String),
    DuplicateResult(String),
    DuplicateOutcome(String),
    EmptyResults {
        situation: String,
    },
    EmptyOutcome {
        outcome: String,
    },
    NonPositiveEntropy {
        situation: String,
    },
    UnknownPrestate {
        result: String,
        prestate: String,
    },
    UnknownResult {
        outcome: String,
        result: String,
    },
    /// A result that belongs to no outcome.
    NonTotalPartition {
        result: String,
    },
    /// A result claimed by more than one outcome.
    OverlappingPartition {
        result: String,
        outcome: String,
    },
}

impl Violation {
    pub fn code(&self) -> &'static str {
        match self {
            Violation::NoPrestates => "NO_PRESTATES",
            Violation::NoSituations => "NO_SITUATIONS",
            Violation::DuplicatePrestate(_)
            | Violation::DuplicateSituation(_)
            | Violation::DuplicateResult(_)
            | Violation::DuplicateOutcome(_) => "DUPLICATE_ID",
            Violation::EmptyResults { .. } => "EMPTY_RESULTS",
            Violation::EmptyOutcome { .. } => "EMPTY_OUTCOME",
            Violation::NonPositiveEntropy { .. } => "NON_POSITIVE_ENTROPY",
            Violation::UnknownPrestate { .. } => "UNKNOWN_PRESTATE",
            Violation::UnknownResult { .. } => "UNKNOWN_RESULT",
            Violation::NonTotalPartition { .. } => "NON_TOTAL_PARTITION",
            Violation::OverlappingPartition { .. } => "OVERLAPPING_PARTITION",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoPrestates => write!(f, "no prestates declared"),
            Violation::NoSituations => write!(f, "no situations declared"),
            Violation::DuplicatePrestate(id) => write!(f, "duplicate prestate `{id}`"),
            Violation::DuplicateSituation(id) => write!(f, "duplicate situation `{id}`"),
            Violation::DuplicateResult(id) => write!(f, "duplicate result `{id}`"),
            Violation::DuplicateOutcome(id) => write!(f, "duplicate outcome `{id}`"),
            Violation::EmptyResults { situation } => {
                write!(f, "situation `{situation}` has no results")
            }
            Violation::EmptyOutcome { outcome } => write!(f, "outcome `{outcome}` has no results"),
            Violation::NonPositiveEntropy { situation } => {
                write!(f, "situation `{situation}` has non-positive entropy")
            }
            Violation::UnknownPrestate { result, prestate } => {
                write!(
                    f,
                    "result `{result}` continues unknown prestate `{prestate}`"
                )
            }
            Violation::UnknownResult { outcome, result } => {
                write!(f, "outcome `{outcome}` names unknown result `{result}`")
            }
            Violation::NonTotalPartition { result } => {
                write!(f, "result `{result}` belongs to no outcome")
            }
            Violation::OverlappingPartition { result, outcome } => {
                write!(
                    f,
                    "result `{result}` is claimed again by outcome `{outcome}`"
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Warning {
    /// An outcome whose results come from more than one situation. Only the
    /// compression situation's results share the outcome's probability.
    SplitOutcome {
        outcome: String,
        situations: Vec<String>,
    },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::SplitOutcome {
                outcome,
                situations,
            } => write!(
                f,
                "outcome `{outcome}` spans situations {}; only its compression situation shares p(o)",
                situations.join(", ")
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("invalid scenario: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("situation `{situation}` has non-integral entropy {entropy}")]
    NonIntegralEntropy { situation: String, entropy: String },
    #[error("result `{result}` is not generated by situation `{situation}`")]
    ResultNotInSituation { result: String, situation: String },
    #[error("sample count must be at least 1")]
    NoSamples,
}

impl CalculusError {
    pub fn code(&self) -> &'static str {
        match self {
            CalculusError::Invalid(_) => "INVALID_SCENARIO",
            CalculusError::NonIntegralEntropy { .. } => "NON_INTEGRAL_ENTROPY",
            CalculusError::ResultNotInSituation { .. } => "RESULT_NOT_IN_SITUATION",
            CalculusError::NoSamples => "NO_SAMPLES",
        }
    }
}

/// Reports every structural problem with `s`, plus warnings for
/// configurations the calculus accepts but treats specially.
pub fn validate_scenario(s: &Scenario) -> ValidationReport {
    let mut report = ValidationReport::default();
    let v = &mut report.violations;

    if s.prestates.is_empty() {
        v.push(Violation::NoPrestates);
    }
    if s.situations.is_empty() {
        v.push(Violation::NoSituations);
    }

    let mut seen = HashSet::new();
    for p in &s.prestates {
        if !seen.insert(p.as_str()) {
            v.push(Violation::DuplicatePrestate(p.clone()));
        }
    }
    let prestates = seen;

    let mut seen = HashSet::new();
    for sit in &s.situations {
        if !seen.insert(sit.id.as_str()) {
            v.push(Violation::DuplicateSituation(sit.id.clone()));
        }
        if sit.results.is_empty() {
            v.push(Violation::EmptyResults {
                situation: sit.id.clone(),
            });
        }
        if !sit.entropy_bits.is_positive() {
            v.push(Violation::NonPositiveEntropy {
                situation: sit.id.clone(),
            });
        }
    }

    let mut results: HashMap<&str, &str> = HashMap::new();
    for (sit, r) in s.all_results() {
        if results.insert(r.id.as_str(), sit.id.as_str()).is_some() {
            v.push(Violation::DuplicateResult(r.id.clone()));
        }
        if !prestates.contains(r.prestate.as_str()) {
            v.push(Violation::UnknownPrestate {
                result: r.id.clone(),
                prestate: r.prestate.clone(),
            });
        }
    }

    let mut seen = HashSet::new();
    let mut claimed: HashSet<&str> = HashSet::new();
    for o in &s.outcomes {
        if !seen.insert(o.id.as_str()) {
            v.push(Violation::DuplicateOutcome(o.id.clone()));
        }
        if o.results.is_empty() {
            v.push(Violation::EmptyOutcome {
                outcome: o.id.clone(),
            });
        }
        let mut spanned = BTreeSet::new();
        for r in &o.results {
            match results.get(r.as_str()) {
                None => v.push(Violation::UnknownResult {
                    outcome: o.id.clone(),
                    result: r.clone(),
                }),
                Some(sit) => {
                    spanned.insert(*sit);
                }
            }
            if !claimed.insert(r.as_str()) {
                v.push(Violation::OverlappingPartition {
                    result: r.clone(),
                    outcome: o.id.clone(),
                });
            }
        }
        if spanned.len() > 1 {
            report.warnings.push(Warning::SplitOutcome {
                outcome: o.id.clone(),
                situations: spanned.into_iter().map(String::from).collect(),
            });
        }
    }

    for (_, r) in s.all_results() {
        if !claimed.contains(r.id.as_str()) {
            v.push(Violation::NonTotalPartition {
                result: r.id.clone(),
            });
        }
    }

    report
}

fn ensure_valid(s: &Scenario) -> Result<(), CalculusError> {
    let report = validate_scenario(s);
    if report.is_ok() {
        Ok(())
    } else {
        Err(CalculusError::Invalid(report.violations))
    }
}

/// An outcome with its compression situation and branch factor resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub id: String,
    pub results: Vec<ResultRef>,
    pub compression_situation: String,
    /// `H(o)`: the compression situation's entropy.
    pub entropy_bits: BigRational,
    /// Result ids generated by the compression situation.
    pub compression_results: Vec<String>,
    /// `N(o|L)`
    pub n_compression: u64,
    /// `N(o|M|L)`: distinct prestates among the compression results.
    pub n_generators: u64,
    pub branch_factor: BigRational,
}

/// Resolves the declared outcome classes of a valid scenario.
pub fn resolve_outcomes(s: &Scenario) -> Result<Vec<Outcome>, CalculusError> {
    ensure_valid(s)?;

    let owner: HashMap<&str, (&Situation, &ResultRef)> = s
        .all_results()
        .map(|(sit, r)| (r.id.as_str(), (sit, r)))
        .collect();

    let outcomes = s
        .outcomes
        .iter()
        .map(|class| {
            let members: Vec<(&Situation, &ResultRef)> =
                class.results.iter().map(|r| owner[r.as_str()]).collect();
            let compression = members
                .iter()
                .map(|(sit, _)| *sit)
                .min_by(|a, b| {
                    a.entropy_bits
                        .cmp(&b.entropy_bits)
                        .then_with(|| a.id.cmp(&b.id))
                })
                .expect("validated outcomes are nonempty");

            let compression_refs: Vec<&ResultRef> = members
                .iter()
                .filter(|(sit, _)| sit.id == compression.id)
                .map(|(_, r)| *r)
                .collect();
            let n_compression = compression_refs.len() as u64;
            let n_generators = compression_refs
                .iter()
                .map(|r| r.prestate.as_str())
                .collect::<HashSet<_>>()
                .len() as u64;

            Outcome {
                id: class.id.clone(),
                results: members.iter().map(|(_, r)| (*r).clone()).collect(),
                compression_situation: compression.id.clone(),
                entropy_bits: compression.entropy_bits.clone(),
                compression_results: compression_refs.iter().map(|r| r.id.clone()).collect(),
                n_compression,
                n_generators,
                branch_factor: BigRational::new(n_compression.into(), n_generators.into()),
            }
        })
        .collect();
    Ok(outcomes)
}

/// `p(r|i) = 1 / |R(i)|`.
pub fn situation_result_probability(
    result: &ResultRef,
    situation: &Situation,
) -> Result<BigRational, CalculusError> {
    if !situation.contains(&result.id) {
        return Err(CalculusError::ResultNotInSituation {
            result: result.id.clone(),
            situation: situation.id.clone(),
        });
    }
    Ok(BigRational::new(
        BigInt::one(),
        BigInt::from(situation.results.len()),
    ))
}

/// `2^-h` for a nonnegative integral `h`.
fn pow2_neg(h: &BigRational) -> BigRational {
    let exp = h
        .to_integer()
        .to_u32()
        .expect("entropy checked integral and in range");
    BigRational::new(BigInt::one(), BigInt::one() << exp)
}

fn integral_entropy(situation: &Situation) -> Result<(), CalculusError> {
    let h = &situation.entropy_bits;
    if h.is_integer() && h.to_integer().to_u32().is_some() {
        Ok(())
    } else {
        Err(CalculusError::NonIntegralEntropy {
            situation: situation.id.clone(),
            entropy: h.to_string(),
        })
    }
}

/// The probability entries of an [`OutcomeTable`].
///
/// These are what an observer reads off; they do not change when every
/// situation's entropy moves by the same constant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Probabilities {
    /// `p(o)` by outcome id.
    pub outcome: IndexMap<String, BigRational>,
    /// `p(r|o)` by result id, for compression results.
    pub result_given_outcome: IndexMap<String, BigRational>,
    /// `p(r|i)` by `(result id, situation id)`.
    pub result_given_situation: IndexMap<(String, String), BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeTable {
    pub scenario: String,
    /// `Z = sum_k B(o_k) 2^-H(o_k)`.
    pub normalization: BigRational,
    pub outcomes: Vec<Outcome>,
    pub probabilities: Probabilities,
    pub warnings: Vec<Warning>,
}

impl OutcomeTable {
    pub fn outcome_probability(&self, outcome: &str) -> Option<&BigRational> {
        self.probabilities.outcome.get(outcome)
    }

    pub fn result_given_outcome(&self, result: &str) -> Option<&BigRational> {
        self.probabilities.result_given_outcome.get(result)
    }

    pub fn result_given_situation(&self, result: &str, situation: &str) -> Option<&BigRational> {
        self.probabilities
            .result_given_situation
            .get(&(result.to_string(), situation.to_string()))
    }

    pub fn outcome(&self, id: &str) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.id == id)
    }

    /// The outcome a result belongs to.
    pub fn outcome_of(&self, result: &str) -> Option<&Outcome> {
        self.outcomes
            .iter()
            .find(|o| o.results.iter().any(|r| r.id == result))
    }
}

/// Computes every probability of a valid scenario exactly.
pub fn outcome_probabilities(s: &Scenario) -> Result<OutcomeTable, CalculusError> {
    let report = validate_scenario(s);
    if !report.is_ok() {
        return Err(CalculusError::Invalid(report.violations));
    }
    for sit in &s.situations {
        integral_entropy(sit)?;
    }
    let outcomes = resolve_outcomes(s)?;

    let weights: Vec<BigRational> = outcomes
        .iter()
        .map(|o| &o.branch_factor * pow2_neg(&o.entropy_bits))
        .collect();
    let normalization: BigRational = weights.iter().fold(BigRational::zero(), |a, w| a + w);

    let mut probs = Probabilities::default();
    for (o, w) in outcomes.iter().zip(&weights) {
        let p = w / &normalization;
        let share = &p / BigRational::from_integer(o.n_compression.into());
        for r in &o.compression_results {
            probs.result_given_outcome.insert(r.clone(), share.clone());
        }
        probs.outcome.insert(o.id.clone(), p);
    }
    for sit in &s.situations {
        for r in &sit.results {
            let p = situation_result_probability(r, sit)?;
            probs
                .result_given_situation
                .insert((r.id.clone(), sit.id.clone()), p);
        }
    }

    Ok(OutcomeTable {
        scenario: s.id.clone(),
        normalization,
        outcomes,
        probabilities: probs,
        warnings: report.warnings,
    })
}

/// Empirical result frequencies from [`monte_carlo_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonteCarloReport {
    pub samples: u64,
    pub seed: u64,
    /// Hit counts for every compression result, in table order.
    pub counts: IndexMap<String, u64>,
}

impl MonteCarloReport {
    pub fn frequency(&self, result: &str) -> Option<f64> {
        self.counts
            .get(result)
            .map(|&c| c as f64 / self.samples as f64)
    }

    pub fn frequencies(&self) -> impl Iterator<Item = (&str, f64)> + '_ {
        self.counts
            .iter()
            .map(|(id, &c)| (id.as_str(), c as f64 / self.samples as f64))
    }

    /// Largest `|frequency - p(r|o)|` over all sampled results.
    pub fn max_deviation(&self, table: &OutcomeTable) -> f64 {
        self.frequencies()
            .map(|(id, f)| {
                let exact = table
                    .result_given_outcome(id)
                    .and_then(ToPrimitive::to_f64)
                    .unwrap_or(0.0);
                (f - exact).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Samples an outcome by `p(o)`, then one of its compression results
/// uniformly, `samples` times. Deterministic for a given seed.
pub fn monte_carlo_check(
    s: &Scenario,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloReport, CalculusError> {
    if samples == 0 {
        return Err(CalculusError::NoSamples);
    }
    let table = outcome_probabilities(s)?;

    let mut cumulative = Vec::with_capacity(table.outcomes.len());
    let mut acc = 0.0;
    for o in &table.outcomes {
        acc += table.probabilities.outcome[&o.id].to_f64().unwrap_or(0.0);
        cumulative.push(acc);
    }

    let mut counts: IndexMap<String, u64> = table
        .outcomes
        .iter()
        .flat_map(|o| o.compression_results.iter().map(|r| (r.clone(), 0)))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let u: f64 = rng.random::<f64>() * acc;
        let k = cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(cumulative.len() - 1);
        let outcome = &table.outcomes[k];
        let n = outcome.compression_results.len() as u32;
        let j = rng.random_range(0..n) as usize;
        *counts
            .get_mut(&outcome.compression_results[j])
            .expect("counts cover every compression result") += 1;
    }

    Ok(MonteCarloReport {
        samples,
        seed,
        counts,
    })
}
