use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use genprob::calculus::{outcome_probabilities, Scenario, Situation};
use genprob::enumerator::{
    estimate_probability, estimate_probability_partitioned, estimate_probability_sequential,
    optimal_compression,
};
use genprob::mlang::{evaluate, EvalLimit, JumpOffset, Opcode, Output, Program};
use genprob::scenario_io::{parse_scenario, render_scenario};

fn q(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn opcode() -> impl Strategy<Value = Opcode> {
    prop_oneof![
        Just(Opcode::Inc),
        Just(Opcode::Dec),
        Just(Opcode::Swap),
        Just(Opcode::Out0),
        Just(Opcode::Out1),
        Just(Opcode::Sep),
        (-8i8..=7).prop_map(|o| Opcode::Jz(JumpOffset::new(o).unwrap())),
    ]
}

fn program() -> impl Strategy<Value = Program> {
    prop::collection::vec(opcode(), 0..8).prop_map(|mut ops| {
        ops.push(Opcode::Halt);
        Program::from_instructions(ops).unwrap()
    })
}

fn small_target() -> impl Strategy<Value = Output> {
    prop::sample::select(vec![
        "", "0", "1", "|", "00", "01", "1|0", "11", "0|", "000",
    ])
    .prop_map(|s| s.parse().unwrap())
}

proptest! {
    #[test]
    fn decode_inverts_encode(p in program()) {
        prop_assert_eq!(Program::decode(p.bits()).unwrap(), p.clone());
        prop_assert_eq!(p.to_string().parse::<Program>().unwrap(), p);
    }

    #[test]
    fn evaluation_is_deterministic_and_fuel_monotone(p in program(), n in 1u64..60, extra in 0u64..500) {
        let short = evaluate(&p, EvalLimit::new(n).unwrap());
        prop_assert_eq!(&short, &evaluate(&p, EvalLimit::new(n).unwrap()));
        if short.trace().is_some() {
            prop_assert_eq!(short, evaluate(&p, EvalLimit::new(n + extra).unwrap()));
        }
    }

    #[test]
    fn mass_is_monotone_in_depth(target in small_target(), depth in 3usize..=12) {
        let limit = EvalLimit::default();
        let a = estimate_probability(&target, depth, limit).unwrap();
        let b = estimate_probability(&target, depth + 3, limit).unwrap();
        prop_assert!(a.mass <= b.mass);
        prop_assert!(a.generator_count <= b.generator_count);
    }

    #[test]
    fn partitioning_does_not_change_estimates(
        target in small_target(),
        depth in 3usize..=14,
        prefix_bits in 0usize..=9,
    ) {
        let limit = EvalLimit::default();
        let seq = estimate_probability_sequential(&target, depth, limit).unwrap();
        let par = estimate_probability_partitioned(&target, depth, limit, prefix_bits).unwrap();
        prop_assert_eq!(seq, par);
    }

    #[test]
    fn compression_is_shortest_generator(target in small_target(), depth in 3usize..=14) {
        let limit = EvalLimit::default();
        let est = estimate_probability(&target, depth, limit).unwrap();
        let c = optimal_compression(&target, depth, limit).unwrap();
        prop_assert_eq!(
            c.as_ref().map(|c| c.entropy_bits),
            est.shortest.as_ref().map(Program::length_bits)
        );
        prop_assert_eq!(c.map(|c| c.program), est.shortest);
    }
}

/// A random valid scenario: situations with integer entropies, each result
/// on a random prestate, results dealt into outcomes.
fn scenario() -> impl Strategy<Value = Scenario> {
    (
        1usize..=4,
        prop::collection::vec((1u32..=12, 1usize..=4), 1..=4),
        any::<u64>(),
    )
        .prop_map(|(n_prestates, sits, salt)| {
            let prestates: Vec<String> = (0..n_prestates).map(|i| format!("m{i}")).collect();
            let mut s = Scenario::new("random").prestates(prestates.clone());
            let mut all = Vec::new();
            let mut k = salt;
            for (i, (h, n)) in sits.into_iter().enumerate() {
                let mut sit = Situation::new(format!("s{i}"), h);
                for j in 0..n {
                    k = k
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    let id = format!("r{i}_{j}");
                    sit = sit.result(
                        id.clone(),
                        prestates[(k >> 33) as usize % n_prestates].clone(),
                    );
                    all.push(id);
                }
                s = s.situation(sit);
            }
            let n_outcomes = 1 + (salt as usize % all.len());
            let mut classes: Vec<Vec<String>> = vec![Vec::new(); n_outcomes];
            for (i, r) in all.into_iter().enumerate() {
                classes[if i < n_outcomes {
                    i
                } else {
                    (salt as usize >> 7).wrapping_add(i * 31) % n_outcomes
                }]
                .push(r);
            }
            for (i, c) in classes.into_iter().enumerate() {
                s = s.outcome(format!("o{i}"), c);
            }
            s
        })
}

proptest! {
    #[test]
    fn tables_are_normalized(s in scenario()) {
        let t = outcome_probabilities(&s).unwrap();
        let total: BigRational = t.probabilities.outcome.values().cloned().sum();
        prop_assert_eq!(total, BigRational::one());

        for o in &t.outcomes {
            let shared: BigRational = o
                .compression_results
                .iter()
                .map(|r| t.result_given_outcome(r).unwrap().clone())
                .sum();
            prop_assert_eq!(&shared, t.outcome_probability(&o.id).unwrap());
            prop_assert_eq!(&o.branch_factor, &q(o.n_compression, o.n_generators));
        }
        for sit in &s.situations {
            let total: BigRational = sit
                .results
                .iter()
                .map(|r| t.result_given_situation(&r.id, &sit.id).unwrap().clone())
                .sum();
            prop_assert_eq!(total, BigRational::one());
        }
    }

    #[test]
    fn common_offset_leaves_probabilities_alone(s in scenario(), c in 1i64..=20) {
        let a = outcome_probabilities(&s).unwrap();
        let b = outcome_probabilities(&s.shift_entropy(c)).unwrap();
        prop_assert_eq!(&a.probabilities, &b.probabilities);
        let scale = BigRational::new(BigInt::one(), BigInt::one() << (c as u32));
        prop_assert_eq!(b.normalization, a.normalization * scale);
    }

    #[test]
    fn canonical_text_round_trips(s in scenario()) {
        let text = render_scenario(&s).unwrap();
        let doc = parse_scenario(&text);
        prop_assert!(!doc.has_errors(), "{:?}", doc.diagnostics);
        prop_assert_eq!(doc.scenario.unwrap(), s);
    }

    #[test]
    fn diagnostics_point_into_the_source(lines in prop::collection::vec("[a-z =\"#0-9]{0,20}", 0..8)) {
        let text = lines.join("\n");
        let doc = parse_scenario(&text);
        let n_lines = text.lines().count().max(1);
        for d in &doc.diagnostics {
            prop_assert!(d.position.line >= 1 && d.position.line <= n_lines, "{d}");
            prop_assert!(d.position.column >= 1);
            let width = text.lines().nth(d.position.line - 1).map_or(0, |l| l.chars().count());
            prop_assert!(d.position.column <= width + 1, "{d} in {text:?}");
        }
        prop_assert_eq!(doc.scenario.is_some(), !doc.has_errors());
    }
}

/// Brute-force evaluation of the outcome formula for one situation, one
/// prestate and the given class sizes.
fn replicator_by_formula(sizes: &[u64], h: u32) -> Vec<BigRational> {
    let weight = |n: u64| q(n, 1) * q(1, 1u64 << h);
    let z: BigRational = sizes.iter().map(|&n| weight(n)).sum();
    sizes.iter().map(|&n| weight(n) / &z).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generalized_replicator(sizes in prop::collection::vec(1u64..=10, 1..=6), h in 1u32..=20) {
        let total: u64 = sizes.iter().sum();
        let mut sit = Situation::new("s", h);
        let mut s = Scenario::new("replicator-n").prestates(["m"]);
        let mut classes = Vec::new();
        for (k, &n) in sizes.iter().enumerate() {
            let ids: Vec<String> = (0..n).map(|j| format!("o{k}-{j}")).collect();
            for id in &ids {
                sit = sit.result(id.clone(), "m");
            }
            classes.push((format!("o{k}"), ids));
        }
        s = s.situation(sit);
        for (id, ids) in classes {
            s = s.outcome(id, ids);
        }

        let t = outcome_probabilities(&s).unwrap();
        let formula = replicator_by_formula(&sizes, h);
        for (k, &n) in sizes.iter().enumerate() {
            let p = t.outcome_probability(&format!("o{k}")).unwrap();
            prop_assert_eq!(p, &q(n, total));
            prop_assert_eq!(p, &formula[k]);
            for j in 0..n {
                prop_assert_eq!(t.result_given_outcome(&format!("o{k}-{j}")).unwrap(), &q(1, total));
            }
        }
    }
}

#[test]
fn generalized_sleeping_beauty() {
    for n in 1..=8u64 {
        let tails_days: Vec<String> = (0..n).map(|d| format!("T_{d}")).collect();
        let mut tails = Situation::new("T", 3);
        for d in &tails_days {
            tails = tails.result(d.clone(), d.clone());
        }
        let s = Scenario::new("sb-n")
            .prestates(std::iter::once("H_0".to_string()).chain(tails_days.iter().cloned()))
            .situation(Situation::new("H", 3).result("H_0", "H_0"))
            .situation(tails)
            .outcome("H", ["H_0"])
            .outcome("T", tails_days.clone());
        let t = outcome_probabilities(&s).unwrap();
        assert_eq!(t.outcome_probability("H").unwrap(), &q(1, 2), "N={n}");
        assert_eq!(t.result_given_outcome("H_0").unwrap(), &q(1, 2));
        for d in &tails_days {
            assert_eq!(t.result_given_outcome(d).unwrap(), &q(1, 2 * n), "N={n}");
        }
        assert!(!t.probabilities.outcome.values().any(Zero::is_zero));
    }
}
