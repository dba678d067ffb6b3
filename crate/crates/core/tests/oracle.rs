//! The enumerator against the brute-force reference in `common`.

mod common;

use common::{naive_survey, rescale};
use genprob::enumerator::{
    enumerate_valid, estimate_probability, kraft_profile, kraft_report, optimal_compression,
};
use genprob::mlang::{EvalLimit, Output};

const DEPTH: u32 = 15;

#[test]
fn valid_programs_match_brute_force() {
    let survey = naive_survey(DEPTH);
    for depth in 3..=DEPTH {
        let ours: Vec<(u32, String)> = enumerate_valid(depth as usize)
            .unwrap()
            .map(|p| (p.length_bits() as u32, p.bits().to_string()))
            .collect();
        let naive: Vec<(u32, String)> = survey
            .valid
            .iter()
            .filter(|(l, _)| *l <= depth)
            .cloned()
            .collect();
        assert_eq!(ours, naive, "depth {depth}");
    }
    // the small cases quoted in the docs
    assert_eq!(survey.valid.iter().filter(|(l, _)| *l <= 5).count(), 1);
    assert_eq!(survey.valid.iter().filter(|(l, _)| *l <= 6).count(), 7);
}

#[test]
fn mass_estimates_match_brute_force() {
    let survey = naive_survey(DEPTH);
    let limit = EvalLimit::default();
    let mut targets: Vec<String> = survey.by_output.keys().cloned().collect();
    targets.extend(["0000000".into(), "|||||".into(), "10101".into()]);

    for target in &targets {
        let out: Output = target.parse().unwrap();
        let naive = survey.by_output.get(target).cloned().unwrap_or_default();
        for depth in 3..=DEPTH {
            let est = estimate_probability(&out, depth as usize, limit).unwrap();
            assert_eq!(
                rescale(est.mass.numerator(), est.mass.exponent(), DEPTH),
                naive.mass(depth, DEPTH),
                "mass of {target:?} at {depth}"
            );
            assert_eq!(
                est.generator_count,
                naive.count(depth),
                "count of {target:?} at {depth}"
            );
            assert_eq!(
                est.shortest
                    .as_ref()
                    .map(|p| p.bits().to_string())
                    .as_deref(),
                naive.shortest(depth),
                "shortest for {target:?} at {depth}"
            );
        }
    }
}

#[test]
fn compressions_match_brute_force() {
    let survey = naive_survey(DEPTH);
    let limit = EvalLimit::default();
    for (target, naive) in &survey.by_output {
        let out: Output = target.parse().unwrap();
        let c = optimal_compression(&out, DEPTH as usize, limit)
            .unwrap()
            .unwrap();
        assert_eq!(
            Some(c.program.bits().to_string().as_str()),
            naive.shortest(DEPTH)
        );
        assert_eq!(c.entropy_bits, naive.programs[0].0 as usize);
    }
}

#[test]
fn kraft_sums_match_brute_force() {
    let survey = naive_survey(DEPTH);
    let limit = EvalLimit::default();
    let profile = kraft_profile(DEPTH as usize, limit).unwrap();
    for report in &profile {
        let d = report.depth_bits as u32;
        assert_eq!(
            rescale(
                report.total_mass.numerator(),
                report.total_mass.exponent(),
                DEPTH
            ),
            survey.kraft(d, DEPTH),
            "depth {d}"
        );
        assert_eq!(kraft_report(d as usize, limit).unwrap(), *report);
    }
    // 1/8 + 6/64
    assert_eq!(survey.kraft(6, 6), 14);
}
