//! Property suites for the library invariants: normal-form soundness,
//! mutation monotonicity, effective-interval propagation, round trips,
//! engine duality and fast-path agreement, abstraction commutation.

mod common;

use common::{gen_formula, gen_trace, GenOptions, TemporalOps};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempolint::debugger::{debug_pipeline, DebugConfig};
use tempolint::interval::Interval;
use tempolint::monitor::{abstract_trace, evaluate, TimedTrace};
use tempolint::predicate::table_for_formula;
use tempolint::rational::{rat, Rational};
use tempolint::sat::{
    check_sat, fragment_classify, ltl_fast_path, FastPathVerdict, Fragment, GridConfig, SatStatus,
};
use tempolint::{
    annotate_effective_intervals, is_nnf, lit_occurrences, negate, parse, substitute_occurrence,
    to_nnf, Cmp, Formula, Replacement,
};

fn arb_interval() -> impl Strategy<Value = Interval> {
    (0i64..=3, 1i64..=3).prop_map(|(l, d)| Interval::closed(rat(l), rat(l + d)).unwrap())
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        prop_oneof![Just("a"), Just("b"), Just("c")].prop_map(Formula::atom),
    ];
    leaf.prop_recursive(4, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::implies(l, r)),
            (arb_interval(), inner.clone()).prop_map(|(iv, f)| Formula::eventually(iv, f)),
            (arb_interval(), inner).prop_map(|(iv, f)| Formula::always(iv, f)),
        ]
    })
}

/// Bool trace over a/b/c with integer timestamps.
fn arb_trace() -> impl Strategy<Value = TimedTrace> {
    (1usize..7, proptest::collection::vec(any::<u8>(), 7 * 3), 0i64..4).prop_map(
        |(samples, bits, extra)| {
            let times: Vec<Rational> = (0..samples as i64).map(rat).collect();
            let columns = ["a", "b", "c"]
                .iter()
                .enumerate()
                .map(|(ai, name)| {
                    let samples = (0..samples)
                        .map(|t| if bits[ai * 7 + t] & 1 == 1 { rat(1) } else { rat(0) })
                        .collect();
                    (name.to_string(), samples)
                })
                .collect();
            TimedTrace::new(
                "prop",
                times,
                columns,
                Some(rat(samples as i64 - 1 + extra)),
            )
            .unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn nnf_preserves_monitor_semantics((f, trace) in (arb_formula(), arb_trace())) {
        let nnf = to_nnf(&f);
        prop_assert!(is_nnf(&nnf));
        prop_assert_eq!(
            evaluate(&trace, &f, &rat(0)).unwrap(),
            evaluate(&trace, &nnf, &rat(0)).unwrap()
        );
    }

    #[test]
    fn negation_flips_the_verdict((f, trace) in (arb_formula(), arb_trace())) {
        let neg = negate(&f);
        prop_assert_eq!(
            evaluate(&trace, &f, &rat(0)).unwrap(),
            !evaluate(&trace, &neg, &rat(0)).unwrap()
        );
    }

    #[test]
    fn horizon_is_stable_under_nnf(f in arb_formula()) {
        prop_assert_eq!(f.horizon(), to_nnf(&f).horizon());
    }

    #[test]
    fn print_parse_identity(f in arb_formula()) {
        let printed = f.to_string();
        let reparsed = parse(&printed).unwrap();
        prop_assert_eq!(f, reparsed, "through `{}`", printed);
    }

    #[test]
    fn mutation_monotonicity((f, trace, pick) in (arb_formula(), arb_trace(), any::<u32>())) {
        let nnf = to_nnf(&f);
        let occurrences = lit_occurrences(&nnf).unwrap();
        prop_assume!(!occurrences.is_empty());
        let occ = &occurrences[pick as usize % occurrences.len()];

        let bottom = substitute_occurrence(&nnf, occ, Replacement::Bottom).unwrap();
        if evaluate(&trace, &bottom, &rat(0)).unwrap() {
            prop_assert!(evaluate(&trace, &nnf, &rat(0)).unwrap());
        }
        let top = substitute_occurrence(&nnf, occ, Replacement::Top).unwrap();
        if !evaluate(&trace, &nnf, &rat(0)).unwrap() {
            prop_assert!(!evaluate(&trace, &top, &rat(0)).unwrap());
        }
    }

    #[test]
    fn effective_intervals_shift_exactly_under_temporal_operators(f in arb_formula()) {
        let ei = annotate_effective_intervals(&f);
        prop_assert_eq!(ei.get(&[]), Some(&Interval::zero()));
        for (path, node) in f.walk() {
            let own = *ei.get(&path).unwrap();
            for (idx, _) in node.children().into_iter().enumerate() {
                let mut child_path = path.clone();
                child_path.push(idx);
                let child_ei = *ei.get(&child_path).unwrap();
                match node {
                    Formula::Eventually(iv, _) | Formula::Always(iv, _) => {
                        prop_assert_eq!(child_ei, own.add(iv));
                    }
                    _ => prop_assert_eq!(child_ei, own),
                }
            }
        }
    }
}

proptest! {
    // SAT-engine properties issue real solver calls; keep the case count down.
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sat_duality_never_reports_both_unsat(f in arb_formula()) {
        let cfg = GridConfig::default();
        let direct = check_sat(&to_nnf(&f), &[], &cfg).unwrap().status;
        let negated = check_sat(&negate(&f), &[], &cfg).unwrap().status;
        prop_assert!(
            direct == SatStatus::Sat || negated == SatStatus::Sat,
            "both {} and its negation UNSAT",
            f
        );
    }

    #[test]
    fn witnesses_satisfy_their_formula(f in arb_formula()) {
        let nnf = to_nnf(&f);
        let verdict = check_sat(&nnf, &[], &GridConfig::default()).unwrap();
        if let Some(witness) = verdict.witness {
            prop_assert!(evaluate(&witness, &nnf, &rat(0)).unwrap(), "{}", nnf);
        }
    }
}

#[test]
fn fast_path_conclusive_verdicts_match_the_grid_engine() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let cfg = GridConfig::default();
    let mutex: Vec<Vec<String>> = vec![vec!["a".to_string(), "c".to_string()]];
    let mut conclusive = 0;
    for i in 0..300 {
        let temporal = if i % 2 == 0 {
            TemporalOps::EventuallyOnly
        } else {
            TemporalOps::AlwaysOnly
        };
        let opts = GenOptions {
            temporal,
            max_depth: 3,
            ..GenOptions::default()
        };
        let f = to_nnf(&gen_formula(&mut rng, &opts));
        if fragment_classify(&f).unwrap() == Fragment::Mixed {
            continue;
        }
        let (fast, _) = ltl_fast_path(&f, &mutex).unwrap();
        let grid = check_sat(&f, &mutex, &cfg).unwrap().status;
        match fast {
            FastPathVerdict::Sat => {
                conclusive += 1;
                assert_eq!(grid, SatStatus::Sat, "{f}");
            }
            FastPathVerdict::Unsat => {
                conclusive += 1;
                assert_eq!(grid, SatStatus::Unsat, "{f}");
            }
            FastPathVerdict::Inconclusive => {}
        }
    }
    assert!(conclusive > 50, "fast path almost never concluded");
}

/// Satisfaction carries over to the untimed relaxation for eventually-only
/// formulas, and back from it for always-only ones. The relaxation of an
/// interval on a trace of duration T is the full window [0, T].
#[test]
fn untimed_containment_on_random_fragment_formulas() {
    fn relax(f: &Formula, duration: Rational) -> Formula {
        let full = Interval::closed(rat(0), duration).unwrap();
        match f {
            Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
            Formula::Not(c) => Formula::not(relax(c, duration)),
            Formula::And(l, r) => Formula::and(relax(l, duration), relax(r, duration)),
            Formula::Or(l, r) => Formula::or(relax(l, duration), relax(r, duration)),
            Formula::Implies(l, r) => Formula::implies(relax(l, duration), relax(r, duration)),
            Formula::Eventually(_, c) => Formula::eventually(full, relax(c, duration)),
            Formula::Always(_, c) => Formula::always(full, relax(c, duration)),
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0;
    for i in 0..400 {
        let temporal = if i % 2 == 0 {
            TemporalOps::EventuallyOnly
        } else {
            TemporalOps::AlwaysOnly
        };
        let opts = GenOptions {
            temporal,
            max_depth: 3,
            ..GenOptions::default()
        };
        let f = to_nnf(&gen_formula(&mut rng, &opts));
        let trace = gen_trace(&mut rng, 5, 8);
        let timed = evaluate(&trace, &f, &rat(0)).unwrap();
        let untimed = evaluate(&trace, &relax(&f, trace.duration()), &rat(0)).unwrap();
        match temporal {
            TemporalOps::EventuallyOnly => {
                if timed {
                    assert!(untimed, "{f}");
                    checked += 1;
                }
            }
            TemporalOps::AlwaysOnly => {
                if untimed {
                    assert!(timed, "{f}");
                    checked += 1;
                }
            }
            TemporalOps::Both => unreachable!(),
        }
    }
    assert!(checked > 40, "containment checks rarely applicable");
}

/// Monitoring an STL formula directly and monitoring its abstraction on the
/// abstracted trace agree at every sample time.
#[test]
fn abstraction_commutes_with_monitoring() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let thresholds = [80, 100, 120];
    for _ in 0..200 {
        // Random STL formula over speed thresholds.
        let f = random_stl(&mut rng, 3, &thresholds);
        let table = table_for_formula(&f);
        let abstracted = tempolint::predicate::abstract_formula(&f, &table).unwrap();

        // Random speed signal.
        let samples = rng.random_range(2..6usize);
        let times: Vec<Rational> = (0..samples as i64).map(rat).collect();
        let speeds: Vec<Rational> = (0..samples)
            .map(|_| rat(rng.random_range(60..140)))
            .collect();
        let trace = TimedTrace::new(
            "stl",
            times.clone(),
            vec![("speed".to_string(), speeds)],
            Some(rat(samples as i64 + 2)),
        )
        .unwrap();
        let boolean = abstract_trace(&trace, &table).unwrap();

        for t in &times {
            assert_eq!(
                evaluate(&trace, &f, t).unwrap(),
                evaluate(&boolean, &abstracted, t).unwrap(),
                "{f} at {t}"
            );
        }
    }
}

use rand::Rng;

fn random_stl(rng: &mut ChaCha8Rng, depth: u32, thresholds: &[i64]) -> Formula {
    if depth == 0 {
        let threshold = thresholds[rng.random_range(0..thresholds.len())];
        let cmp = match rng.random_range(0..4) {
            0 => Cmp::Gt,
            1 => Cmp::Ge,
            2 => Cmp::Lt,
            _ => Cmp::Le,
        };
        return Formula::pred("speed", cmp, rat(threshold));
    }
    match rng.random_range(0..5) {
        0 => random_stl(rng, 0, thresholds),
        1 => Formula::and(
            random_stl(rng, depth - 1, thresholds),
            random_stl(rng, depth - 1, thresholds),
        ),
        2 => Formula::or(
            random_stl(rng, depth - 1, thresholds),
            random_stl(rng, depth - 1, thresholds),
        ),
        3 => Formula::eventually(
            Interval::closed(rat(0), rat(rng.random_range(1..4))).unwrap(),
            random_stl(rng, depth - 1, thresholds),
        ),
        _ => Formula::always(
            Interval::closed(rat(0), rat(rng.random_range(1..4))).unwrap(),
            random_stl(rng, depth - 1, thresholds),
        ),
    }
}

/// Reported vacuous mutations are equivalent to the original specification.
#[test]
fn vacuous_mutations_are_equivalent() {
    let cases = [
        ("F[0,40](((p1 || p3) -> F[0,20]p2) && G[0,30]p1)", vec![vec!["p1".to_string(), "p3".to_string()]]),
        ("p || F[0,10]p", vec![]),
        ("F[0,30]p1 && (p2 || F[0,10]p2)", vec![]),
    ];
    for (text, mutex) in cases {
        let f = parse(text).unwrap();
        let cfg = DebugConfig {
            extra_mutex: mutex.clone(),
            ..DebugConfig::default()
        };
        let report = debug_pipeline(&f, None, &cfg).unwrap();
        for finding in report.vacuity_findings() {
            let fwd = tempolint::sat::entails(&report.nnf, &finding.mutated, &mutex, &cfg.grid).unwrap();
            let back = tempolint::sat::entails(&finding.mutated, &report.nnf, &mutex, &cfg.grid).unwrap();
            assert!(fwd && back, "{text}: mutation not equivalent");
        }
    }
}

/// Replacing a redundant conjunct by `true` keeps the specification
/// equivalent.
#[test]
fn redundant_conjuncts_are_removable() {
    let cases = [
        "F[0,30]p1 && F[0,20]p1",
        "G[0,40]p1 && G[0,40]F[0,10]p1",
        "F[0,10](p && G[0,10]p)",
    ];
    let cfg = GridConfig::default();
    for text in cases {
        let f = parse(text).unwrap();
        let nnf = to_nnf(&f);
        let findings = tempolint::debugger::check_redundancy(&f, &[], &cfg).unwrap();
        assert!(!findings.is_empty(), "{text}");
        for finding in findings {
            // Rebuild the conjunction with the redundant conjunct dropped.
            let kept: Vec<Formula> = finding
                .context
                .flatten_and()
                .into_iter()
                .enumerate()
                .filter(|(i, _)| *i != finding.conjunct_index)
                .map(|(_, c)| c.clone())
                .collect();
            let reduced_context = Formula::conjunction(kept);
            let reduced = nnf
                .replace_at(&finding.context_path, reduced_context)
                .unwrap();
            assert!(tempolint::sat::entails(&nnf, &reduced, &[], &cfg).unwrap(), "{text}");
            assert!(tempolint::sat::entails(&reduced, &nnf, &[], &cfg).unwrap(), "{text}");
        }
    }
}
