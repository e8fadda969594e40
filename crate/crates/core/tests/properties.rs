//! Seeded randomized properties of the oracle, the abstraction and inference.

mod common;

use std::collections::BTreeSet;

use buchi_core::automaton::{Automaton, Symbol};
use buchi_core::classes::ClassId;
use buchi_core::inference::{infer_finite, solve_infinite, solve_infinite_in_order, Analysis, Diagnostic};
use buchi_core::lang::{Expr, Program};
use buchi_core::lattice::lasso::overlap_by_product;
use buchi_core::lattice::{Abstraction, InfAbs, PairId};
use buchi_core::oracle::{self, LassoBounds, Outcome, Trace};
use rand::seq::SliceRandom;
use rand::Rng;

const CASES: u64 = 200;

fn pair_of_lasso(abs: &Abstraction, prefix: &[Symbol], period: &[Symbol]) -> PairId {
    let (c, d) = abs.classes().abstract_of_upword(prefix, period).unwrap();
    abs.pairs().lookup(c, d).unwrap()
}

fn syms(aut: &Automaton, t: &Trace) -> Vec<Symbol> {
    oracle::to_symbols(aut, t).unwrap()
}

#[test]
fn overlap_criterion_matches_product_emptiness() {
    let mut checked = 0;
    for seed in 0..CASES {
        let mut rng = common::rng(1000 + seed);
        let aut = common::random_automaton(&mut rng, 3, 2);
        let abs = Abstraction::new(aut);
        let infinite: Vec<PairId> = abs.pairs().ids().filter(|&p| !abs.pair(p).is_finite()).collect();
        if infinite.len() > 40 {
            continue;
        }
        for &p in &infinite {
            for &q in &infinite {
                assert_eq!(
                    overlap_by_product(abs.classes(), abs.pair(p), abs.pair(q)),
                    abs.pairs_overlap(p, q),
                    "seed {seed}: {} vs {}",
                    abs.pair_label(p),
                    abs.pair_label(q)
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 1000, "only {checked} pairs compared");
}

#[test]
fn feasible_prefix_agrees_with_bounded_extensions() {
    for seed in 0..CASES {
        let mut rng = common::rng(2000 + seed);
        let aut = common::random_automaton(&mut rng, 3, 3);
        let abs = Abstraction::new(aut.clone());
        let k = aut.num_symbols();
        let seeds: Vec<PairId> = abs.pairs().ids().filter(|_| rng.gen_bool(0.1)).collect();
        let v = abs.close(seeds);
        let reps: Vec<Vec<Symbol>> = abs.classes().ids().map(|c| abs.classes().representative(c).to_vec()).collect();
        for _ in 0..10 {
            let w = common::random_word(&mut rng, k, 4);
            // an extension lies in γ(v) iff its abstract pair does, because v is closed
            let member = |x: &[Symbol], y: &[Symbol]| {
                let wx: Vec<Symbol> = w.iter().chain(x).copied().collect();
                v.contains(pair_of_lasso(&abs, &wx, y))
            };
            let mut extended = false;
            'search: for x in common::all_words(k, 2).iter().chain(&reps) {
                if member(x, &[]) {
                    extended = true;
                    break;
                }
                for y in reps.iter().skip(1).chain(common::all_words(k, 2).iter().skip(1)) {
                    if member(x, y) {
                        extended = true;
                        break 'search;
                    }
                }
            }
            assert_eq!(abs.feasible_prefix(&w, &v).unwrap(), extended, "seed {seed}, word {w:?}");
        }
    }
}

#[test]
fn phi_iterates_are_monotone_and_below_the_finite_effect() {
    for seed in 0..CASES {
        let mut rng = common::rng(3000 + seed);
        let aut = common::random_automaton(&mut rng, 3, 3);
        let abs = Abstraction::new(aut.clone());
        let program = common::random_program(&mut rng, &aut, 4, 4);
        let fin = infer_finite(&abs, &program);
        let mut previous = oracle::PhiIterate::bottom(&program);
        for _ in 0..6 {
            let Some(next) = previous.step(&program, 2_000) else { break };
            for (i, words) in next.sets.iter().enumerate() {
                assert!(previous.sets[i].is_subset(words), "seed {seed}: iterate shrank");
                for w in words {
                    let c = abs.classes().class_of_word(&syms(&aut, w)).unwrap();
                    assert!(fin[i].contains(c), "seed {seed}: {w:?} outside U");
                }
            }
            previous = next;
        }
    }
}

#[test]
fn prefixes_grow_with_the_budget() {
    for seed in 0..CASES {
        let mut rng = common::rng(4000 + seed);
        let aut = common::random_automaton(&mut rng, 2, 3);
        let program = common::random_program(&mut rng, &aut, 4, 4);
        let f = program.first();
        let mut previous = oracle::enumerate_prefixes(&program, f, 0);
        assert_eq!(previous, BTreeSet::from([(Vec::new(), Outcome::Truncated)]));
        for budget in 1..=4 {
            let next = oracle::enumerate_prefixes(&program, f, budget);
            for (w, outcome) in &previous {
                match outcome {
                    Outcome::Terminated => assert!(next.contains(&(w.clone(), Outcome::Terminated))),
                    Outcome::Truncated => assert!(
                        next.iter().any(|(x, _)| x.starts_with(w)),
                        "seed {seed}: truncated {w:?} at {} not extended",
                        budget - 1
                    ),
                }
            }
            previous = next;
        }
    }
}

#[test]
fn elimination_order_does_not_change_the_solution() {
    for seed in 0..CASES {
        let mut rng = common::rng(5000 + seed);
        let aut = common::random_automaton(&mut rng, 3, 3);
        let abs = Abstraction::new(aut.clone());
        let program = common::random_program(&mut rng, &aut, 4, 4);
        let fin = infer_finite(&abs, &program);
        let declared = solve_infinite(&abs, &program, &fin);
        let reversed: Vec<usize> = (0..program.len()).rev().collect();
        assert_eq!(solve_infinite_in_order(&abs, &program, &fin, &reversed), declared, "seed {seed}");
        let mut shuffled: Vec<usize> = (0..program.len()).collect();
        shuffled.shuffle(&mut rng);
        assert_eq!(solve_infinite_in_order(&abs, &program, &fin, &shuffled), declared, "seed {seed}");
    }
}

fn reassociate(e: &Expr) -> Expr {
    match e {
        Expr::Choice(l, r) => match &**l {
            Expr::Choice(a, b) => Expr::choice(reassociate(a), Expr::choice(reassociate(b), reassociate(r))),
            _ => Expr::choice(reassociate(l), reassociate(r)),
        },
        Expr::Seq(a, b) => Expr::seq(reassociate(a), reassociate(b)),
        leaf => leaf.clone(),
    }
}

#[test]
fn choice_association_does_not_change_effects() {
    for seed in 0..CASES {
        let mut rng = common::rng(6000 + seed);
        let aut = common::random_automaton(&mut rng, 3, 3);
        let abs = Abstraction::new(aut.clone());
        let program = common::random_program(&mut rng, &aut, 4, 4);
        let flipped = Program::new(program.procedures().map(|(n, e)| (n.to_string(), reassociate(e))).collect()).unwrap();
        let (x, y) = (Analysis::run(&abs, &program).unwrap(), Analysis::run(&abs, &flipped).unwrap());
        assert_eq!(x.finite, y.finite, "seed {seed}");
        assert_eq!(x.infinite, y.infinite, "seed {seed}");
    }
}

#[test]
fn verdicts_agree_with_concrete_checks() {
    let (mut passes, mut caught) = (0, 0);
    for seed in 0..CASES {
        let mut rng = common::rng(7000 + seed);
        let aut = common::random_automaton(&mut rng, 3, 3);
        let abs = Abstraction::new(aut.clone());
        let program = common::random_program(&mut rng, &aut, 4, 3);
        let analysis = Analysis::run(&abs, &program).unwrap();
        for f in program.names() {
            let verdict = analysis.verdict(&abs, &program, f).unwrap();
            let finite_violation = oracle::enumerate_prefixes(&program, f, 6)
                .into_iter()
                .filter(|(_, o)| *o == Outcome::Terminated)
                .any(|(w, _)| !aut.accepts_finite(&syms(&aut, &w)).unwrap());
            let lasso_violation = oracle::search_lasso(&program, f, LassoBounds::default()).is_some_and(|l| {
                let (u, v) = (syms(&aut, &l.prefix), syms(&aut, &l.period));
                if v.is_empty() {
                    // silent divergence leaves the finite word u as the whole trace
                    !abs.pair_accepted(pair_of_lasso(&abs, &u, &[]))
                } else {
                    !aut.accepts_upword(&u, &v).unwrap()
                }
            });
            assert!(!(finite_violation && verdict.finite_ok), "seed {seed}: {f} missed a finite violation");
            assert!(!(lasso_violation && verdict.infinite_ok), "seed {seed}: {f} missed an infinite violation");
            if verdict.passed() {
                passes += 1;
            }
            caught += usize::from(finite_violation || lasso_violation);
            for d in &verdict.diagnostics {
                match d {
                    Diagnostic::Class { witness, .. } => assert!(!aut.accepts_finite(witness).unwrap()),
                    Diagnostic::Pair { witness, .. } => match &witness.period {
                        Some(v) => assert!(!aut.accepts_upword(&witness.prefix, v).unwrap()),
                        None => assert!(!aut.accepts_finite(&witness.prefix).unwrap()),
                    },
                }
            }
        }
    }
    assert!(passes > 0 && caught > 0, "degenerate sample: {passes} passes, {caught} caught violations");
}

#[test]
fn effects_are_closed_and_silent_divergence_shows_up_as_finite_pairs() {
    for seed in 0..CASES {
        let mut rng = common::rng(8000 + seed);
        let aut = common::random_automaton(&mut rng, 3, 3);
        let abs = Abstraction::new(aut.clone());
        let program = common::random_program(&mut rng, &aut, 4, 4);
        let analysis = Analysis::run(&abs, &program).unwrap();
        for v in &analysis.infinite {
            assert!(abs.is_closed(v), "seed {seed}");
        }
    }
    let abs = Abstraction::new(common::random_automaton(&mut common::rng(1), 2, 2));
    let h = Program::new(vec![("h".into(), Expr::call("h"))]).unwrap();
    let analysis = Analysis::run(&abs, &h).unwrap();
    let silent: InfAbs = abs.close(abs.pairs().lookup(ClassId::EPSILON, ClassId::EPSILON));
    assert_eq!(analysis.infinite[0], silent);
}
