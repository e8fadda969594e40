//! Seeded generators shared by the integration suites.
#![allow(dead_code)]

use buchi_core::automaton::{Automaton, Symbol};
use buchi_core::lang::{Expr, Program};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SYMBOLS: [&str; 3] = ["a", "b", "c"];
pub const PROCS: [&str; 4] = ["f", "g", "h", "k"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Automaton with `1..=max_states` states over the first `1..=max_symbols`
/// letters; each transition is present with a per-automaton density.
pub fn random_automaton(rng: &mut ChaCha8Rng, max_states: usize, max_symbols: usize) -> Automaton {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=max_symbols);
    let density = rng.gen_range(0.2..0.6);
    let names: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let states: Vec<&str> = names.iter().map(String::as_str).collect();
    let finals: Vec<&str> = states.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    let mut trans = Vec::new();
    for &p in &states {
        for &a in &SYMBOLS[..k] {
            for &q in &states {
                if rng.gen_bool(density) {
                    trans.push((p, a, q));
                }
            }
        }
    }
    Automaton::from_parts(&states, &SYMBOLS[..k], states[0], &finals, &trans).unwrap()
}

pub fn random_expr(rng: &mut ChaCha8Rng, depth: usize, symbols: &[&str], procs: &[&str]) -> Expr {
    if depth <= 1 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.6) {
            Expr::emit(symbols.choose(rng).unwrap())
        } else {
            Expr::call(procs.choose(rng).unwrap())
        };
    }
    let a = random_expr(rng, depth - 1, symbols, procs);
    let b = random_expr(rng, depth - 1, symbols, procs);
    if rng.gen_bool(0.5) {
        Expr::seq(a, b)
    } else {
        Expr::choice(a, b)
    }
}

/// Program with `1..=max_procs` procedures whose bodies have depth at most
/// `max_depth` and emit only letters of `aut`.
pub fn random_program(rng: &mut ChaCha8Rng, aut: &Automaton, max_procs: usize, max_depth: usize) -> Program {
    let m = rng.gen_range(1..=max_procs);
    let symbols: Vec<&str> = aut.alphabet().iter().map(String::as_str).collect();
    let procs = &PROCS[..m];
    let bodies = procs
        .iter()
        .map(|f| (f.to_string(), random_expr(rng, max_depth, &symbols, procs)))
        .collect();
    Program::new(bodies).unwrap()
}

pub fn random_word(rng: &mut ChaCha8Rng, num_symbols: usize, max_len: usize) -> Vec<Symbol> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..num_symbols)).collect()
}

/// Every word of length at most `max_len`, shortest first.
pub fn all_words(num_symbols: usize, max_len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..num_symbols {
                let mut v: Vec<Symbol> = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
