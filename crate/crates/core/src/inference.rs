//! Effect inference and the policy check.
//!
//! Each procedure gets an effect `(U, V)`: `U` abstracts its terminating
//! traces, `V` its non-terminating ones. `U` is the least fixpoint of the
//! abstract finite-trace operator. `V` comes from a linear equation system
//! `X_f = ⋃ A_g·X_g ∪ B` solved by elimination, where a self-referential
//! equation `X = A·X ∪ R` has the solution `A^*·R ∪ A^ω`. Greatest fixpoints
//! are never iterated on the abstract domain.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::automaton::{Automaton, Word};
use crate::classes::ClassId;
use crate::lang::{Expr, LangError, Program};
use crate::lattice::{Abstraction, FinAbs, InfAbs, PairId, Witness};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InferenceError {
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error("unknown entry procedure {0}")]
    UnknownEntry(String),
}

/// `⋃ coeffs[X]·X ∪ constant`, variables being procedure indices. Empty
/// coefficients are never stored, so equal expressions compare equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EffectExpr {
    pub coeffs: BTreeMap<usize, FinAbs>,
    pub constant: InfAbs,
}

impl EffectExpr {
    pub fn zero(abs: &Abstraction) -> Self {
        EffectExpr { coeffs: BTreeMap::new(), constant: abs.inf_empty() }
    }

    pub fn var(abs: &Abstraction, x: usize) -> Self {
        let mut e = Self::zero(abs);
        e.coeffs.insert(x, abs.fin_from([ClassId::EPSILON]));
        e
    }

    pub fn constant(c: InfAbs) -> Self {
        EffectExpr { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn union(&self, abs: &Abstraction, other: &EffectExpr) -> EffectExpr {
        let mut out = self.clone();
        for (&x, a) in &other.coeffs {
            let merged = match out.coeffs.get(&x) {
                Some(mine) => abs.fin_union(mine, a),
                None => a.clone(),
            };
            out.coeffs.insert(x, merged);
        }
        out.constant = abs.inf_union(&out.constant, &other.constant);
        out.check_linear(abs);
        out
    }

    /// `a·e`, distributed over every coefficient and the constant.
    pub fn scale(&self, abs: &Abstraction, a: &FinAbs) -> EffectExpr {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&x, c)| (x, abs.fin_concat(a, c)))
            .filter(|(_, c)| !c.is_empty())
            .collect();
        let out = EffectExpr { coeffs, constant: abs.mixed_concat(a, &self.constant) };
        out.check_linear(abs);
        out
    }

    /// Replaces `x` by `value`.
    pub fn substitute(&self, abs: &Abstraction, x: usize, value: &EffectExpr) -> EffectExpr {
        let mut rest = self.clone();
        match rest.coeffs.remove(&x) {
            Some(a) => rest.union(abs, &value.scale(abs, &a)),
            None => rest,
        }
    }

    fn check_linear(&self, abs: &Abstraction) {
        debug_assert!(self.coeffs.values().all(|c| !c.is_empty()), "stored an empty coefficient");
        debug_assert!(abs.is_union_of_components(&self.constant), "constant is not closed");
    }
}

fn letter_class(abs: &Abstraction, a: &str) -> ClassId {
    let sym = abs.automaton().symbol(a).expect("validated program");
    abs.classes().letter(sym).expect("symbol in range")
}

fn eval_finite(abs: &Abstraction, p: &Program, e: &Expr, current: &[FinAbs]) -> FinAbs {
    match e {
        Expr::Emit(a) => abs.fin_from([letter_class(abs, a)]),
        Expr::Call(g) => current[p.index_of(g).expect("validated program")].clone(),
        Expr::Seq(a, b) => abs.fin_concat(&eval_finite(abs, p, a, current), &eval_finite(abs, p, b, current)),
        Expr::Choice(a, b) => abs.fin_union(&eval_finite(abs, p, a, current), &eval_finite(abs, p, b, current)),
    }
}

/// One synchronous application of the abstract finite-trace operator.
pub fn finite_step(abs: &Abstraction, p: &Program, current: &[FinAbs]) -> Vec<FinAbs> {
    p.procedures().map(|(_, body)| eval_finite(abs, p, body, current)).collect()
}

/// Kleene iterates `0..=n` of the abstract finite-trace operator.
pub fn finite_iterates(abs: &Abstraction, p: &Program, n: usize) -> Vec<Vec<FinAbs>> {
    let mut out = vec![vec![abs.fin_empty(); p.len()]];
    for _ in 0..n {
        let next = finite_step(abs, p, out.last().unwrap());
        out.push(next);
    }
    out
}

/// Least fixpoint of the abstract finite-trace operator, indexed like the
/// program's procedures.
pub fn infer_finite(abs: &Abstraction, p: &Program) -> Vec<FinAbs> {
    let mut current = vec![abs.fin_empty(); p.len()];
    loop {
        let next = finite_step(abs, p, &current);
        if next == current {
            return current;
        }
        current = next;
    }
}

/// `(U, V)` of an expression, with calls to `g` contributing `fin[g]` to the
/// finite part and the variable `X_g` to the infinite part.
pub fn body_effect(abs: &Abstraction, p: &Program, e: &Expr, fin: &[FinAbs]) -> (FinAbs, EffectExpr) {
    match e {
        Expr::Emit(a) => (abs.fin_from([letter_class(abs, a)]), EffectExpr::zero(abs)),
        Expr::Call(g) => {
            let x = p.index_of(g).expect("validated program");
            (fin[x].clone(), EffectExpr::var(abs, x))
        }
        Expr::Seq(a, b) => {
            let (u1, v1) = body_effect(abs, p, a, fin);
            let (u2, v2) = body_effect(abs, p, b, fin);
            (abs.fin_concat(&u1, &u2), v1.union(abs, &v2.scale(abs, &u1)))
        }
        Expr::Choice(a, b) => {
            let (u1, v1) = body_effect(abs, p, a, fin);
            let (u2, v2) = body_effect(abs, p, b, fin);
            (abs.fin_union(&u1, &u2), v1.union(abs, &v2))
        }
    }
}

/// Solves the infinite parts in declaration order.
pub fn solve_infinite(abs: &Abstraction, p: &Program, fin: &[FinAbs]) -> Vec<InfAbs> {
    let order: Vec<usize> = (0..p.len()).collect();
    solve_infinite_in_order(abs, p, fin, &order)
}

/// Eliminates the variables in the given order; `order` must be a
/// permutation of the procedure indices.
pub fn solve_infinite_in_order(abs: &Abstraction, p: &Program, fin: &[FinAbs], order: &[usize]) -> Vec<InfAbs> {
    let mut exprs: Vec<EffectExpr> = p.procedures().map(|(_, body)| body_effect(abs, p, body, fin).1).collect();
    for &x in order {
        let mut rest = exprs[x].clone();
        let a = rest.coeffs.remove(&x).unwrap_or_else(|| abs.fin_empty());
        let solution = rest
            .scale(abs, &abs.fin_star(&a))
            .union(abs, &EffectExpr::constant(abs.omega(&a)));
        for (y, e) in exprs.iter_mut().enumerate() {
            if y != x {
                *e = e.substitute(abs, x, &solution);
            }
        }
        exprs[x] = solution;
    }
    exprs
        .into_iter()
        .map(|e| {
            assert!(e.is_constant(), "elimination left a variable behind");
            e.constant
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Diagnostic {
    /// A terminating behaviour outside the policy, with a finite trace.
    Class { class: ClassId, witness: Word },
    /// A non-terminating behaviour outside the policy.
    Pair { pair: PairId, witness: Witness },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Verdict {
    pub entry: String,
    pub finite: FinAbs,
    pub infinite: InfAbs,
    pub finite_ok: bool,
    pub infinite_ok: bool,
    pub diagnostics: Vec<Diagnostic>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.finite_ok && self.infinite_ok
    }
}

/// Effects of every procedure of a validated program.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub finite: Vec<FinAbs>,
    pub infinite: Vec<InfAbs>,
}

impl Analysis {
    pub fn run(abs: &Abstraction, p: &Program) -> Result<Self, InferenceError> {
        p.validate(abs.automaton())?;
        let finite = infer_finite(abs, p);
        let infinite = solve_infinite(abs, p, &finite);
        Ok(Analysis { finite, infinite })
    }

    pub fn verdict(&self, abs: &Abstraction, p: &Program, entry: &str) -> Result<Verdict, InferenceError> {
        let i = p.index_of(entry).ok_or_else(|| InferenceError::UnknownEntry(entry.to_string()))?;
        let (finite, infinite) = (self.finite[i].clone(), self.infinite[i].clone());
        let bad_classes: Vec<Diagnostic> = finite
            .ids()
            .filter(|&c| !abs.class_accepted(c))
            .map(|c| Diagnostic::Class { class: c, witness: abs.classes().representative(c).to_vec() })
            .collect();
        let bad_pairs: Vec<Diagnostic> = infinite
            .ids()
            .filter(|&q| !abs.pair_accepted(q))
            .map(|q| Diagnostic::Pair { pair: q, witness: abs.pair_witness(q) })
            .collect();
        let (finite_ok, infinite_ok) = (bad_classes.is_empty(), bad_pairs.is_empty());
        let diagnostics = [bad_classes, bad_pairs].concat();
        Ok(Verdict { entry: entry.to_string(), finite, infinite, finite_ok, infinite_ok, diagnostics })
    }
}

/// Does every trace of `entry` satisfy the policy?
pub fn check_policy(p: &Program, aut: &Automaton, entry: &str) -> Result<Verdict, InferenceError> {
    let abs = Abstraction::new(aut.clone());
    Analysis::run(&abs, p)?.verdict(&abs, p, entry)
}
