//! Executable concrete semantics, used to test the abstract analysis.
//!
//! Everything here works on finite objects: exact iterates of the program's
//! finite-trace operator, prefixes of executions under a call budget, and
//! ultimately periodic witnesses found by bounded search. None of it decides
//! anything about infinite behaviour; absence of a witness proves nothing.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::automaton::{Automaton, AutomatonError, Symbol};
use crate::lang::{Expr, Program};

/// A finite trace over event names.
pub type Trace = Vec<String>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ExtEvent {
    Event(String),
    /// Charged once per procedure call.
    Check,
}

/// Drops the call markers, keeping events in order.
pub fn strip_checks(t: &[ExtEvent]) -> Trace {
    t.iter()
        .filter_map(|e| match e {
            ExtEvent::Event(a) => Some(a.clone()),
            ExtEvent::Check => None,
        })
        .collect()
}

/// Prints `<eps>` for the empty trace; events are concatenated when all are
/// single characters and space-separated otherwise.
pub fn format_trace(t: &[String]) -> String {
    if t.is_empty() {
        return crate::automaton::EPSILON.to_string();
    }
    let sep = if t.iter().all(|a| a.chars().count() == 1) { "" } else { " " };
    t.join(sep)
}

pub fn to_symbols(aut: &Automaton, t: &[String]) -> Result<Vec<Symbol>, AutomatonError> {
    t.iter()
        .map(|a| aut.symbol(a).ok_or_else(|| AutomatonError::UnknownSymbol(a.clone())))
        .collect()
}

/// Iterate `n` of the finite-trace operator: the set of terminating traces of
/// each procedure using at most `n` nested call levels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhiIterate {
    pub level: usize,
    /// Indexed like the program's procedures.
    pub sets: Vec<BTreeSet<Trace>>,
}

impl PhiIterate {
    pub fn bottom(p: &Program) -> Self {
        PhiIterate { level: 0, sets: vec![BTreeSet::new(); p.len()] }
    }

    pub fn get(&self, p: &Program, name: &str) -> &BTreeSet<Trace> {
        &self.sets[p.index_of(name).expect("declared procedure")]
    }

    /// Applies the operator once; `None` when some set would exceed `cap`.
    pub fn step(&self, p: &Program, cap: usize) -> Option<PhiIterate> {
        let sets = p
            .procedures()
            .map(|(_, body)| eval_exact(p, body, &self.sets, cap))
            .collect::<Option<Vec<_>>>()?;
        Some(PhiIterate { level: self.level + 1, sets })
    }
}

fn eval_exact(p: &Program, e: &Expr, prev: &[BTreeSet<Trace>], cap: usize) -> Option<BTreeSet<Trace>> {
    let out = match e {
        Expr::Emit(a) => BTreeSet::from([vec![a.clone()]]),
        Expr::Call(g) => prev[p.index_of(g).expect("validated program")].clone(),
        Expr::Choice(a, b) => {
            let mut l = eval_exact(p, a, prev, cap)?;
            l.extend(eval_exact(p, b, prev, cap)?);
            l
        }
        Expr::Seq(a, b) => {
            let l = eval_exact(p, a, prev, cap)?;
            if l.is_empty() {
                return Some(l);
            }
            let r = eval_exact(p, b, prev, cap)?;
            if l.len().saturating_mul(r.len()) > cap.saturating_mul(4) {
                return None;
            }
            let mut out = BTreeSet::new();
            for x in &l {
                for y in &r {
                    out.insert(x.iter().chain(y).cloned().collect());
                }
            }
            out
        }
    };
    (out.len() <= cap).then_some(out)
}

/// Exact iterate `n`, starting from the empty sets.
pub fn iterate_phi(p: &Program, n: usize) -> PhiIterate {
    iterate_phi_capped(p, n, usize::MAX).expect("uncapped iteration always succeeds")
}

/// Like [`iterate_phi`] but gives up once some set grows beyond `cap` words.
pub fn iterate_phi_capped(p: &Program, n: usize, cap: usize) -> Option<PhiIterate> {
    let mut it = PhiIterate::bottom(p);
    for _ in 0..n {
        it = it.step(p, cap)?;
    }
    Some(it)
}

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Outcome {
    Terminated,
    /// The execution was cut when it attempted a call beyond the budget.
    Truncated,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Terminated => "terminated",
            Outcome::Truncated => "truncated",
        })
    }
}

/// Runs every execution of `f`, charging one unit per call (including the
/// call of `f` itself). Executions that finish give terminated traces; an
/// execution attempting call number `budget + 1` is cut and its trace so far
/// is recorded as truncated. Choices are explored left branch first.
pub fn enumerate_prefixes(p: &Program, f: &str, budget: usize) -> BTreeSet<(Trace, Outcome)> {
    let entry = Expr::call(f);
    let mut out = BTreeSet::new();
    let mut word = Vec::new();
    explore(p, vec![&entry], &mut word, budget, &mut out);
    out
}

fn explore<'e>(
    p: &'e Program,
    mut stack: Vec<&'e Expr>,
    word: &mut Trace,
    mut budget: usize,
    out: &mut BTreeSet<(Trace, Outcome)>,
) {
    let mark = word.len();
    loop {
        let Some(top) = stack.pop() else {
            out.insert((word.clone(), Outcome::Terminated));
            break;
        };
        match top {
            Expr::Emit(a) => word.push(a.clone()),
            Expr::Seq(a, b) => {
                stack.push(b);
                stack.push(a);
            }
            Expr::Choice(a, b) => {
                let mut left = stack.clone();
                left.push(a);
                explore(p, left, word, budget, out);
                stack.push(b);
            }
            Expr::Call(g) => {
                if budget == 0 {
                    out.insert((word.clone(), Outcome::Truncated));
                    break;
                }
                budget -= 1;
                stack.push(p.body(g).expect("validated program"));
            }
        }
    }
    word.truncate(mark);
}

/// Bounds for [`search_lasso`].
#[derive(Copy, Clone, Debug)]
pub struct LassoBounds {
    pub max_prefix: usize,
    pub max_period: usize,
    pub max_stack: usize,
}

impl Default for LassoBounds {
    fn default() -> Self {
        LassoBounds { max_prefix: 6, max_period: 6, max_stack: 8 }
    }
}

/// An infinite execution of the form `prefix·period^ω`. An empty period
/// stands for an execution that keeps calling without emitting anything
/// after `prefix`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lasso {
    pub prefix: Trace,
    pub period: Trace,
}

struct Frame {
    height: usize,
    top: *const Expr,
    word_len: usize,
}

struct Search<'e> {
    program: &'e Program,
    bounds: LassoBounds,
    path: Vec<Frame>,
    on_path: HashMap<Vec<*const Expr>, usize>,
    visited: HashSet<(Vec<*const Expr>, Trace)>,
}

/// Depth-first search (left branch first) over configurations of `f` for a
/// segment that can repeat forever: either the whole continuation stack
/// recurs, or the same top recurs on a stack that grew without the part
/// below the first occurrence ever being exposed.
pub fn search_lasso(p: &Program, f: &str, bounds: LassoBounds) -> Option<Lasso> {
    let entry = Expr::call(f);
    let mut s = Search {
        program: p,
        bounds,
        path: Vec::new(),
        on_path: HashMap::new(),
        visited: HashSet::new(),
    };
    let mut word = Vec::new();
    s.visit(vec![&entry], &mut word)
}

impl<'e> Search<'e> {
    fn witness(&self, start: usize, word: &Trace) -> Option<Lasso> {
        let split = self.path[start].word_len;
        let lasso = Lasso { prefix: word[..split].to_vec(), period: word[split..].to_vec() };
        (lasso.prefix.len() <= self.bounds.max_prefix && lasso.period.len() <= self.bounds.max_period)
            .then_some(lasso)
    }

    fn pumped(&self, stack: &[&Expr], word: &Trace) -> Option<Lasso> {
        let top = *stack.last()? as *const Expr;
        let mut lowest = stack.len();
        for (i, frame) in self.path.iter().enumerate().rev() {
            if frame.height <= lowest && frame.top == top {
                if let Some(w) = self.witness(i, word) {
                    return Some(w);
                }
            }
            lowest = lowest.min(frame.height);
        }
        None
    }

    fn visit(&mut self, stack: Vec<&'e Expr>, word: &mut Trace) -> Option<Lasso> {
        let key: Vec<*const Expr> = stack.iter().map(|e| *e as *const Expr).collect();
        if let Some(&i) = self.on_path.get(&key) {
            return self.witness(i, word);
        }
        if let Some(w) = self.pumped(&stack, word) {
            return Some(w);
        }
        let too_long = word.len() > self.bounds.max_prefix + self.bounds.max_period;
        if stack.is_empty() || too_long || stack.len() > self.bounds.max_stack {
            return None;
        }
        if !self.visited.insert((key.clone(), word.clone())) {
            return None;
        }

        self.on_path.insert(key.clone(), self.path.len());
        self.path.push(Frame { height: stack.len(), top: *stack.last().unwrap(), word_len: word.len() });
        let found = self.expand(stack, word);
        self.path.pop();
        self.on_path.remove(&key);
        found
    }

    fn expand(&mut self, mut stack: Vec<&'e Expr>, word: &mut Trace) -> Option<Lasso> {
        let top = stack.pop().expect("non-empty stack");
        match top {
            Expr::Emit(a) => {
                word.push(a.clone());
                let found = self.visit(stack, word);
                word.pop();
                found
            }
            Expr::Seq(a, b) => {
                stack.push(b);
                stack.push(a);
                self.visit(stack, word)
            }
            Expr::Choice(a, b) => {
                let mut left = stack.clone();
                left.push(a);
                if let Some(w) = self.visit(left, word) {
                    return Some(w);
                }
                stack.push(b);
                self.visit(stack, word)
            }
            Expr::Call(g) => {
                stack.push(self.program.body(g).expect("validated program"));
                self.visit(stack, word)
            }
        }
    }
}
