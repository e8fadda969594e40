//! Extended Büchi automata: one transition structure read both as an NFA (finite
//! words) and as a Büchi automaton (infinite words).
//!
//! State names and symbols are arbitrary tokens in the source format; they are
//! mapped to dense indices at construction and every other module works with
//! those indices.
//!
//! # Text format
//!
//! ```text
//! # comment
//! states: 0 1
//! alphabet: a b
//! initial: 0
//! final: 1
//! trans: 0 a 0
//! trans: 0 b 1
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ndfs;

pub type State = usize;
pub type Symbol = usize;
pub type Word = Vec<Symbol>;

/// Printed form of the empty word.
pub const EPSILON: &str = "<eps>";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: undeclared state `{name}`")]
    UndeclaredState { line: usize, name: String },
    #[error("line {line}: undeclared symbol `{name}`")]
    UndeclaredSymbol { line: usize, name: String },
    #[error("missing `initial:` line")]
    MissingInitial,
    #[error("the automaton declares no states")]
    NoStates,
    #[error("the alphabet is empty")]
    EmptyAlphabet,
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("symbol index {0} is outside the alphabet")]
    SymbolOutOfRange(Symbol),
    #[error("the periodic part of an ultimately periodic word must be non-empty")]
    EmptyPeriod,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: State,
    finals: Vec<bool>,
    // delta[q][a]: sorted, deduplicated successor list
    delta: Vec<Vec<Vec<State>>>,
}

impl Automaton {
    /// Builds an automaton from named parts. Duplicate transitions are ignored.
    pub fn from_parts(
        states: &[&str],
        alphabet: &[&str],
        initial: &str,
        finals: &[&str],
        transitions: &[(&str, &str, &str)],
    ) -> Result<Self, AutomatonError> {
        let mut b = Builder::default();
        b.declare_states(states.iter().copied(), 0)?;
        b.declare_symbols(alphabet.iter().copied(), 0)?;
        b.initial = Some((initial.to_string(), 0));
        b.finals = finals.iter().map(|s| (s.to_string(), 0)).collect();
        b.transitions = transitions
            .iter()
            .map(|(p, a, q)| (p.to_string(), a.to_string(), q.to_string(), 0))
            .collect();
        b.finish()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals[q]
    }

    pub fn state_name(&self, q: State) -> &str {
        &self.states[q]
    }

    pub fn symbol_name(&self, a: Symbol) -> &str {
        &self.alphabet[a]
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.alphabet.iter().position(|s| s == name)
    }

    pub fn successors(&self, q: State, a: Symbol) -> &[State] {
        &self.delta[q][a]
    }

    fn single_char_symbols(&self) -> bool {
        self.alphabet.iter().all(|s| s.chars().count() == 1)
    }

    /// Reads a word written as whitespace-separated symbols. When every symbol
    /// is a single character, tokens that are not themselves symbols are split
    /// into characters, so `"abab"` and `"a b a b"` are the same word. The
    /// empty string and `<eps>` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, AutomatonError> {
        let split_chars = self.single_char_symbols();
        let mut word = Vec::new();
        for token in text.split_whitespace() {
            if token == EPSILON {
                continue;
            }
            if let Some(a) = self.symbol(token) {
                word.push(a);
            } else if split_chars {
                for c in token.chars() {
                    let s = c.to_string();
                    word.push(self.symbol(&s).ok_or(AutomatonError::UnknownSymbol(s))?);
                }
            } else {
                return Err(AutomatonError::UnknownSymbol(token.to_string()));
            }
        }
        Ok(word)
    }

    /// Inverse of [`Automaton::parse_word`]; the empty word prints as `<eps>`.
    pub fn format_word(&self, word: &[Symbol]) -> String {
        if word.is_empty() {
            return EPSILON.to_string();
        }
        let sep = if self.single_char_symbols() { "" } else { " " };
        word.iter()
            .map(|&a| self.alphabet[a].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    fn check_word(&self, word: &[Symbol]) -> Result<(), AutomatonError> {
        match word.iter().find(|&&a| a >= self.alphabet.len()) {
            Some(&a) => Err(AutomatonError::SymbolOutOfRange(a)),
            None => Ok(()),
        }
    }

    /// Finite-word (NFA) acceptance. The empty word is accepted iff the
    /// initial state is final.
    pub fn accepts_finite(&self, word: &[Symbol]) -> Result<bool, AutomatonError> {
        self.check_word(word)?;
        let n = self.num_states();
        let mut current = vec![false; n];
        current[self.initial] = true;
        for &a in word {
            let mut next = vec![false; n];
            for q in (0..n).filter(|&q| current[q]) {
                for &r in &self.delta[q][a] {
                    next[r] = true;
                }
            }
            current = next;
        }
        Ok((0..n).any(|q| current[q] && self.finals[q]))
    }

    /// Büchi acceptance of `prefix · period^ω`, decided by nested DFS over
    /// (state, position) where positions run through the prefix and then
    /// cycle through the period.
    pub fn accepts_upword(&self, prefix: &[Symbol], period: &[Symbol]) -> Result<bool, AutomatonError> {
        if period.is_empty() {
            return Err(AutomatonError::EmptyPeriod);
        }
        self.check_word(prefix)?;
        self.check_word(period)?;
        let (lu, lv) = (prefix.len(), period.len());
        let letter = |pos: usize| if pos < lu { prefix[pos] } else { period[pos - lu] };
        let advance = |pos: usize| if pos + 1 == lu + lv { lu } else { pos + 1 };
        Ok(ndfs::has_accepting_lasso(
            [(self.initial, 0usize)],
            |&(q, pos)| {
                let next = advance(pos);
                self.delta[q][letter(pos)].iter().map(|&r| (r, next)).collect()
            },
            |&(q, pos)| pos >= lu && self.finals[q],
        ))
    }
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states: {}", self.states.join(" "))?;
        writeln!(f, "alphabet: {}", self.alphabet.join(" "))?;
        writeln!(f, "initial: {}", self.states[self.initial])?;
        let finals: Vec<&str> = (0..self.num_states())
            .filter(|&q| self.finals[q])
            .map(|q| self.states[q].as_str())
            .collect();
        writeln!(f, "final: {}", finals.join(" "))?;
        for (q, row) in self.delta.iter().enumerate() {
            for (a, targets) in row.iter().enumerate() {
                for &r in targets {
                    writeln!(f, "trans: {} {} {}", self.states[q], self.alphabet[a], self.states[r])?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Default)]
struct Builder {
    states: Vec<String>,
    state_index: HashMap<String, State>,
    alphabet: Vec<String>,
    initial: Option<(String, usize)>,
    finals: Vec<(String, usize)>,
    transitions: Vec<(String, String, String, usize)>,
}

impl Builder {
    fn declare_states<'a>(&mut self, names: impl Iterator<Item = &'a str>, _line: usize) -> Result<(), AutomatonError> {
        for name in names {
            if self.state_index.contains_key(name) {
                return Err(AutomatonError::Duplicate { kind: "state", name: name.to_string() });
            }
            self.state_index.insert(name.to_string(), self.states.len());
            self.states.push(name.to_string());
        }
        Ok(())
    }

    fn declare_symbols<'a>(&mut self, names: impl Iterator<Item = &'a str>, line: usize) -> Result<(), AutomatonError> {
        for name in names {
            if !is_identifier(name) {
                return Err(AutomatonError::Syntax { line, message: format!("`{name}` is not a valid symbol") });
            }
            if self.alphabet.iter().any(|s| s == name) {
                return Err(AutomatonError::Duplicate { kind: "symbol", name: name.to_string() });
            }
            self.alphabet.push(name.to_string());
        }
        Ok(())
    }

    fn state(&self, name: &str, line: usize) -> Result<State, AutomatonError> {
        self.state_index
            .get(name)
            .copied()
            .ok_or_else(|| AutomatonError::UndeclaredState { line, name: name.to_string() })
    }

    fn finish(self) -> Result<Automaton, AutomatonError> {
        if self.states.is_empty() {
            return Err(AutomatonError::NoStates);
        }
        if self.alphabet.is_empty() {
            return Err(AutomatonError::EmptyAlphabet);
        }
        let (init_name, init_line) = self.initial.clone().ok_or(AutomatonError::MissingInitial)?;
        let initial = self.state(&init_name, init_line)?;
        let mut finals = vec![false; self.states.len()];
        for (name, line) in &self.finals {
            finals[self.state(name, *line)?] = true;
        }
        let mut sets = vec![vec![BTreeSet::new(); self.alphabet.len()]; self.states.len()];
        for (p, a, q, line) in &self.transitions {
            let p = self.state(p, *line)?;
            let q = self.state(q, *line)?;
            let a = self
                .alphabet
                .iter()
                .position(|s| s == a)
                .ok_or_else(|| AutomatonError::UndeclaredSymbol { line: *line, name: a.clone() })?;
            sets[p][a].insert(q);
        }
        let delta = sets
            .into_iter()
            .map(|row| row.into_iter().map(|s| s.into_iter().collect()).collect())
            .collect();
        Ok(Automaton { states: self.states, alphabet: self.alphabet, initial, finals, delta })
    }
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses the line-based `.aut` format. `states:` must appear before any line
/// that names a state; all other lines may come in any order.
pub fn parse_automaton(text: &str) -> Result<Automaton, AutomatonError> {
    let mut b = Builder::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let (key, rest) = content.split_once(':').ok_or_else(|| AutomatonError::Syntax {
            line,
            message: format!("expected `<key>: ...`, found `{content}`"),
        })?;
        let tokens: Vec<&str> = rest.split_whitespace().collect();
        match key.trim() {
            "states" => b.declare_states(tokens.into_iter(), line)?,
            "alphabet" => b.declare_symbols(tokens.into_iter(), line)?,
            "initial" => {
                let [name] = tokens[..] else {
                    return Err(AutomatonError::Syntax { line, message: "`initial:` takes exactly one state".into() });
                };
                if b.initial.is_some() {
                    return Err(AutomatonError::Syntax { line, message: "second `initial:` line".into() });
                }
                b.state(name, line)?;
                b.initial = Some((name.to_string(), line));
            }
            "final" => {
                for name in tokens {
                    b.state(name, line)?;
                    b.finals.push((name.to_string(), line));
                }
            }
            "trans" => {
                let [p, a, q] = tokens[..] else {
                    return Err(AutomatonError::Syntax {
                        line,
                        message: "`trans:` takes a source state, a symbol and a target state".into(),
                    });
                };
                b.state(p, line)?;
                b.state(q, line)?;
                b.transitions.push((p.to_string(), a.to_string(), q.to_string(), line));
            }
            other => {
                return Err(AutomatonError::Syntax { line, message: format!("unknown key `{other}`") });
            }
        }
    }
    b.finish()
}

impl FromStr for Automaton {
    type Err = AutomatonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_automaton(s)
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn w(aut: &Automaton, s: &str) -> Word {
        aut.parse_word(s).unwrap()
    }

    #[test]
    fn parses_example_automata() {
        let a1 = a1();
        assert_eq!(a1.num_states(), 2);
        assert_eq!(a1.alphabet(), ["a", "b"]);
        assert_eq!(a1.successors(0, 1), [1]);
        assert!(a1.is_final(1) && !a1.is_final(0));

        let a2 = a2();
        assert_eq!(a2.num_states(), 3);
        assert_eq!(a2.successors(0, 1), [0, 1, 2]);
        assert!(a2.successors(2, 2).is_empty());
    }

    #[test]
    fn rejects_undeclared_state() {
        let err = parse_automaton("states: 0 1\nalphabet: a\ninitial: 0\ntrans: 0 a 9\n").unwrap_err();
        assert_eq!(err, AutomatonError::UndeclaredState { line: 4, name: "9".into() });
        assert!(err.to_string().contains("undeclared state"));
    }

    #[test]
    fn rejects_state_use_before_declaration() {
        let err = parse_automaton("initial: 0\nstates: 0\nalphabet: a\n").unwrap_err();
        assert!(matches!(err, AutomatonError::UndeclaredState { line: 1, .. }));
    }

    #[test]
    fn rejects_missing_initial_and_bad_symbols() {
        assert_eq!(
            parse_automaton("states: 0\nalphabet: a\n").unwrap_err(),
            AutomatonError::MissingInitial
        );
        assert!(matches!(
            parse_automaton("states: 0\nalphabet: a\ninitial: 0\ntrans: 0 z 0\n").unwrap_err(),
            AutomatonError::UndeclaredSymbol { line: 4, .. }
        ));
        assert!(matches!(
            parse_automaton("states: 0\ninitial: 0\n").unwrap_err(),
            AutomatonError::EmptyAlphabet
        ));
        assert!(matches!(
            parse_automaton("states 0\n").unwrap_err(),
            AutomatonError::Syntax { line: 1, .. }
        ));
    }

    #[test]
    fn alphabet_may_follow_transitions() {
        let aut = parse_automaton("states: p\ninitial: p\ntrans: p x p\nalphabet: x\n").unwrap();
        assert_eq!(aut.successors(0, 0), [0]);
    }

    #[test]
    fn duplicate_transitions_are_ignored() {
        let aut = parse_automaton("states: 0\nalphabet: a\ninitial: 0\ntrans: 0 a 0\ntrans: 0 a 0\n").unwrap();
        assert_eq!(aut.successors(0, 0), [0]);
    }

    #[test]
    fn display_round_trips() {
        let a2 = a2();
        assert_eq!(parse_automaton(&a2.to_string()).unwrap(), a2);
    }

    #[test]
    fn finite_acceptance_on_ex1() {
        let a1 = a1();
        assert!(a1.accepts_finite(&w(&a1, "b")).unwrap());
        assert!(!a1.accepts_finite(&w(&a1, "a")).unwrap());
        assert!(!a1.accepts_finite(&[]).unwrap());
        assert!(a1.accepts_finite(&w(&a1, "abab")).unwrap());
        assert_eq!(a1.accepts_finite(&[7]), Err(AutomatonError::SymbolOutOfRange(7)));
    }

    #[test]
    fn upword_acceptance() {
        let a1 = a1();
        assert!(a1.accepts_upword(&[], &w(&a1, "ba")).unwrap());
        assert!(!a1.accepts_upword(&w(&a1, "b"), &w(&a1, "a")).unwrap());
        assert_eq!(a1.accepts_upword(&[], &[]), Err(AutomatonError::EmptyPeriod));

        let a2 = a2();
        assert!(!a2.accepts_upword(&[], &w(&a2, "c")).unwrap());
        assert!(a2.accepts_upword(&w(&a2, "ccc"), &w(&a2, "a")).unwrap());
        assert!(a2.accepts_upword(&[], &w(&a2, "cb")).unwrap());
    }

    #[test]
    fn words_parse_in_both_notations() {
        let a2 = a2();
        assert_eq!(w(&a2, "abc"), vec![0, 1, 2]);
        assert_eq!(w(&a2, "a b c"), vec![0, 1, 2]);
        assert_eq!(w(&a2, EPSILON), Vec::<Symbol>::new());
        assert_eq!(a2.format_word(&[2, 0]), "ca");
        assert_eq!(a2.format_word(&[]), EPSILON);
        assert!(matches!(a2.parse_word("abz"), Err(AutomatonError::UnknownSymbol(_))));

        let long = Automaton::from_parts(&["s"], &["req", "ack"], "s", &["s"], &[]).unwrap();
        assert_eq!(long.parse_word("req ack").unwrap(), vec![0, 1]);
        assert_eq!(long.format_word(&[0, 1]), "req ack");
    }
}
