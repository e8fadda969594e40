//! The finite monoid of word classes induced by a policy automaton.
//!
//! Two non-empty words are equivalent when they have the same transition
//! profile: the same plain reachability relation between states and the same
//! "reachable while visiting a final state" relation. A class is therefore
//! identified with its profile. The empty word gets its own class, kept apart
//! even when some letter happens to act like the identity.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::automaton::{Automaton, AutomatonError, State, Symbol, Word};

/// Square boolean matrix over automaton states, one bit row per state.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        let stride = n.div_ceil(64).max(1);
        Relation { n, stride, bits: vec![0; n * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Relation::empty(n);
        (0..n).for_each(|q| r.set(q, q));
        r
    }

    pub fn set(&mut self, p: State, q: State) {
        self.bits[p * self.stride + q / 64] |= 1 << (q % 64);
    }

    pub fn get(&self, p: State, q: State) -> bool {
        self.bits[p * self.stride + q / 64] & (1 << (q % 64)) != 0
    }

    fn row(&self, p: State) -> &[u64] {
        &self.bits[p * self.stride..(p + 1) * self.stride]
    }

    /// Relational composition: `(p, r)` iff `(p, q) ∈ self` and `(q, r) ∈ other`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let mut out = Relation::empty(self.n);
        for p in 0..self.n {
            for q in (0..self.n).filter(|&q| self.get(p, q)) {
                let base = p * self.stride;
                for (i, w) in other.row(q).iter().enumerate() {
                    out.bits[base + i] |= w;
                }
            }
        }
        out
    }

    pub fn union(&self, other: &Relation) -> Relation {
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect();
        Relation { n: self.n, stride: self.stride, bits }
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn pairs(&self) -> Vec<(State, State)> {
        (0..self.n)
            .flat_map(|p| (0..self.n).map(move |q| (p, q)))
            .filter(|&(p, q)| self.get(p, q))
            .collect()
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// Transition profile of a word: `reach(p, q)` iff the word leads from `p` to
/// `q`; `reach_final(p, q)` iff it can do so while visiting a final state,
/// endpoints included.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Profile {
    pub reach: Relation,
    pub reach_final: Relation,
}

impl Profile {
    /// Profile of the empty word. Not the profile of any class in the table:
    /// the empty class is tagged instead.
    pub fn identity(aut: &Automaton) -> Self {
        let n = aut.num_states();
        let mut reach_final = Relation::empty(n);
        (0..n).filter(|&q| aut.is_final(q)).for_each(|q| reach_final.set(q, q));
        Profile { reach: Relation::identity(n), reach_final }
    }

    pub fn letter(aut: &Automaton, a: Symbol) -> Result<Self, AutomatonError> {
        if a >= aut.num_symbols() {
            return Err(AutomatonError::SymbolOutOfRange(a));
        }
        let n = aut.num_states();
        let mut reach = Relation::empty(n);
        let mut reach_final = Relation::empty(n);
        for p in 0..n {
            for &q in aut.successors(p, a) {
                reach.set(p, q);
                if aut.is_final(p) || aut.is_final(q) {
                    reach_final.set(p, q);
                }
            }
        }
        Ok(Profile { reach, reach_final })
    }

    /// Profile of the concatenation of the two underlying words.
    pub fn mul(&self, other: &Profile) -> Profile {
        Profile {
            reach: self.reach.compose(&other.reach),
            reach_final: self
                .reach_final
                .compose(&other.reach)
                .union(&self.reach.compose(&other.reach_final)),
        }
    }

    /// Profile of an arbitrary word, computed letter by letter.
    pub fn of_word(aut: &Automaton, word: &[Symbol]) -> Result<Self, AutomatonError> {
        let mut p = Profile::identity(aut);
        for &a in word {
            p = p.mul(&Profile::letter(aut, a)?);
        }
        Ok(p)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ClassId(pub(crate) usize);

impl ClassId {
    pub const EPSILON: ClassId = ClassId(0);

    pub fn index(self) -> usize {
        self.0
    }

    pub fn is_epsilon(self) -> bool {
        self == ClassId::EPSILON
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub profile: Profile,
    /// Shortest representative, ties broken lexicographically by the declared
    /// alphabet order.
    pub representative: Word,
}

#[derive(Clone, Debug)]
pub struct ClassTable {
    classes: Vec<ClassInfo>,
    num_symbols: usize,
    // right[c * num_symbols + a] = class of rep(c)·a
    right: Vec<ClassId>,
    mul: Vec<ClassId>,
    by_profile: HashMap<Profile, ClassId>,
}

impl ClassTable {
    /// Breadth-first closure of the letter profiles under concatenation.
    /// Classes are numbered in discovery order: the empty class first, then
    /// the letters, then longer words in shortlex order.
    pub fn build(aut: &Automaton) -> Self {
        let sigma = aut.num_symbols();
        let letters: Vec<Profile> = (0..sigma)
            .map(|a| Profile::letter(aut, a).expect("symbol in range"))
            .collect();
        let mut classes = vec![ClassInfo { profile: Profile::identity(aut), representative: Vec::new() }];
        let mut by_profile: HashMap<Profile, ClassId> = HashMap::new();
        let mut right: Vec<ClassId> = Vec::new();
        let mut queue = VecDeque::from([ClassId::EPSILON]);

        while let Some(c) = queue.pop_front() {
            for (a, letter) in letters.iter().enumerate() {
                let profile = classes[c.0].profile.mul(letter);
                let target = match by_profile.get(&profile) {
                    Some(&id) => id,
                    None => {
                        let id = ClassId(classes.len());
                        let mut representative = classes[c.0].representative.clone();
                        representative.push(a);
                        by_profile.insert(profile.clone(), id);
                        classes.push(ClassInfo { profile, representative });
                        queue.push_back(id);
                        id
                    }
                };
                // queue order equals id order, so rows are appended in order
                debug_assert_eq!(right.len(), c.0 * sigma + a);
                right.push(target);
            }
        }

        let k = classes.len();
        let mut mul = Vec::with_capacity(k * k);
        for c1 in 0..k {
            for c2 in &classes {
                let mut acc = ClassId(c1);
                for &a in &c2.representative {
                    acc = right[acc.0 * sigma + a];
                }
                mul.push(acc);
            }
        }

        ClassTable { classes, num_symbols: sigma, right, mul, by_profile }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ClassId> + '_ {
        (0..self.classes.len()).map(ClassId)
    }

    /// All classes except the empty one.
    pub fn nonempty_ids(&self) -> impl Iterator<Item = ClassId> + '_ {
        (1..self.classes.len()).map(ClassId)
    }

    pub fn info(&self, c: ClassId) -> &ClassInfo {
        &self.classes[c.0]
    }

    pub fn representative(&self, c: ClassId) -> &[Symbol] {
        &self.classes[c.0].representative
    }

    pub fn profile(&self, c: ClassId) -> &Profile {
        &self.classes[c.0].profile
    }

    pub fn mul(&self, a: ClassId, b: ClassId) -> ClassId {
        self.mul[a.0 * self.classes.len() + b.0]
    }

    pub fn letter(&self, a: Symbol) -> Result<ClassId, AutomatonError> {
        self.step(ClassId::EPSILON, a)
    }

    /// Cayley-graph edge: the class of `w·a` for any `w` in `c`.
    pub fn step(&self, c: ClassId, a: Symbol) -> Result<ClassId, AutomatonError> {
        if a >= self.num_symbols {
            return Err(AutomatonError::SymbolOutOfRange(a));
        }
        Ok(self.right[c.0 * self.num_symbols + a])
    }

    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    /// Looks up the class whose profile is `p`; never returns the empty class.
    pub fn class_of_profile(&self, p: &Profile) -> Option<ClassId> {
        self.by_profile.get(p).copied()
    }

    pub fn class_of_word(&self, word: &[Symbol]) -> Result<ClassId, AutomatonError> {
        word.iter().try_fold(ClassId::EPSILON, |c, &a| self.step(c, a))
    }

    pub fn is_idempotent(&self, c: ClassId) -> bool {
        self.mul(c, c) == c
    }

    pub fn power(&self, c: ClassId, k: usize) -> ClassId {
        (0..k).fold(ClassId::EPSILON, |acc, _| self.mul(acc, c))
    }

    /// The idempotent power `c^k` with the least `k ≥ 1`, together with `k`.
    pub fn idempotent_power(&self, c: ClassId) -> (ClassId, usize) {
        let mut acc = c;
        for k in 1..=self.len() {
            if self.is_idempotent(acc) {
                return (acc, k);
            }
            acc = self.mul(acc, c);
        }
        unreachable!("every element of a finite monoid has an idempotent power")
    }

    /// Ramsey-style decomposition of `prefix · period^ω`: returns `(C, D)`
    /// with `C·D = C`, `D·D = D` and the word in `C·D^ω`, along with the
    /// exponent `k` such that `C = [prefix·period^k]` and `D = [period^k]`.
    /// An empty period denotes the finite word `prefix`, giving `([prefix], [ε])`.
    pub fn decompose_upword(
        &self,
        prefix: &[Symbol],
        period: &[Symbol],
    ) -> Result<(ClassId, ClassId, usize), AutomatonError> {
        let head = self.class_of_word(prefix)?;
        let m = self.class_of_word(period)?;
        if period.is_empty() {
            return Ok((head, ClassId::EPSILON, 0));
        }
        let (e, k) = self.idempotent_power(m);
        Ok((self.mul(head, e), e, k))
    }

    pub fn abstract_of_upword(&self, prefix: &[Symbol], period: &[Symbol]) -> Result<(ClassId, ClassId), AutomatonError> {
        self.decompose_upword(prefix, period).map(|(c, d, _)| (c, d))
    }

    /// Checks every triple of the multiplication table for associativity.
    pub fn is_associative(&self) -> bool {
        let ids: Vec<ClassId> = self.ids().collect();
        ids.iter().all(|&a| {
            ids.iter().all(|&b| {
                let ab = self.mul(a, b);
                ids.iter().all(|&c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        })
    }
}
