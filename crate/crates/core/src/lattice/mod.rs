//! Abstract domains over the class monoid.
//!
//! Finite-word languages are abstracted by sets of classes ([`FinAbs`]).
//! Languages of finite and infinite words are abstracted by closed sets of
//! pairs `(C, D)` with `C·D = C` and `D·D = D` ([`InfAbs`]); a pair denotes
//! `C·D^ω`, which is just `C` when `D` is the empty class. "Closed" means that
//! every pair whose language meets a member's language is itself a member.
//!
//! Concretizations are never materialized. They exist only as membership and
//! witness queries built from class representatives.

pub mod lasso;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::automaton::{Automaton, AutomatonError, Symbol, Word};
use crate::bitset::BitSet;
use crate::classes::{ClassId, ClassTable};

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PairId(pub(crate) usize);

impl PairId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `(head, period)` with `head·period = head` and `period·period = period`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Pair {
    pub head: ClassId,
    pub period: ClassId,
}

impl Pair {
    /// Pairs with an empty period denote finite words only.
    pub fn is_finite(&self) -> bool {
        self.period.is_epsilon()
    }
}

#[derive(Clone, Debug)]
pub struct PairTable {
    pairs: Vec<Pair>,
    index: HashMap<Pair, PairId>,
    // connected components of the overlap graph; a closed set is exactly a
    // union of components
    component: Vec<usize>,
    components: Vec<BitSet>,
    // factorizations[d] = all (b, e), both non-empty, with b·e = d and e·b idempotent
    factorizations: Vec<Vec<(ClassId, ClassId)>>,
}

impl PairTable {
    /// Enumerates every `(C, D)` passing both table equations, head-major in
    /// class order, and precomputes the overlap components.
    pub fn build(table: &ClassTable) -> Self {
        let mut pairs = Vec::new();
        let mut index = HashMap::new();
        for head in table.ids() {
            for period in table.ids() {
                if table.mul(head, period) == head && table.is_idempotent(period) {
                    let pair = Pair { head, period };
                    index.insert(pair, PairId(pairs.len()));
                    pairs.push(pair);
                }
            }
        }

        let mut factorizations = vec![Vec::new(); table.len()];
        for b in table.nonempty_ids() {
            for e in table.nonempty_ids() {
                let d = table.mul(b, e);
                if table.is_idempotent(d) && table.is_idempotent(table.mul(e, b)) {
                    factorizations[d.index()].push((b, e));
                }
            }
        }

        let mut uf = UnionFind::new(pairs.len());
        for (i, pair) in pairs.iter().enumerate() {
            if pair.is_finite() {
                continue;
            }
            for &(b, e) in &factorizations[pair.period.index()] {
                let other = Pair { head: table.mul(pair.head, b), period: table.mul(e, b) };
                if let Some(j) = index.get(&other) {
                    uf.union(i, j.0);
                }
            }
        }
        let mut roots: HashMap<usize, usize> = HashMap::new();
        let mut component = Vec::with_capacity(pairs.len());
        let mut components: Vec<BitSet> = Vec::new();
        for i in 0..pairs.len() {
            let root = uf.find(i);
            let next = roots.len();
            let c = *roots.entry(root).or_insert(next);
            if c == components.len() {
                components.push(BitSet::new(pairs.len()));
            }
            components[c].insert(i);
            component.push(c);
        }

        PairTable { pairs, index, component, components, factorizations }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = PairId> + '_ {
        (0..self.pairs.len()).map(PairId)
    }

    pub fn get(&self, id: PairId) -> Pair {
        self.pairs[id.0]
    }

    pub fn lookup(&self, head: ClassId, period: ClassId) -> Option<PairId> {
        self.index.get(&Pair { head, period }).copied()
    }

    /// Decides `C·D^ω ∩ U·V^ω ≠ ∅`.
    ///
    /// Finite and infinite pairs never meet, and finite pairs meet only when
    /// their classes coincide. Two infinite pairs meet iff there are non-empty
    /// classes `B`, `E` with `C·B = U`, `B·E = D` and `E·B = V`: interleaving
    /// the block boundaries of a common word and applying Ramsey's theorem to
    /// the segments gives such `B`, `E`; conversely `c·(b·e)^ω = (c·b)·(e·b)^ω`
    /// is a common word.
    pub fn overlaps(&self, table: &ClassTable, p: PairId, q: PairId) -> bool {
        let (x, y) = (self.get(p), self.get(q));
        match (x.is_finite(), y.is_finite()) {
            (true, true) => x.head == y.head,
            (false, false) => self.factorizations[x.period.index()]
                .iter()
                .any(|&(b, e)| table.mul(x.head, b) == y.head && table.mul(e, b) == y.period),
            _ => false,
        }
    }

    /// All pairs overlapping `p`, including `p` itself.
    pub fn neighbours(&self, table: &ClassTable, p: PairId) -> Vec<PairId> {
        let pair = self.get(p);
        if pair.is_finite() {
            return vec![p];
        }
        let mut out: Vec<PairId> = self.factorizations[pair.period.index()]
            .iter()
            .filter_map(|&(b, e)| self.lookup(table.mul(pair.head, b), table.mul(e, b)))
            .collect();
        out.push(p);
        out.sort();
        out.dedup();
        out
    }

    fn component_of(&self, p: PairId) -> &BitSet {
        &self.components[self.component[p.0]]
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Element of the finite-word domain: a set of classes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinAbs(BitSet);

impl FinAbs {
    pub fn contains(&self, c: ClassId) -> bool {
        self.0.contains(c.index())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.count()
    }

    pub fn ids(&self) -> impl Iterator<Item = ClassId> + '_ {
        self.0.iter().map(ClassId)
    }

    pub fn is_subset(&self, other: &FinAbs) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl fmt::Debug for FinAbs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// Element of the mixed domain: a closed set of pairs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfAbs(BitSet);

impl InfAbs {
    pub fn contains(&self, p: PairId) -> bool {
        self.0.contains(p.index())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.count()
    }

    pub fn ids(&self) -> impl Iterator<Item = PairId> + '_ {
        self.0.iter().map(PairId)
    }

    pub fn is_subset(&self, other: &InfAbs) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl fmt::Debug for InfAbs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// A concrete member of a pair's language: `prefix·period^ω`, or the finite
/// word `prefix` when there is no period.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub prefix: Word,
    pub period: Option<Word>,
}

/// The policy automaton together with its class monoid and pair table.
#[derive(Clone, Debug)]
pub struct Abstraction {
    automaton: Automaton,
    classes: ClassTable,
    pairs: PairTable,
}

impl Abstraction {
    pub fn new(automaton: Automaton) -> Self {
        let classes = ClassTable::build(&automaton);
        let pairs = PairTable::build(&classes);
        Abstraction { automaton, classes, pairs }
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn classes(&self) -> &ClassTable {
        &self.classes
    }

    pub fn pairs(&self) -> &PairTable {
        &self.pairs
    }

    pub fn pair(&self, p: PairId) -> Pair {
        self.pairs.get(p)
    }

    /// Panics if `(head, period)` is not a pair.
    pub fn pair_id(&self, head: ClassId, period: ClassId) -> PairId {
        self.pairs
            .lookup(head, period)
            .unwrap_or_else(|| panic!("({head}, {period}) is not an idempotent pair"))
    }

    // ---- finite-word domain ----

    pub fn fin_empty(&self) -> FinAbs {
        FinAbs(BitSet::new(self.classes.len()))
    }

    pub fn fin_from(&self, classes: impl IntoIterator<Item = ClassId>) -> FinAbs {
        FinAbs(BitSet::from_indices(self.classes.len(), classes.into_iter().map(ClassId::index)))
    }

    /// Abstraction of a finite set of finite words: the classes they fall in.
    pub fn alpha_fin<'w>(&self, words: impl IntoIterator<Item = &'w [Symbol]>) -> Result<FinAbs, AutomatonError> {
        let mut out = self.fin_empty();
        for w in words {
            out.0.insert(self.classes.class_of_word(w)?.index());
        }
        Ok(out)
    }

    pub fn fin_union(&self, a: &FinAbs, b: &FinAbs) -> FinAbs {
        let mut out = a.clone();
        out.0.union_with(&b.0);
        out
    }

    pub fn fin_concat(&self, a: &FinAbs, b: &FinAbs) -> FinAbs {
        let mut out = self.fin_empty();
        for x in a.ids() {
            for y in b.ids() {
                out.0.insert(self.classes.mul(x, y).index());
            }
        }
        out
    }

    /// Least solution of `X = {[ε]} ∪ a·X`.
    pub fn fin_star(&self, a: &FinAbs) -> FinAbs {
        let mut acc = self.fin_from([ClassId::EPSILON]);
        let mut frontier: Vec<ClassId> = vec![ClassId::EPSILON];
        while let Some(x) = frontier.pop() {
            for g in a.ids() {
                let y = self.classes.mul(g, x);
                if acc.0.insert(y.index()) {
                    frontier.push(y);
                }
            }
        }
        acc
    }

    /// Sub-semigroup generated by the members of `a` (no empty product).
    pub fn semigroup(&self, a: &FinAbs) -> FinAbs {
        let mut acc = a.clone();
        let mut frontier: Vec<ClassId> = a.ids().collect();
        while let Some(x) = frontier.pop() {
            for g in a.ids() {
                let y = self.classes.mul(x, g);
                if acc.0.insert(y.index()) {
                    frontier.push(y);
                }
            }
        }
        acc
    }

    // ---- mixed domain ----

    pub fn inf_empty(&self) -> InfAbs {
        InfAbs(BitSet::new(self.pairs.len()))
    }

    /// Least closed superset of `pairs`.
    pub fn close(&self, pairs: impl IntoIterator<Item = PairId>) -> InfAbs {
        let mut out = self.inf_empty();
        for p in pairs {
            if !out.contains(p) {
                out.0.union_with(self.pairs.component_of(p));
            }
        }
        out
    }

    /// Least closed superset by plain fixpoint iteration: keep adding every
    /// pair that overlaps a member until nothing changes.
    pub fn close_by_iteration(&self, pairs: impl IntoIterator<Item = PairId>) -> InfAbs {
        let mut out = self.inf_empty();
        let mut work: VecDeque<PairId> = VecDeque::new();
        for p in pairs {
            if out.0.insert(p.index()) {
                work.push_back(p);
            }
        }
        while let Some(p) = work.pop_front() {
            for q in self.pairs.neighbours(&self.classes, p) {
                if out.0.insert(q.index()) {
                    work.push_back(q);
                }
            }
        }
        out
    }

    pub fn pairs_overlap(&self, p: PairId, q: PairId) -> bool {
        self.pairs.overlaps(&self.classes, p, q)
    }

    /// Closedness checked pair by pair: every pair overlapping a member must
    /// be a member. Independent of the precomputed components.
    pub fn is_closed(&self, v: &InfAbs) -> bool {
        v.ids().all(|p| self.pairs.neighbours(&self.classes, p).into_iter().all(|q| v.contains(q)))
    }

    pub(crate) fn is_union_of_components(&self, v: &InfAbs) -> bool {
        v.ids().all(|p| self.pairs.component_of(p).is_subset(&v.0))
    }

    /// `{(A·C, D) | A ∈ a, (C, D) ∈ v}`; closed whenever `v` is.
    pub fn mixed_concat(&self, a: &FinAbs, v: &InfAbs) -> InfAbs {
        let mut out = self.inf_empty();
        for x in a.ids() {
            for p in v.ids() {
                let Pair { head, period } = self.pairs.get(p);
                let q = self.pair_id(self.classes.mul(x, head), period);
                out.0.insert(q.index());
            }
        }
        debug_assert!(self.is_union_of_components(&out), "mixed concatenation left the closed sets");
        out
    }

    pub fn inf_union(&self, v: &InfAbs, w: &InfAbs) -> InfAbs {
        let mut out = v.clone();
        out.0.union_with(&w.0);
        debug_assert!(self.is_union_of_components(&out), "union of closed sets is not closed");
        out
    }

    /// Embeds a set of classes as the finite pairs `(C, [ε])`.
    pub fn embed_finite(&self, a: &FinAbs) -> InfAbs {
        self.close(a.ids().map(|c| self.pair_id(c, ClassId::EPSILON)))
    }

    /// Abstraction of `γ(a)^ω`: every pair whose head and period both lie in
    /// the semigroup generated by `a`, then closed. When `[ε] ∈ a` the
    /// semigroup contains `[ε]` and the finite products show up as pairs
    /// `(C, [ε])`.
    pub fn omega(&self, a: &FinAbs) -> InfAbs {
        let s = self.semigroup(a);
        let seeds: Vec<PairId> = self
            .pairs
            .ids()
            .filter(|&p| {
                let Pair { head, period } = self.pairs.get(p);
                s.contains(head) && s.contains(period)
            })
            .collect();
        self.close(seeds)
    }

    // ---- policy acceptance ----

    /// By saturation one member decides the whole class.
    pub fn class_accepted(&self, c: ClassId) -> bool {
        let q0 = self.automaton.initial();
        if c.is_epsilon() {
            return self.automaton.is_final(q0);
        }
        let reach = &self.classes.profile(c).reach;
        (0..self.automaton.num_states()).any(|q| self.automaton.is_final(q) && reach.get(q0, q))
    }

    /// `C·D^ω ⊆ L` iff some `q` is reachable by `C` and `D` loops on `q`
    /// through a final state.
    pub fn pair_accepted(&self, p: PairId) -> bool {
        let Pair { head, period } = self.pairs.get(p);
        if period.is_epsilon() {
            return self.class_accepted(head);
        }
        let q0 = self.automaton.initial();
        let head_reach = &self.classes.profile(head).reach;
        let loop_final = &self.classes.profile(period).reach_final;
        (0..self.automaton.num_states()).any(|q| {
            let reached = if head.is_epsilon() { q == q0 } else { head_reach.get(q0, q) };
            reached && loop_final.get(q, q)
        })
    }

    pub fn fin_accepted(&self, a: &FinAbs) -> bool {
        a.ids().all(|c| self.class_accepted(c))
    }

    pub fn inf_accepted(&self, v: &InfAbs) -> bool {
        v.ids().all(|p| self.pair_accepted(p))
    }

    /// Is `word` a prefix of some member of `γ(v)`?
    pub fn feasible_prefix(&self, word: &[Symbol], v: &InfAbs) -> Result<bool, AutomatonError> {
        for p in v.ids() {
            if lasso::PairLasso::new(&self.classes, self.pairs.get(p)).admits_prefix(word)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    // ---- witnesses and printing ----

    pub fn pair_witness(&self, p: PairId) -> Witness {
        let Pair { head, period } = self.pairs.get(p);
        let rep = |c| self.classes.representative(c).to_vec();
        if period.is_epsilon() {
            Witness { prefix: rep(head), period: None }
        } else if head == period {
            Witness { prefix: Vec::new(), period: Some(rep(period)) }
        } else {
            Witness { prefix: rep(head), period: Some(rep(period)) }
        }
    }

    pub fn class_label(&self, c: ClassId) -> String {
        self.automaton.format_word(self.classes.representative(c))
    }

    pub fn pair_label(&self, p: PairId) -> String {
        let Pair { head, period } = self.pairs.get(p);
        format!("({}, {})", self.class_label(head), self.class_label(period))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::automaton::fixtures::{a1, a2};

    pub(crate) struct Named {
        pub abs: Abstraction,
    }

    impl Named {
        pub fn new(aut: Automaton) -> Self {
            Named { abs: Abstraction::new(aut) }
        }

        pub fn c(&self, w: &str) -> ClassId {
            let word = self.abs.automaton().parse_word(w).unwrap();
            self.abs.classes().class_of_word(&word).unwrap()
        }

        pub fn p(&self, head: &str, period: &str) -> PairId {
            self.abs.pair_id(self.c(head), self.c(period))
        }

        pub fn fin(&self, ws: &[&str]) -> FinAbs {
            self.abs.fin_from(ws.iter().map(|w| self.c(w)))
        }

        pub fn pairs(&self, ps: &[(&str, &str)]) -> Vec<PairId> {
            let mut v: Vec<PairId> = ps.iter().map(|(h, p)| self.p(h, p)).collect();
            v.sort();
            v
        }

        pub fn set(&self, ps: &[(&str, &str)]) -> InfAbs {
            let mut out = self.abs.inf_empty();
            for p in self.pairs(ps) {
                out.0.insert(p.index());
            }
            out
        }
    }

    #[test]
    fn ex1_pairs() {
        let n = Named::new(a1());
        let all: Vec<PairId> = n.abs.pairs().ids().collect();
        let expected = n.pairs(&[
            ("", ""),
            ("a", ""),
            ("a", "a"),
            ("b", ""),
            ("b", "b"),
            ("ba", ""),
            ("ba", "a"),
            ("ba", "ba"),
        ]);
        assert_eq!(all, expected);
    }

    #[test]
    fn ex2_has_24_pairs() {
        let n = Named::new(a2());
        assert_eq!(n.abs.pairs().len(), 24);
        let listed = [
            ("", ""), ("a", ""), ("b", ""), ("c", ""),
            ("aa", ""), ("ba", ""), ("ab", ""), ("bb", ""),
            ("cb", ""), ("bcb", ""), ("cca", ""), ("bca", ""),
            ("aa", "aa"), ("ba", "aa"), ("ba", "ba"), ("bb", "bb"),
            ("bcb", "bb"), ("bcb", "bcb"), ("cca", "aa"), ("cca", "cca"),
            ("bca", "aa"), ("bca", "ba"), ("bca", "cca"), ("bca", "bca"),
        ];
        let mut ids = n.pairs(&listed);
        ids.dedup();
        assert_eq!(ids.len(), 24);
    }

    #[test]
    fn single_state_pairs() {
        let aut = Automaton::from_parts(&["q"], &["x"], "q", &["q"], &[("q", "x", "q")]).unwrap();
        let abs = Abstraction::new(aut);
        let got: Vec<Pair> = abs.pairs().ids().map(|p| abs.pair(p)).collect();
        let (e, s) = (ClassId::EPSILON, ClassId(1));
        assert_eq!(
            got,
            vec![Pair { head: e, period: e }, Pair { head: s, period: e }, Pair { head: s, period: s }]
        );
    }

    #[test]
    fn overlap_examples() {
        let n = Named::new(a1());
        assert!(n.abs.pairs_overlap(n.p("b", "b"), n.p("ba", "ba")));
        assert!(!n.abs.pairs_overlap(n.p("a", "a"), n.p("ba", "ba")));
        for p in n.abs.pairs().ids() {
            assert!(n.abs.pairs_overlap(p, p));
        }
        assert!(!n.abs.pairs_overlap(n.p("b", ""), n.p("b", "b")));
        assert!(!n.abs.pairs_overlap(n.p("b", ""), n.p("ba", "")));
    }

    #[test]
    fn closure_examples() {
        let n = Named::new(a1());
        let closed = n.abs.close([n.p("ba", "ba")]);
        assert_eq!(closed, n.set(&[("b", "b"), ("ba", "ba")]));
        assert_eq!(n.abs.close([]), n.abs.inf_empty());
        assert_eq!(n.abs.close_by_iteration([n.p("ba", "ba")]), closed);

        let n2 = Named::new(a2());
        let all: Vec<PairId> = n2.abs.pairs().ids().collect();
        for p in &all {
            let once = n2.abs.close([*p]);
            assert_eq!(n2.abs.close(once.ids()), once);
            assert_eq!(n2.abs.close_by_iteration([*p]), once);
            assert!(n2.abs.is_closed(&once));
        }
    }

    #[test]
    fn neighbours_enumerate_exactly_the_overlapping_pairs() {
        let n = Named::new(a2());
        let (abs, pairs) = (&n.abs, n.abs.pairs());
        for p in pairs.ids() {
            let direct: Vec<PairId> = pairs.ids().filter(|&q| abs.pairs_overlap(p, q)).collect();
            assert_eq!(pairs.neighbours(abs.classes(), p), direct);
            for &q in &direct {
                assert!(abs.pairs_overlap(q, p));
            }
        }
    }

    #[test]
    fn finite_operators() {
        let n = Named::new(a1());
        let abs = &n.abs;
        let w = |s: &str| abs.automaton().parse_word(s).unwrap();
        assert_eq!(abs.alpha_fin([w("a").as_slice()]).unwrap(), n.fin(&["a"]));
        assert_eq!(abs.alpha_fin([w("b").as_slice(), w("abab").as_slice()]).unwrap(), n.fin(&["b"]));
        assert_eq!(abs.alpha_fin(std::iter::empty()).unwrap(), abs.fin_empty());
        assert_eq!(abs.fin_concat(&n.fin(&["b"]), &n.fin(&["a"])), n.fin(&["ba"]));
        assert_eq!(abs.fin_star(&abs.fin_empty()), n.fin(&[""]));
        assert_eq!(abs.fin_star(&n.fin(&["ba"])), n.fin(&["", "ba"]));
        assert_eq!(abs.fin_union(&n.fin(&["a"]), &n.fin(&["b"])), n.fin(&["a", "b"]));
    }

    #[test]
    fn mixed_operators() {
        let n = Named::new(a1());
        let abs = &n.abs;
        let silent = abs.close([n.p("", "")]);
        assert_eq!(abs.mixed_concat(&n.fin(&["a"]), &silent), n.set(&[("a", "")]));
        let v = abs.close([n.p("ba", "ba")]);
        assert_eq!(abs.mixed_concat(&n.fin(&[""]), &v), v);
        assert_eq!(abs.mixed_concat(&abs.fin_empty(), &v), abs.inf_empty());

        assert_eq!(abs.inf_union(&v, &abs.inf_empty()), v);
        assert_eq!(abs.inf_union(&v, &v), v);
        let a_omega = abs.close([n.p("a", "a")]);
        let both = abs.inf_union(&v, &a_omega);
        assert_eq!(both, n.set(&[("b", "b"), ("ba", "ba"), ("a", "a")]));
        assert!(abs.is_closed(&both));
    }

    #[test]
    fn omega_examples() {
        let n = Named::new(a1());
        let abs = &n.abs;
        assert_eq!(abs.omega(&n.fin(&["ba"])), n.set(&[("b", "b"), ("ba", "ba")]));
        assert_eq!(abs.omega(&n.fin(&[""])), n.set(&[("", "")]));
        assert_eq!(abs.omega(&abs.fin_empty()), abs.inf_empty());
        assert_eq!(abs.omega(&n.fin(&["a"])), n.set(&[("a", "a")]));
    }

    #[test]
    fn acceptance_ex1() {
        let n = Named::new(a1());
        let abs = &n.abs;
        let accepted: Vec<ClassId> = abs.classes().ids().filter(|&c| abs.class_accepted(c)).collect();
        assert_eq!(accepted, vec![n.c("b")]);
        let accepted: Vec<PairId> = abs.pairs().ids().filter(|&p| abs.pair_accepted(p)).collect();
        assert_eq!(accepted, n.pairs(&[("b", ""), ("b", "b"), ("ba", "ba")]));
        assert!(abs.fin_accepted(&abs.fin_empty()));
        assert!(abs.inf_accepted(&n.set(&[("b", "b"), ("ba", "ba")])));
        assert!(!abs.inf_accepted(&n.set(&[("a", "a")])));
    }

    #[test]
    fn acceptance_ex2() {
        let n = Named::new(a2());
        let abs = &n.abs;
        for c in abs.classes().ids() {
            assert_eq!(abs.class_accepted(c), !c.is_epsilon());
        }
        let rejected: Vec<PairId> = abs.pairs().ids().filter(|&p| !abs.pair_accepted(p)).collect();
        assert_eq!(rejected, n.pairs(&[("", ""), ("cca", "cca"), ("bca", "cca")]));
        assert!(abs.pair_accepted(n.p("aa", "aa")));
    }

    #[test]
    fn empty_word_accepted_when_initial_is_final() {
        let aut = Automaton::from_parts(&["q"], &["x"], "q", &["q"], &[("q", "x", "q")]).unwrap();
        let abs = Abstraction::new(aut);
        assert!(abs.class_accepted(ClassId::EPSILON));
        assert!(abs.pair_accepted(abs.pair_id(ClassId::EPSILON, ClassId::EPSILON)));
    }

    #[test]
    fn feasible_prefixes() {
        let n = Named::new(a1());
        let abs = &n.abs;
        let w = |s: &str| abs.automaton().parse_word(s).unwrap();
        let v = abs.close([n.p("ba", "ba")]);
        assert!(abs.feasible_prefix(&w("bab"), &v).unwrap());
        assert!(abs.feasible_prefix(&[], &v).unwrap());
        // "aa" extends to aa·(ba)^ω, whose blocks "aaba", "ba", ... all lie in [ba]
        assert!(abs.feasible_prefix(&w("aa"), &abs.close([n.p("ba", "ba")])).unwrap());
        let only_a = abs.close([n.p("a", "a")]);
        assert!(!abs.feasible_prefix(&w("ab"), &only_a).unwrap());
        assert!(abs.feasible_prefix(&w("aaa"), &only_a).unwrap());
        let finite_b = abs.embed_finite(&n.fin(&["b"]));
        assert!(abs.feasible_prefix(&w("aba"), &finite_b).unwrap());
        assert!(!abs.feasible_prefix(&[], &abs.inf_empty()).unwrap());

        // [a] holds the single word "a" here, so "aa" overshoots it
        let n2 = Named::new(a2());
        let just_a = n2.abs.embed_finite(&n2.fin(&["a"]));
        let w2 = |s: &str| n2.abs.automaton().parse_word(s).unwrap();
        assert!(n2.abs.feasible_prefix(&w2("a"), &just_a).unwrap());
        assert!(!n2.abs.feasible_prefix(&w2("aa"), &just_a).unwrap());
    }

    #[test]
    fn witnesses_follow_representatives() {
        let n = Named::new(a1());
        let abs = &n.abs;
        let w = |s: &str| abs.automaton().parse_word(s).unwrap();
        assert_eq!(abs.pair_witness(n.p("a", "a")), Witness { prefix: vec![], period: Some(w("a")) });
        assert_eq!(abs.pair_witness(n.p("ba", "a")), Witness { prefix: w("ba"), period: Some(w("a")) });
        assert_eq!(abs.pair_witness(n.p("b", "")), Witness { prefix: w("b"), period: None });
        assert_eq!(abs.pair_label(n.p("ba", "")), "(ba, <eps>)");
    }
}
