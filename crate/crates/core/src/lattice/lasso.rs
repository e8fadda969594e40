//! Lasso automata over the Cayley graph of the class monoid.
//!
//! The automaton for an infinite pair `(C, D)` reads a word while tracking
//! the class of the current block. It first reads a `C`-block, then any number
//! of `D`-blocks; a block may end whenever its accumulated class equals the
//! required one. Completing a `D`-block is the Büchi condition, so the
//! automaton accepts exactly `C·D^ω`.
//!
//! Products of two such automata decide overlap independently of the
//! algebraic criterion used by [`super::PairTable::overlaps`].

use crate::automaton::{AutomatonError, Symbol};
use crate::classes::{ClassId, ClassTable};
use crate::ndfs;

use super::Pair;

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct LassoState {
    pub looping: bool,
    pub block: ClassId,
    /// Set on the state entered right after a `D`-block completes.
    pub completed: bool,
}

pub struct PairLasso<'t> {
    table: &'t ClassTable,
    pair: Pair,
}

impl<'t> PairLasso<'t> {
    pub fn new(table: &'t ClassTable, pair: Pair) -> Self {
        PairLasso { table, pair }
    }

    pub fn initial(&self) -> LassoState {
        LassoState { looping: false, block: ClassId::EPSILON, completed: false }
    }

    pub fn successors(&self, s: LassoState, a: Symbol) -> Vec<LassoState> {
        let block = self.table.step(s.block, a).expect("symbol in range");
        let mut out = vec![LassoState { looping: s.looping, block, completed: false }];
        if !s.looping && block == self.pair.head {
            out.push(LassoState { looping: true, block: ClassId::EPSILON, completed: false });
        }
        if s.looping && block == self.pair.period {
            out.push(LassoState { looping: true, block: ClassId::EPSILON, completed: true });
        }
        out
    }

    fn can_reach(&self, from: ClassId, target: ClassId, allow_empty: bool) -> bool {
        (allow_empty && from == target)
            || self.table.nonempty_ids().any(|x| self.table.mul(from, x) == target)
    }

    fn is_live(&self, s: LassoState) -> bool {
        if self.pair.is_finite() {
            // a finite pair has no periodic part; the word must stay inside the head
            return !s.looping && self.can_reach(s.block, self.pair.head, true);
        }
        if s.looping {
            s.block.is_epsilon() || self.can_reach(s.block, self.pair.period, false)
        } else {
            self.can_reach(s.block, self.pair.head, false)
        }
    }

    /// Is `word` a prefix of some member of the pair's language? Runs the
    /// automaton on `word` and checks that some reached state still has an
    /// accepting continuation.
    pub fn admits_prefix(&self, word: &[Symbol]) -> Result<bool, AutomatonError> {
        if let Some(&a) = word.iter().find(|&&a| a >= self.table.num_symbols()) {
            return Err(AutomatonError::SymbolOutOfRange(a));
        }
        let mut current = vec![self.initial()];
        for &a in word {
            let mut next: Vec<LassoState> = current.iter().flat_map(|&s| self.successors(s, a)).collect();
            next.sort_by_key(|s| (s.looping, s.block, s.completed));
            next.dedup();
            current = next;
        }
        Ok(current.into_iter().any(|s| self.is_live(s)))
    }
}

/// Decides `C·D^ω ∩ U·V^ω ≠ ∅` for two infinite pairs by nested DFS on the
/// product of their lasso automata, degeneralized with a turn bit so that
/// both automata must complete periodic blocks infinitely often.
pub fn overlap_by_product(table: &ClassTable, x: Pair, y: Pair) -> bool {
    assert!(!x.is_finite() && !y.is_finite(), "product emptiness only applies to infinite pairs");
    let (lx, ly) = (PairLasso::new(table, x), PairLasso::new(table, y));
    let sigma = table.num_symbols();
    type Node = (LassoState, LassoState, bool);
    ndfs::has_accepting_lasso(
        [(lx.initial(), ly.initial(), false)],
        |&(s, t, turn): &Node| {
            let next_turn = match turn {
                false if s.completed => true,
                true if t.completed => false,
                other => other,
            };
            let mut out = Vec::new();
            for a in 0..sigma {
                for s2 in lx.successors(s, a) {
                    for t2 in ly.successors(t, a) {
                        out.push((s2, t2, next_turn));
                    }
                }
            }
            out
        },
        |&(s, _, turn): &Node| !turn && s.completed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::fixtures::{a1, a2};
    use crate::lattice::tests::Named;

    #[test]
    fn product_agrees_with_factorization_on_examples() {
        for aut in [a1(), a2()] {
            let n = Named::new(aut);
            let abs = &n.abs;
            let infinite: Vec<_> = abs.pairs().ids().filter(|&p| !abs.pair(p).is_finite()).collect();
            for &p in &infinite {
                for &q in &infinite {
                    assert_eq!(
                        overlap_by_product(abs.classes(), abs.pair(p), abs.pair(q)),
                        abs.pairs_overlap(p, q),
                        "{} vs {}",
                        abs.pair_label(p),
                        abs.pair_label(q)
                    );
                }
            }
        }
    }

    #[test]
    fn ex1_overlaps_by_product() {
        let n = Named::new(a1());
        let t = n.abs.classes();
        let pair = |h: &str, p: &str| n.abs.pair(n.p(h, p));
        assert!(overlap_by_product(t, pair("b", "b"), pair("ba", "ba")));
        assert!(!overlap_by_product(t, pair("a", "a"), pair("ba", "ba")));
    }

    #[test]
    fn every_infinite_pair_is_nonempty() {
        let n = Named::new(a2());
        for p in n.abs.pairs().ids() {
            let pair = n.abs.pair(p);
            if !pair.is_finite() {
                assert!(overlap_by_product(n.abs.classes(), pair, pair));
            }
        }
    }
}
