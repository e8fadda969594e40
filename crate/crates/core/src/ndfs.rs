//! Nested depth-first search for accepting lassos in implicitly given graphs.
//!
//! The outer search visits nodes in post-order; whenever an accepting node is
//! finished, an inner search looks for a path leading back to it. The inner
//! visited set is shared across all inner searches, which keeps the whole
//! procedure linear in the size of the reachable graph.

use std::collections::HashSet;
use std::hash::Hash;

/// Returns `true` iff some node reachable from `initial` is accepting and lies
/// on a cycle.
pub fn has_accepting_lasso<N, I, S, A>(initial: I, mut successors: S, accepting: A) -> bool
where
    N: Clone + Eq + Hash,
    I: IntoIterator<Item = N>,
    S: FnMut(&N) -> Vec<N>,
    A: Fn(&N) -> bool,
{
    let mut outer_seen: HashSet<N> = HashSet::new();
    let mut inner_seen: HashSet<N> = HashSet::new();

    for root in initial {
        if !outer_seen.insert(root.clone()) {
            continue;
        }
        let first = successors(&root);
        let mut stack: Vec<(N, Vec<N>, usize)> = vec![(root, first, 0)];
        while let Some(top) = stack.last_mut() {
            if top.2 < top.1.len() {
                let next = top.1[top.2].clone();
                top.2 += 1;
                if outer_seen.insert(next.clone()) {
                    let succ = successors(&next);
                    stack.push((next, succ, 0));
                }
                continue;
            }
            let (node, _, _) = stack.pop().expect("stack is non-empty");
            if accepting(&node) && cycle_through(&node, &mut successors, &mut inner_seen) {
                return true;
            }
        }
    }
    false
}

fn cycle_through<N, S>(seed: &N, successors: &mut S, seen: &mut HashSet<N>) -> bool
where
    N: Clone + Eq + Hash,
    S: FnMut(&N) -> Vec<N>,
{
    let mut stack = vec![seed.clone()];
    while let Some(node) = stack.pop() {
        for next in successors(&node) {
            if &next == seed {
                return true;
            }
            if seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    false
}
