use std::collections::HashSet;

use crate::term::{Term, Trs};

use super::{step_at, RewriteError, Step};

pub const DEFAULT_NODE_CAP: usize = 1_000_000;

/// All forward steps from `t`: positions in pre-order, then rules by index.
pub fn one_step_successors(trs: &Trs, t: &Term) -> Vec<Step> {
    let mut out = Vec::new();
    for (pos, _) in t.positions() {
        for (i, rule) in trs.rules().iter().enumerate() {
            if let Ok(Some(st)) = step_at(t, i, rule, &pos) {
                out.push(st);
            }
        }
    }
    out
}

/// Breadth-first bounded reachability with a cap on the number of distinct
/// terms visited.
#[derive(Debug, Clone, Copy)]
pub struct Reachability {
    pub node_cap: usize,
}

impl Default for Reachability {
    fn default() -> Self {
        Reachability {
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

impl Reachability {
    pub fn with_cap(node_cap: usize) -> Self {
        Reachability { node_cap }
    }

    /// `{ t | s →ⁱ t, i ⩽ bound }`.
    pub fn reachable(&self, trs: &Trs, s: &Term, bound: usize) -> Result<HashSet<Term>, RewriteError> {
        let mut seen = HashSet::from([s.clone()]);
        let mut frontier = vec![s.clone()];
        for _ in 0..bound {
            let mut next = Vec::new();
            for t in &frontier {
                for st in one_step_successors(trs, t) {
                    if seen.insert(st.target.clone()) {
                        if seen.len() > self.node_cap {
                            return Err(RewriteError::ResourceExhausted { cap: self.node_cap });
                        }
                        next.push(st.target);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(seen)
    }

    pub fn joinable(&self, trs: &Trs, s: &Term, t: &Term, bound: usize) -> Result<bool, RewriteError> {
        let from_s = self.reachable(trs, s, bound)?;
        let from_t = self.reachable(trs, t, bound)?;
        Ok(!from_s.is_disjoint(&from_t))
    }
}

pub fn reachable_within(trs: &Trs, s: &Term, bound: usize) -> Result<HashSet<Term>, RewriteError> {
    Reachability::default().reachable(trs, s, bound)
}

pub fn joinable_within(trs: &Trs, s: &Term, t: &Term, bound: usize) -> Result<bool, RewriteError> {
    Reachability::default().joinable(trs, s, t, bound)
}
