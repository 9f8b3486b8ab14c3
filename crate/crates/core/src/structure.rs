//! Structural quantities derived from string sets: nondeterministic state
//! sets X_x, nondeterministic active events Γ_n(x), and the per-state
//! classification of |S_q| used by the calculability tests.

use std::collections::VecDeque;

use crate::alphabet::EventId;
use crate::automaton::{Automaton, StateId};
use crate::error::{Error, Result};

/// Pairs (u, v) such that some string reaches both u and v from the initial
/// state, as a dense `n × n` table.
pub fn self_product_pairs(a: &Automaton) -> Vec<bool> {
    let n = a.num_states();
    let mut seen = vec![false; n * n];
    let Some(q0) = a.initial() else {
        return seen;
    };
    seen[q0 * n + q0] = true;
    let mut queue = VecDeque::from([(q0, q0)]);
    while let Some((u, v)) = queue.pop_front() {
        for e in a.alphabet().ids() {
            for &u2 in a.successors(u, e) {
                for &v2 in a.successors(v, e) {
                    if !seen[u2 * n + v2] {
                        seen[u2 * n + v2] = true;
                        queue.push_back((u2, v2));
                    }
                }
            }
        }
    }
    seen
}

/// X_x and Γ_n(x) for every state of one automaton, computed once.
#[derive(Debug, Clone)]
pub struct NondetInfo {
    n: usize,
    pairs: Vec<bool>,
    // active[x][e] = e ∈ Γ_n(x)
    active: Vec<Vec<bool>>,
}

impl NondetInfo {
    pub fn new(a: &Automaton) -> Self {
        let n = a.num_states();
        let pairs = self_product_pairs(a);
        let active = (0..n)
            .map(|x| {
                let mut row = vec![false; a.alphabet().len()];
                for v in (0..n).filter(|&v| pairs[x * n + v]) {
                    for e in a.alphabet().ids() {
                        row[e] |= a.has_event(v, e);
                    }
                }
                row
            })
            .collect();
        NondetInfo { n, pairs, active }
    }

    pub fn is_reachable(&self, x: StateId) -> bool {
        self.pairs[x * self.n + x]
    }

    /// X_x; empty for unreachable x.
    pub fn state_set(&self, x: StateId) -> Vec<StateId> {
        (0..self.n)
            .filter(|&v| self.pairs[x * self.n + v])
            .collect()
    }

    /// e ∈ Γ_n(x).
    #[inline]
    pub fn has_event(&self, x: StateId, e: EventId) -> bool {
        self.active[x][e]
    }
}

impl Automaton {
    /// X_x: the states reached by some string that also reaches `x`.
    pub fn nondet_state_set(&self, x: StateId) -> Result<Vec<StateId>> {
        let info = NondetInfo::new(self);
        if !info.is_reachable(x) {
            return Err(Error::Unreachable(self.state_name(x).to_string()));
        }
        Ok(info.state_set(x))
    }

    /// Name-based [`nondet_state_set`](Self::nondet_state_set).
    pub fn nondet_state_set_names(&self, x: &str) -> Result<Vec<String>> {
        let x = self.require_state(x)?;
        Ok(self
            .nondet_state_set(x)?
            .into_iter()
            .map(|v| self.state_name(v).to_string())
            .collect())
    }

    /// Γ_n(x): union of Γ over X_x.
    pub fn nondet_active_events(&self, x: StateId) -> Result<Vec<EventId>> {
        let info = NondetInfo::new(self);
        if !info.is_reachable(x) {
            return Err(Error::Unreachable(self.state_name(x).to_string()));
        }
        Ok(self
            .alphabet()
            .ids()
            .filter(|&e| info.has_event(x, e))
            .collect())
    }

    /// Name-based [`nondet_active_events`](Self::nondet_active_events).
    pub fn nondet_active_event_names(&self, x: &str) -> Result<Vec<String>> {
        let x = self.require_state(x)?;
        Ok(self
            .nondet_active_events(x)?
            .into_iter()
            .map(|e| self.alphabet().name(e).to_string())
            .collect())
    }

    /// Classifies |S_q| for every state.
    pub fn string_count_class(&self) -> StringCountClass {
        StringCountClass::new(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StringCount {
    Unreachable,
    ExactlyOne,
    TwoOrMore,
}

/// Per-state classification of the number of distinct strings reaching it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringCountClass {
    tags: Vec<StringCount>,
}

impl StringCountClass {
    /// Two distinct strings s ≠ t reach q iff either one extends the other
    /// (a common string reaches (q, r) and r reaches q again by a nonempty
    /// path) or they diverge (a common prefix reaches (p1, p2), the next
    /// events differ, and both branches can still reach q). Both cases are
    /// reachability questions on the self-product, so no determinization
    /// is needed.
    pub fn new(a: &Automaton) -> Self {
        let n = a.num_states();
        let pairs = self_product_pairs(a);
        let reachable: Vec<bool> = (0..n).map(|q| pairs[q * n + q]).collect();

        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (p, _, d) in a.transitions() {
            preds[d].push(p);
        }

        let tags = (0..n)
            .map(|q| {
                if !reachable[q] {
                    return StringCount::Unreachable;
                }
                // reaches_plus[p]: q reachable from p by a nonempty path
                let mut reaches_plus = vec![false; n];
                let mut queue: VecDeque<StateId> = preds[q].iter().copied().collect();
                for &p in &preds[q] {
                    reaches_plus[p] = true;
                }
                while let Some(p) = queue.pop_front() {
                    for &pp in &preds[p] {
                        if !reaches_plus[pp] {
                            reaches_plus[pp] = true;
                            queue.push_back(pp);
                        }
                    }
                }
                let mut reaches = reaches_plus.clone();
                reaches[q] = true;

                let extends = (0..n).any(|r| pairs[q * n + r] && reaches_plus[r]);
                let diverges = || {
                    (0..n * n).filter(|&i| pairs[i]).any(|i| {
                        let (p1, p2) = (i / n, i % n);
                        a.alphabet().ids().any(|e1| {
                            a.successors(p1, e1).iter().any(|&d| reaches[d])
                                && a.alphabet().ids().any(|e2| {
                                    e2 != e1 && a.successors(p2, e2).iter().any(|&d| reaches[d])
                                })
                        })
                    })
                };
                if extends || diverges() {
                    StringCount::TwoOrMore
                } else {
                    StringCount::ExactlyOne
                }
            })
            .collect();
        StringCountClass { tags }
    }

    pub fn tag(&self, q: StateId) -> StringCount {
        self.tags[q]
    }

    /// q ∈ Q_M.
    pub fn in_q_m(&self, q: StateId) -> bool {
        self.tags[q] == StringCount::TwoOrMore
    }

    /// Q_M = {q : |S_q| ≥ 2}.
    pub fn q_m(&self) -> Vec<StateId> {
        (0..self.tags.len()).filter(|&q| self.in_q_m(q)).collect()
    }
}
