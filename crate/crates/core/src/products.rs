//! Product constructions that turn string-quantified conditions into
//! reachability questions: the controllable product ×_sc, the observable
//! product ×_so, the two-track product used for state failure sets, and the
//! unobservable language inclusion check.

use std::collections::{HashMap, VecDeque};

use crate::alphabet::{EventAlphabet, EventId, Word};
use crate::automaton::{Automaton, StateId};
use crate::error::Result;
use crate::structure::NondetInfo;

/// Node of a controllable product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScNode {
    Pair(StateId, StateId),
    /// The reserved violation pair (q_v, x_v).
    Violation,
}

/// R ×_sc G restricted to what is reachable from (q0, x0).
#[derive(Debug, Clone)]
pub struct ControllableProduct {
    pub alphabet: EventAlphabet,
    pub spec_states: Vec<String>,
    pub plant_states: Vec<String>,
    /// Node 0 is the initial pair when the product is nonempty.
    pub nodes: Vec<ScNode>,
    pub edges: Vec<(usize, EventId, usize)>,
    parent: Vec<Option<(usize, EventId)>>,
}

impl ControllableProduct {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn violation_node(&self) -> Option<usize> {
        self.nodes.iter().position(|n| *n == ScNode::Violation)
    }

    /// Edges into the violation node as `(q, x, σ)`.
    pub fn violations(&self) -> impl Iterator<Item = (StateId, StateId, EventId)> + '_ {
        let v = self.violation_node();
        self.edges
            .iter()
            .filter(move |&&(_, _, d)| Some(d) == v)
            .map(|&(s, e, _)| match self.nodes[s] {
                ScNode::Pair(q, x) => (q, x, e),
                ScNode::Violation => unreachable!("violation node has no successors"),
            })
    }

    /// Reachable pairs, excluding the violation node.
    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.nodes.iter().filter_map(|n| match *n {
            ScNode::Pair(q, x) => Some((q, x)),
            ScNode::Violation => None,
        })
    }

    /// A shortest common string reaching the pair node `node`.
    pub fn witness(&self, node: usize) -> Word {
        let mut w = Vec::new();
        let mut cur = node;
        while let Some((p, e)) = self.parent[cur] {
            w.push(e);
            cur = p;
        }
        w.reverse();
        w
    }

    pub fn node_index(&self, q: StateId, x: StateId) -> Option<usize> {
        self.nodes.iter().position(|n| *n == ScNode::Pair(q, x))
    }
}

/// Builds `rz ×_sc g` with Γ_n taken from `g_info` (computed on the plant).
pub(crate) fn controllable_product_with(
    rz: &Automaton,
    g: &Automaton,
    g_info: &NondetInfo,
) -> ControllableProduct {
    let sigma = rz.alphabet();
    let nx = g.num_states();
    let mut product = ControllableProduct {
        alphabet: sigma.clone(),
        spec_states: rz.state_names().to_vec(),
        plant_states: g.state_names().to_vec(),
        nodes: Vec::new(),
        edges: Vec::new(),
        parent: Vec::new(),
    };
    let (Some(q0), Some(x0)) = (rz.initial(), g.initial()) else {
        return product;
    };
    let mut index = vec![usize::MAX; rz.num_states() * nx];
    let mut violation = None;
    index[q0 * nx + x0] = 0;
    product.nodes.push(ScNode::Pair(q0, x0));
    product.parent.push(None);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let ScNode::Pair(q, x) = product.nodes[i] else {
            continue;
        };
        for e in sigma.ids() {
            let in_q = rz.has_event(q, e);
            if !sigma.is_controllable(e) && g_info.has_event(x, e) && !in_q {
                let v = *violation.get_or_insert_with(|| {
                    product.nodes.push(ScNode::Violation);
                    product.parent.push(Some((i, e)));
                    product.nodes.len() - 1
                });
                product.edges.push((i, e, v));
            }
            if in_q && g.has_event(x, e) {
                for &q2 in rz.successors(q, e) {
                    for &x2 in g.successors(x, e) {
                        let slot = &mut index[q2 * nx + x2];
                        if *slot == usize::MAX {
                            *slot = product.nodes.len();
                            product.nodes.push(ScNode::Pair(q2, x2));
                            product.parent.push(Some((i, e)));
                            queue.push_back(*slot);
                        }
                        product.edges.push((i, e, *slot));
                    }
                }
            }
        }
    }
    product
}

/// `rz ×_sc g`.
pub fn controllable_product(rz: &Automaton, g: &Automaton) -> Result<ControllableProduct> {
    rz.check_alphabet(g)?;
    Ok(controllable_product_with(rz, g, &NondetInfo::new(g)))
}

/// Edge label of the observable product; `None` stands for ε.
pub type PairLabel = (Option<EventId>, Option<EventId>);

/// R ×_so G restricted to what is reachable from (q0, x0). The (ε,ε)
/// self-loops are implicit.
#[derive(Debug, Clone)]
pub struct ObservableProduct {
    pub alphabet: EventAlphabet,
    pub spec_states: Vec<String>,
    pub plant_states: Vec<String>,
    pub nodes: Vec<(StateId, StateId)>,
    pub edges: Vec<(usize, PairLabel, usize)>,
}

impl ObservableProduct {
    pub fn contains(&self, q: StateId, x: StateId) -> bool {
        self.nodes.contains(&(q, x))
    }

    /// Reachable pairs as a dense `|Q| × |X|` mask.
    pub fn pair_mask(&self) -> Vec<bool> {
        let nx = self.plant_states.len();
        let mut m = vec![false; self.spec_states.len() * nx];
        for &(q, x) in &self.nodes {
            m[q * nx + x] = true;
        }
        m
    }
}

pub fn observable_product(r: &Automaton, g: &Automaton) -> Result<ObservableProduct> {
    r.check_alphabet(g)?;
    let sigma = r.alphabet();
    let nx = g.num_states();
    let mut product = ObservableProduct {
        alphabet: sigma.clone(),
        spec_states: r.state_names().to_vec(),
        plant_states: g.state_names().to_vec(),
        nodes: Vec::new(),
        edges: Vec::new(),
    };
    let (Some(q0), Some(x0)) = (r.initial(), g.initial()) else {
        return Ok(product);
    };
    let mut index = vec![usize::MAX; r.num_states() * nx];
    index[q0 * nx + x0] = 0;
    product.nodes.push((q0, x0));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (q, x) = product.nodes[i];
        let mut moves: Vec<(PairLabel, StateId, StateId)> = Vec::new();
        for e in sigma.ids() {
            if sigma.is_observable(e) {
                for &q2 in r.successors(q, e) {
                    for &x2 in g.successors(x, e) {
                        moves.push(((Some(e), Some(e)), q2, x2));
                    }
                }
                continue;
            }
            for &x2 in g.successors(x, e) {
                moves.push(((None, Some(e)), q, x2));
            }
            for &q2 in r.successors(q, e) {
                moves.push(((Some(e), None), q2, x));
            }
            for e2 in sigma.unobservable() {
                for &q2 in r.successors(q, e) {
                    for &x2 in g.successors(x, e2) {
                        moves.push(((Some(e), Some(e2)), q2, x2));
                    }
                }
            }
        }
        for (label, q2, x2) in moves {
            let slot = &mut index[q2 * nx + x2];
            if *slot == usize::MAX {
                *slot = product.nodes.len();
                product.nodes.push((q2, x2));
                queue.push_back(*slot);
            }
            product.edges.push((i, label, *slot));
        }
    }
    Ok(product)
}

/// A reachable pair with the two strings reaching it.
pub type PairWitness = ((StateId, StateId), Word, Word);

/// Every `((q, x), s1, s2)` with `|s1|, |s2| ≤ maxlen`, `P(s1) = P(s2)`,
/// `q ∈ δ(q0, s1)` and `x ∈ α(x0, s2)`, found by literal enumeration of both
/// bounded languages. Exponential in `maxlen`; meant for small bounds.
pub fn reachable_pairs_by_strings(
    r: &Automaton,
    g: &Automaton,
    maxlen: usize,
) -> Result<Vec<PairWitness>> {
    r.check_alphabet(g)?;
    let sigma = r.alphabet();
    let mut by_projection: HashMap<Word, Vec<Word>> = HashMap::new();
    for s2 in g.bounded_language(maxlen) {
        by_projection
            .entry(sigma.project(&s2))
            .or_default()
            .push(s2);
    }
    let mut out = Vec::new();
    for s1 in r.bounded_language(maxlen) {
        let Some(partners) = by_projection.get(&sigma.project(&s1)) else {
            continue;
        };
        let qs = r.step_from_initial(&s1);
        for s2 in partners {
            for &x in &g.step_from_initial(s2) {
                for &q in &qs {
                    out.push(((q, x), s1.clone(), s2.clone()));
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// State of the two-track product: `(q1, x1)` follow a common string s1,
/// `(q2, x2)` follow a common string s2 with `P(s2) = P(s1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrackState {
    pub q1: StateId,
    pub x1: StateId,
    pub q2: StateId,
    pub x2: StateId,
    /// s1 has consumed at least one event.
    pub s1_nonempty: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TrackMove {
    Both(EventId),
    Left(EventId),
    Right(EventId),
}

/// Reachable part of the two-track product, with BFS parents for witnesses.
#[derive(Debug, Clone)]
pub struct TrackProduct {
    pub states: Vec<TrackState>,
    parent: Vec<Option<(usize, TrackMove)>>,
}

impl TrackProduct {
    /// Shortest `(s1, s2)` leading to `states[i]`.
    pub fn witness(&self, i: usize) -> (Word, Word) {
        let (mut s1, mut s2) = (Vec::new(), Vec::new());
        let mut cur = i;
        while let Some((p, m)) = self.parent[cur] {
            match m {
                TrackMove::Both(e) => {
                    s1.push(e);
                    s2.push(e);
                }
                TrackMove::Left(e) => s1.push(e),
                TrackMove::Right(e) => s2.push(e),
            }
            cur = p;
        }
        s1.reverse();
        s2.reverse();
        (s1, s2)
    }

    pub fn contains(&self, t: &TrackState) -> bool {
        self.states.contains(t)
    }
}

/// Two-track product of `rz` with `g` (both tracks use `rz` and `g`).
pub fn so_track_product(rz: &Automaton, g: &Automaton) -> Result<TrackProduct> {
    rz.check_alphabet(g)?;
    let sigma = rz.alphabet();
    let (nq, nx) = (rz.num_states(), g.num_states());
    let mut product = TrackProduct {
        states: Vec::new(),
        parent: Vec::new(),
    };
    let (Some(q0), Some(x0)) = (rz.initial(), g.initial()) else {
        return Ok(product);
    };
    let key = |t: &TrackState| {
        (((t.q1 * nx + t.x1) * nq + t.q2) * nx + t.x2) * 2 + t.s1_nonempty as usize
    };
    let mut seen = vec![false; nq * nx * nq * nx * 2];
    let start = TrackState {
        q1: q0,
        x1: x0,
        q2: q0,
        x2: x0,
        s1_nonempty: false,
    };
    seen[key(&start)] = true;
    product.states.push(start);
    product.parent.push(None);
    let mut head = 0;
    while head < product.states.len() {
        let t = product.states[head];
        let mut push = |n: TrackState, m: TrackMove| {
            let k = key(&n);
            if !seen[k] {
                seen[k] = true;
                product.states.push(n);
                product.parent.push(Some((head, m)));
            }
        };
        for e in sigma.ids() {
            let left: Vec<(StateId, StateId)> = rz
                .successors(t.q1, e)
                .iter()
                .flat_map(|&q| g.successors(t.x1, e).iter().map(move |&x| (q, x)))
                .collect();
            let right: Vec<(StateId, StateId)> = rz
                .successors(t.q2, e)
                .iter()
                .flat_map(|&q| g.successors(t.x2, e).iter().map(move |&x| (q, x)))
                .collect();
            if sigma.is_observable(e) {
                for &(q1, x1) in &left {
                    for &(q2, x2) in &right {
                        let n = TrackState {
                            q1,
                            x1,
                            q2,
                            x2,
                            s1_nonempty: true,
                        };
                        push(n, TrackMove::Both(e));
                    }
                }
            } else {
                for &(q1, x1) in &left {
                    push(
                        TrackState {
                            q1,
                            x1,
                            s1_nonempty: true,
                            ..t
                        },
                        TrackMove::Left(e),
                    );
                }
                for &(q2, x2) in &right {
                    push(TrackState { q2, x2, ..t }, TrackMove::Right(e));
                }
            }
        }
        head += 1;
    }
    Ok(product)
}

/// Outcome of the unobservable language inclusion check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inclusion {
    Ok,
    /// A shortest string of unobservable events generated by G but not by rz.
    Counterexample(Word),
}

/// Decides whether every unobservable-only string of `g` is also a string
/// of `rz`. Explores pairs `(x, D)` where `x ∈ α(x0, s)` and
/// `D = δ_rz(q0, s)` for unobservable strings s.
pub fn unobs_inclusion_check(g: &Automaton, rz: &Automaton) -> Result<Inclusion> {
    g.check_alphabet(rz)?;
    let Some(x0) = g.initial() else {
        return Ok(Inclusion::Ok);
    };
    let Some(q0) = rz.initial() else {
        return Ok(Inclusion::Counterexample(Vec::new()));
    };
    let unobs: Vec<EventId> = g.alphabet().unobservable().collect();
    let mut index: HashMap<(StateId, Vec<StateId>), usize> = HashMap::new();
    let mut nodes: Vec<(StateId, Vec<StateId>)> = vec![(x0, vec![q0])];
    let mut parent: Vec<Option<(usize, EventId)>> = vec![None];
    index.insert((x0, vec![q0]), 0);
    let witness = |parent: &[Option<(usize, EventId)>], mut i: usize, last: EventId| {
        let mut w = vec![last];
        while let Some((p, e)) = parent[i] {
            w.push(e);
            i = p;
        }
        w.reverse();
        w
    };
    let mut head = 0;
    while head < nodes.len() {
        let (x, d) = nodes[head].clone();
        for &e in &unobs {
            if g.successors(x, e).is_empty() {
                continue;
            }
            let d2 = rz.step(&d, &[e]);
            if d2.is_empty() {
                return Ok(Inclusion::Counterexample(witness(&parent, head, e)));
            }
            for &x2 in g.successors(x, e) {
                let k = (x2, d2.clone());
                if !index.contains_key(&k) {
                    index.insert(k.clone(), nodes.len());
                    nodes.push(k);
                    parent.push(Some((head, e)));
                }
            }
        }
        head += 1;
    }
    Ok(Inclusion::Ok)
}
