//! Reference implementations used to cross-check the engine on small
//! instances: bounded-string condition checks, exhaustive supremal search,
//! brute-force simulations and string counts, and a seeded instance
//! generator.
//!
//! The bounded checks explore configurations `(set of spec states, set of
//! plant states)` reached by strings of bounded length. A configuration
//! reached by some string of length ≤ k is found at its minimal depth, so
//! these checks decide exactly the same thing as enumerating every string
//! of length ≤ k. The `literal_*` variants do the enumeration for real and
//! are used to validate the configuration search at small k.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Event, EventAlphabet, EventId, Word};
use crate::automaton::{Automaton, StateId};
use crate::error::{Error, Result};
use crate::pairs::StatePairSet;
use crate::structure::StringCount;
use crate::synthesis::Mode;

type Set = Vec<StateId>;

fn step(a: &Automaton, from: &[StateId], e: EventId) -> Set {
    a.step(from, &[e])
}

fn any_has(a: &Automaton, set: &[StateId], e: EventId) -> bool {
    set.iter().any(|&q| a.has_event(q, e))
}

#[derive(Clone, Copy)]
enum Move {
    Both(EventId),
    Left(EventId),
    Right(EventId),
}

/// Searches configurations reachable by string pairs `(s1, s2)` with
/// `|s1|, |s2| ≤ k`, keeping the Pareto-minimal length pairs per
/// configuration. Returns the first configuration flagged by `bad` together
/// with its witness strings.
fn search<C, W>(
    start: C,
    k: usize,
    moves: impl Fn(&C) -> Vec<(C, Move)>,
    bad: impl Fn(&C) -> Option<W>,
) -> Option<(Word, Word, W)>
where
    C: Clone + Eq + Hash,
{
    struct Entry<C> {
        config: C,
        l1: usize,
        l2: usize,
        parent: Option<(usize, Move)>,
    }
    let mut entries = vec![Entry {
        config: start.clone(),
        l1: 0,
        l2: 0,
        parent: None,
    }];
    let mut fronts: HashMap<C, Vec<(usize, usize)>> = HashMap::new();
    fronts.insert(start, vec![(0, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if let Some(w) = bad(&entries[i].config) {
            let (mut s1, mut s2) = (Vec::new(), Vec::new());
            let mut cur = i;
            while let Some((p, m)) = entries[cur].parent {
                match m {
                    Move::Both(e) => {
                        s1.push(e);
                        s2.push(e);
                    }
                    Move::Left(e) => s1.push(e),
                    Move::Right(e) => s2.push(e),
                }
                cur = p;
            }
            s1.reverse();
            s2.reverse();
            return Some((s1, s2, w));
        }
        let (l1, l2) = (entries[i].l1, entries[i].l2);
        for (next, m) in moves(&entries[i].config) {
            let (n1, n2) = match m {
                Move::Both(_) => (l1 + 1, l2 + 1),
                Move::Left(_) => (l1 + 1, l2),
                Move::Right(_) => (l1, l2 + 1),
            };
            if n1 > k || n2 > k {
                continue;
            }
            let front = fronts.entry(next.clone()).or_default();
            if front.iter().any(|&(a, b)| a <= n1 && b <= n2) {
                continue;
            }
            front.retain(|&(a, b)| !(n1 <= a && n2 <= b));
            front.push((n1, n2));
            entries.push(Entry {
                config: next,
                l1: n1,
                l2: n2,
                parent: Some((i, m)),
            });
            queue.push_back(entries.len() - 1);
        }
    }
    None
}

/// A violation of the controllable condition: after `string`, spec state
/// `state` cannot follow the uncontrollable `event` the plant allows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControllableWitness {
    pub string: Word,
    pub state: StateId,
    pub event: EventId,
}

/// Checks the controllable condition over every `s ∈ L(rz)` with `|s| ≤ k`.
pub fn bounded_controllable_condition(
    rz: &Automaton,
    g: &Automaton,
    k: usize,
) -> Result<Option<ControllableWitness>> {
    rz.check_alphabet(g)?;
    let (Some(q0), Some(x0)) = (rz.initial(), g.initial()) else {
        return Ok(None);
    };
    let sigma = rz.alphabet().clone();
    let found = search(
        (vec![q0], vec![x0]),
        k,
        |(d, a)| {
            sigma
                .ids()
                .filter_map(|e| {
                    let (d2, a2) = (step(rz, d, e), step(g, a, e));
                    (!d2.is_empty() && !a2.is_empty()).then_some(((d2, a2), Move::Left(e)))
                })
                .collect()
        },
        |(d, a)| {
            sigma.uncontrollable().find_map(|e| {
                if !any_has(g, a, e) {
                    return None;
                }
                d.iter().find(|&&q| !rz.has_event(q, e)).map(|&q| (q, e))
            })
        },
    );
    Ok(
        found.map(|(string, _, (state, event))| ControllableWitness {
            string,
            state,
            event,
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrongObservableWitness {
    /// An unobservable plant string outside L(rz).
    Hidden(Word),
    /// `s1σ, s2σ ∈ L(G)`, `P(s1) = P(s2)`, `state ∈ δ_rz(q0, s2)` disables σ.
    Pair {
        s1: Word,
        s2: Word,
        state: StateId,
        event: EventId,
    },
}

/// Checks both clauses of the strong observable condition over strings of
/// length ≤ k.
pub fn bounded_strong_observable_condition(
    rz: &Automaton,
    g: &Automaton,
    k: usize,
) -> Result<Option<StrongObservableWitness>> {
    rz.check_alphabet(g)?;
    let Some(x0) = g.initial() else {
        return Ok(None);
    };
    let Some(q0) = rz.initial() else {
        return Ok(Some(StrongObservableWitness::Hidden(Vec::new())));
    };
    let sigma = rz.alphabet().clone();
    let unobs: Vec<EventId> = sigma.unobservable().collect();

    // ε-clause: configurations (A, D) over unobservable strings
    let hidden = search(
        (vec![x0], vec![q0]),
        k,
        |(a, d)| {
            unobs
                .iter()
                .filter_map(|&e| {
                    let a2 = step(g, a, e);
                    (!a2.is_empty()).then(|| ((a2, step(rz, d, e)), Move::Left(e)))
                })
                .collect()
        },
        |(_, d)| d.is_empty().then_some(()),
    );
    if let Some((s, _, ())) = hidden {
        return Ok(Some(StrongObservableWitness::Hidden(s)));
    }

    // main clause: (A1, D1, A2, D2, s1 nonempty)
    type C = (Set, Set, Set, Set, bool);
    let start: C = (vec![x0], vec![q0], vec![x0], vec![q0], false);
    let live = |a1: &Set, d1: &Set, a2: &Set, d2: &Set| {
        !a1.is_empty() && !d1.is_empty() && !a2.is_empty() && !d2.is_empty()
    };
    let found = search(
        start,
        k,
        |(a1, d1, a2, d2, ne): &C| {
            let mut out = Vec::new();
            for e in sigma.ids() {
                let (a1n, d1n) = (step(g, a1, e), step(rz, d1, e));
                let (a2n, d2n) = (step(g, a2, e), step(rz, d2, e));
                if sigma.is_observable(e) {
                    if live(&a1n, &d1n, &a2n, &d2n) {
                        out.push(((a1n, d1n, a2n, d2n, true), Move::Both(e)));
                    }
                } else {
                    if live(&a1n, &d1n, a2, d2) {
                        out.push(((a1n, d1n, a2.clone(), d2.clone(), true), Move::Left(e)));
                    }
                    if live(a1, d1, &a2n, &d2n) {
                        out.push(((a1.clone(), d1.clone(), a2n, d2n, *ne), Move::Right(e)));
                    }
                }
            }
            out
        },
        |(a1, _, a2, d2, ne): &C| {
            if !ne {
                return None;
            }
            sigma.controllable().find_map(|e| {
                if !(any_has(g, a1, e) && any_has(g, a2, e)) {
                    return None;
                }
                d2.iter().find(|&&q| !rz.has_event(q, e)).map(|&q| (q, e))
            })
        },
    );
    Ok(
        found.map(|(s1, s2, (state, event))| StrongObservableWitness::Pair {
            s1,
            s2,
            state,
            event,
        }),
    )
}

/// A violation of the plain observable condition: `s, s' ∈ L(rz)`,
/// `P(s) = P(s')`, `s'σ ∈ L(rz)`, `sσ ∈ L(G)`, and `state ∈ δ_rz(q0, s)`
/// disables σ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservableWitness {
    pub s: Word,
    pub s_prime: Word,
    pub state: StateId,
    pub event: EventId,
}

pub fn bounded_observable_condition(
    rz: &Automaton,
    g: &Automaton,
    k: usize,
) -> Result<Option<ObservableWitness>> {
    rz.check_alphabet(g)?;
    let (Some(q0), Some(x0)) = (rz.initial(), g.initial()) else {
        return Ok(None);
    };
    let sigma = rz.alphabet().clone();
    // (D1, A1, D2): s drives D1 and A1, s' drives D2
    type C = (Set, Set, Set);
    let found = search(
        (vec![q0], vec![x0], vec![q0]),
        k,
        |(d1, a1, d2): &C| {
            let mut out = Vec::new();
            for e in sigma.ids() {
                let (d1n, a1n, d2n) = (step(rz, d1, e), step(g, a1, e), step(rz, d2, e));
                let left_ok = !d1n.is_empty() && !a1n.is_empty();
                if sigma.is_observable(e) {
                    if left_ok && !d2n.is_empty() {
                        out.push(((d1n, a1n, d2n), Move::Both(e)));
                    }
                } else {
                    if left_ok {
                        out.push(((d1n, a1n, d2.clone()), Move::Left(e)));
                    }
                    if !d2n.is_empty() {
                        out.push(((d1.clone(), a1.clone(), d2n), Move::Right(e)));
                    }
                }
            }
            out
        },
        |(d1, a1, d2): &C| {
            sigma.controllable().find_map(|e| {
                if !(any_has(rz, d2, e) && any_has(g, a1, e)) {
                    return None;
                }
                d1.iter().find(|&&q| !rz.has_event(q, e)).map(|&q| (q, e))
            })
        },
    );
    Ok(found.map(|(s, s_prime, (state, event))| ObservableWitness {
        s,
        s_prime,
        state,
        event,
    }))
}

/// Language controllability of L(k) w.r.t. L(G) over strings of length ≤ bound:
/// returns `(s, σ)` with `s ∈ L(k)`, σ uncontrollable, `sσ ∈ L(G) \ L(k)`.
pub fn bounded_language_controllable(
    sub: &Automaton,
    g: &Automaton,
    bound: usize,
) -> Result<Option<(Word, EventId)>> {
    sub.check_alphabet(g)?;
    let (Some(q0), Some(x0)) = (sub.initial(), g.initial()) else {
        return Ok(None);
    };
    let sigma = sub.alphabet().clone();
    let found = search(
        (vec![q0], vec![x0]),
        bound,
        |(d, a)| {
            sigma
                .ids()
                .filter_map(|e| {
                    let (d2, a2) = (step(sub, d, e), step(g, a, e));
                    (!d2.is_empty() && !a2.is_empty()).then_some(((d2, a2), Move::Left(e)))
                })
                .collect()
        },
        |(d, a)| {
            sigma
                .uncontrollable()
                .find(|&e| any_has(g, a, e) && !any_has(sub, d, e))
        },
    );
    Ok(found.map(|(s, _, e)| (s, e)))
}

/// Language observability of L(sub) w.r.t. L(G) over strings of length ≤
/// bound: returns `(s, s', σ)` with `P(s) = P(s')`, `sσ ∈ L(sub)`,
/// `s'σ ∈ L(G) \ L(sub)`.
pub fn bounded_language_observable(
    sub: &Automaton,
    g: &Automaton,
    bound: usize,
) -> Result<Option<(Word, Word, EventId)>> {
    sub.check_alphabet(g)?;
    let (Some(q0), Some(x0)) = (sub.initial(), g.initial()) else {
        return Ok(None);
    };
    let sigma = sub.alphabet().clone();
    type C = (Set, Set, Set);
    let found = search(
        (vec![q0], vec![q0], vec![x0]),
        bound,
        |(d1, d2, a2): &C| {
            let mut out = Vec::new();
            for e in sigma.ids() {
                let (d1n, d2n, a2n) = (step(sub, d1, e), step(sub, d2, e), step(g, a2, e));
                let right_ok = !d2n.is_empty() && !a2n.is_empty();
                if sigma.is_observable(e) {
                    if !d1n.is_empty() && right_ok {
                        out.push(((d1n, d2n, a2n), Move::Both(e)));
                    }
                } else {
                    if !d1n.is_empty() {
                        out.push(((d1n, d2.clone(), a2.clone()), Move::Left(e)));
                    }
                    if right_ok {
                        out.push(((d1.clone(), d2n, a2n), Move::Right(e)));
                    }
                }
            }
            out
        },
        |(d1, d2, a2): &C| {
            sigma
                .controllable()
                .find(|&e| any_has(sub, d1, e) && any_has(g, a2, e) && !any_has(sub, d2, e))
        },
    );
    Ok(found)
}

/// Literal enumeration of the controllable condition; exponential in `k`.
pub fn literal_controllable_condition(rz: &Automaton, g: &Automaton, k: usize) -> bool {
    let sigma = rz.alphabet();
    rz.bounded_language(k).iter().all(|s| {
        rz.step_from_initial(s).iter().all(|&q| {
            sigma.uncontrollable().all(|e| {
                let mut se = s.clone();
                se.push(e);
                !g.accepts_prefix(&se) || rz.has_event(q, e)
            })
        })
    })
}

/// Literal enumeration of the strong observable condition; exponential in `k`.
pub fn literal_strong_observable_condition(rz: &Automaton, g: &Automaton, k: usize) -> bool {
    let sigma = rz.alphabet();
    let plant = g.bounded_language(k);
    let hidden_ok = plant
        .iter()
        .filter(|s| sigma.project(s).is_empty())
        .all(|s| rz.accepts_prefix(s));
    if !hidden_ok {
        return false;
    }
    let ext = |s: &Word, e: EventId| {
        let mut v = s.clone();
        v.push(e);
        v
    };
    rz.bounded_language(k)
        .iter()
        .filter(|s| !s.is_empty())
        .all(|s1| {
            let p1 = sigma.project(s1);
            plant.iter().filter(|s2| sigma.project(s2) == p1).all(|s2| {
                rz.step_from_initial(s2).iter().all(|&q| {
                    sigma.controllable().all(|e| {
                        !(g.accepts_prefix(&ext(s1, e)) && g.accepts_prefix(&ext(s2, e)))
                            || rz.has_event(q, e)
                    })
                })
            })
        })
}

/// Literal enumeration of the plain observable condition; exponential in `k`.
pub fn literal_observable_condition(rz: &Automaton, g: &Automaton, k: usize) -> bool {
    let sigma = rz.alphabet();
    let lang = rz.bounded_language(k);
    let ext = |s: &Word, e: EventId| {
        let mut v = s.clone();
        v.push(e);
        v
    };
    lang.iter().all(|s| {
        let p = sigma.project(s);
        lang.iter().filter(|s2| sigma.project(s2) == p).all(|s2| {
            rz.step_from_initial(s).iter().all(|&q| {
                sigma.controllable().all(|e| {
                    !(rz.accepts_prefix(&ext(s2, e)) && g.accepts_prefix(&ext(s, e)))
                        || rz.has_event(q, e)
                })
            })
        })
    })
}

/// Pairs `(q, x)` with `q ∈ δ(q0, s)`, `x ∈ α(x0, s')`, `P(s) = P(s')` and
/// `|s|, |s'| ≤ k`, as a dense `|Q| × |X|` mask. Explores `(q, x, |s|, |s'|)`
/// one event at a time.
pub fn projection_pairs_bounded(r: &Automaton, g: &Automaton, k: usize) -> Vec<bool> {
    let (nq, nx) = (r.num_states(), g.num_states());
    let mut mask = vec![false; nq * nx];
    let (Some(q0), Some(x0)) = (r.initial(), g.initial()) else {
        return mask;
    };
    let sigma = r.alphabet();
    let w = k + 1;
    let key = |q: usize, x: usize, l1: usize, l2: usize| ((q * nx + x) * w + l1) * w + l2;
    let mut seen = vec![false; nq * nx * w * w];
    let mut queue = VecDeque::from([(q0, x0, 0usize, 0usize)]);
    seen[key(q0, x0, 0, 0)] = true;
    while let Some((q, x, l1, l2)) = queue.pop_front() {
        mask[q * nx + x] = true;
        let mut push = |q: usize, x: usize, l1: usize, l2: usize| {
            if l1 <= k && l2 <= k && !seen[key(q, x, l1, l2)] {
                seen[key(q, x, l1, l2)] = true;
                queue.push_back((q, x, l1, l2));
            }
        };
        for e in sigma.ids() {
            if sigma.is_observable(e) {
                for &q2 in r.successors(q, e) {
                    for &x2 in g.successors(x, e) {
                        push(q2, x2, l1 + 1, l2 + 1);
                    }
                }
            } else {
                for &q2 in r.successors(q, e) {
                    push(q2, x, l1 + 1, l2);
                }
                for &x2 in g.successors(x, e) {
                    push(q, x2, l1, l2 + 1);
                }
            }
        }
    }
    mask
}

/// Union of every relation on Q×X satisfying the simulation conditions
/// (marking and matching), found by enumerating all relations.
pub fn brute_force_greatest_simulation(r: &Automaton, g: &Automaton) -> Result<StatePairSet> {
    let n = r.num_states() * g.num_states();
    if n > 16 {
        return Err(Error::GuardExceeded(n, 16));
    }
    let base = StatePairSet::empty(r, g);
    let mut union = base.clone();
    for mask in 0..(1u64 << n) {
        let z = base.from_mask(mask);
        let ok = z.iter().all(|(q, x)| {
            (!r.is_marked(q) || g.is_marked(x))
                && r.transitions()
                    .filter(|&(p, _, _)| p == q)
                    .all(|(_, e, q2)| g.successors(x, e).iter().any(|&x2| z.contains(q2, x2)))
        });
        if ok {
            union = union.union(&z);
        }
    }
    Ok(union)
}

/// |S_q| classes from the subset construction: for each q, count the
/// strings accepted by the determinized automaton with accepting
/// macro-states those containing q, saturating at 2. Strings up to length
/// `2·M + 2` are counted, where M is the number of macro-states; a second
/// string, if any exists, is no longer than that.
pub fn brute_force_string_counts(a: &Automaton) -> Vec<StringCount> {
    let n = a.num_states();
    let Some(q0) = a.initial() else {
        return vec![StringCount::Unreachable; n];
    };
    let sigma = a.alphabet();
    let mut macros: Vec<Set> = vec![vec![q0]];
    let mut index: HashMap<Set, usize> = HashMap::from([(vec![q0], 0)]);
    let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
    let mut head = 0;
    while head < macros.len() {
        let cur = macros[head].clone();
        let row = sigma
            .ids()
            .map(|e| {
                let next = a.step(&cur, &[e]);
                if next.is_empty() {
                    return None;
                }
                Some(*index.entry(next.clone()).or_insert_with(|| {
                    macros.push(next);
                    macros.len() - 1
                }))
            })
            .collect();
        delta.push(row);
        head += 1;
    }
    let m = macros.len();
    let bound = 2 * m + 2;
    // paths[i] = number of strings of the current length reaching macro i (capped)
    let mut totals = vec![0u8; n];
    let mut paths = vec![0u8; m];
    paths[0] = 1;
    for len in 0..=bound {
        for (i, &c) in paths.iter().enumerate() {
            if c > 0 {
                for &q in &macros[i] {
                    totals[q] = (totals[q] + c).min(2);
                }
            }
        }
        if len == bound {
            break;
        }
        let mut next = vec![0u8; m];
        for (i, &c) in paths.iter().enumerate() {
            if c > 0 {
                for d in delta[i].iter().flatten() {
                    next[*d] = (next[*d] + c).min(2);
                }
            }
        }
        paths = next;
    }
    totals
        .into_iter()
        .map(|t| match t {
            0 => StringCount::Unreachable,
            1 => StringCount::ExactlyOne,
            _ => StringCount::TwoOrMore,
        })
        .collect()
}

/// Outcome of [`brute_force_supremal`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteForce {
    /// The union of all valid sets is itself valid.
    Supremal(StatePairSet),
    /// No valid set contains (q0, x0).
    Nonexistent,
    /// Valid sets exist but their union is not valid.
    NotClosed(StatePairSet),
}

/// Z minus the rows of spec states that are not reachable in Rc(Z). Those
/// rows carry no obligations and do not influence Rc(Z).
pub fn trim(r: &Automaton, z: &StatePairSet) -> StatePairSet {
    let reach = r.restrict_in_place(&z.spec_projection()).reachable_mask();
    let drop: Vec<bool> = reach.iter().map(|&b| !b).collect();
    z.without_rows(&drop)
}

/// Default witness-length bound for condition checks: `|Q|·|X|·2`.
pub fn default_bound(r: &Automaton, g: &Automaton) -> usize {
    r.num_states() * g.num_states() * 2
}

/// Largest spec size accepted by [`brute_force_supremal`].
pub const SPEC_ENUMERATION_LIMIT: usize = 16;

/// Exhaustive search for the supremal valid set.
///
/// Every spec-state set S containing q0 and closed under reachability in
/// Rc(S) is visited. Its candidate is the greatest simulation W ⊆ S×X from
/// Rc(S) to G (a smaller Z with the same Q-projection only drops pairs of
/// the same automaton). S is kept when (q0, x0) ∈ W and Rc(S) passes the
/// bounded strong observable condition, plus the bounded controllable
/// condition in [`Mode::ControllableStrongObservable`]. For S ⊆ S', Rc(S) is
/// a subautomaton of Rc(S'), so the answer is W of the union of the kept S
/// when that union is kept itself, and [`BruteForce::NotClosed`] otherwise.
pub fn brute_force_supremal(r: &Automaton, g: &Automaton, mode: Mode) -> Result<BruteForce> {
    brute_force_supremal_with_bound(r, g, mode, default_bound(r, g))
}

pub fn brute_force_supremal_with_bound(
    r: &Automaton,
    g: &Automaton,
    mode: Mode,
    k: usize,
) -> Result<BruteForce> {
    r.check_alphabet(g)?;
    let nq = r.num_states();
    if nq > SPEC_ENUMERATION_LIMIT {
        return Err(Error::GuardExceeded(nq, SPEC_ENUMERATION_LIMIT));
    }
    let (Some(q0), Some(_)) = (r.initial(), g.initial()) else {
        return Ok(BruteForce::Nonexistent);
    };
    let mut kept: Vec<(u64, StatePairSet)> = Vec::new();
    for mask in 0..(1u64 << nq) {
        if mask >> q0 & 1 == 0 {
            continue;
        }
        let rows: Vec<bool> = (0..nq).map(|q| mask >> q & 1 == 1).collect();
        if let Some(w) = candidate(r, g, &rows, mode, k)? {
            kept.push((mask, w));
        }
    }
    let Some(all) = kept.iter().map(|(m, _)| *m).reduce(|a, b| a | b) else {
        return Ok(BruteForce::Nonexistent);
    };
    Ok(match kept.iter().find(|(m, _)| *m == all) {
        Some((_, w)) => BruteForce::Supremal(w.clone()),
        None => {
            let union = kept
                .iter()
                .skip(1)
                .fold(kept[0].1.clone(), |u, (_, v)| u.union(v));
            BruteForce::NotClosed(union)
        }
    })
}

/// The greatest simulation from Rc(rows) to G on rows×X, if `rows` is
/// closed, contains the initial pair and Rc(rows) passes the conditions.
fn candidate(
    r: &Automaton,
    g: &Automaton,
    rows: &[bool],
    mode: Mode,
    k: usize,
) -> Result<Option<StatePairSet>> {
    let (Some(q0), Some(x0)) = (r.initial(), g.initial()) else {
        return Ok(None);
    };
    let rz = r.restrict_in_place(rows);
    if rz.reachable_mask() != rows {
        return Ok(None);
    }
    let w = greatest_simulation_on(&rz, g, rows);
    if !w.contains(q0, x0) {
        return Ok(None);
    }
    let mut ok = bounded_strong_observable_condition(&rz, g, k)?.is_none();
    if ok && mode == Mode::ControllableStrongObservable {
        ok = bounded_controllable_condition(&rz, g, k)?.is_none();
    }
    Ok(ok.then_some(w))
}

fn sim_ok(rz: &Automaton, g: &Automaton, z: &StatePairSet, q: StateId, x: StateId) -> bool {
    (!rz.is_marked(q) || g.is_marked(x))
        && rz.alphabet().ids().all(|e| {
            rz.successors(q, e)
                .iter()
                .all(|&q2| g.successors(x, e).iter().any(|&x2| z.contains(q2, x2)))
        })
}

fn greatest_simulation_on(rz: &Automaton, g: &Automaton, rows: &[bool]) -> StatePairSet {
    let mut w = StatePairSet::from_pairs(
        rz,
        g,
        (0..rz.num_states())
            .filter(|&q| rows[q])
            .flat_map(|q| g.state_ids().map(move |x| (q, x))),
    );
    loop {
        let mut next = w.cleared();
        for (q, x) in w.iter() {
            if sim_ok(rz, g, &w, q, x) {
                next.insert(q, x);
            }
        }
        if next == w {
            return w;
        }
        w = next;
    }
}

/// Literal reading: every Z ⊆ Q×X containing (q0, x0) that is a simulation
/// from Rc(Z) to G and whose Rc(Z) passes the conditions. Only for tests.
#[cfg(test)]
fn literal_valid_sets(r: &Automaton, g: &Automaton, mode: Mode, k: usize) -> Vec<StatePairSet> {
    let n = r.num_states() * g.num_states();
    assert!(n <= 20);
    let (q0, x0) = (r.initial().unwrap(), g.initial().unwrap());
    let base = StatePairSet::empty(r, g);
    let mut out = Vec::new();
    for mask in 0..(1u64 << n) {
        let z = base.from_mask(mask);
        if !z.contains(q0, x0) {
            continue;
        }
        let rz = r.restrict_in_place(&z.spec_projection());
        let reach = rz.reachable_mask();
        if !z
            .iter()
            .filter(|&(q, _)| reach[q])
            .all(|(q, x)| sim_ok(&rz, g, &z, q, x))
        {
            continue;
        }
        let mut ok = bounded_strong_observable_condition(&rz, g, k)
            .unwrap()
            .is_none();
        if ok && mode == Mode::ControllableStrongObservable {
            ok = bounded_controllable_condition(&rz, g, k).unwrap().is_none();
        }
        if ok {
            out.push(z);
        }
    }
    out
}

/// Parameters of [`random_instance`].
#[derive(Debug, Clone, PartialEq)]
pub struct RandomInstanceSpec {
    pub spec_states: (usize, usize),
    pub plant_states: (usize, usize),
    pub events: usize,
    /// Probability that a (state, event) pair has at least one successor.
    pub density: f64,
    /// Probability that a present (state, event) pair has a second successor.
    pub branching: f64,
    pub frac_uncontrollable: f64,
    pub frac_unobservable: f64,
    pub frac_marked: f64,
    /// Build the spec by walking the plant, so that R ≺ G.
    pub substructure: bool,
    pub seed: u64,
}

impl Default for RandomInstanceSpec {
    fn default() -> Self {
        RandomInstanceSpec {
            spec_states: (2, 4),
            plant_states: (2, 4),
            events: 3,
            density: 0.5,
            branching: 0.2,
            frac_uncontrollable: 0.4,
            frac_unobservable: 0.3,
            frac_marked: 0.2,
            substructure: false,
            seed: 0,
        }
    }
}

fn event_name(i: usize) -> String {
    let letters = b"abcdefghijklmnopqrstuvwxyz";
    if i < letters.len() {
        (letters[i] as char).to_string()
    } else {
        format!("e{i}")
    }
}

fn state_names(prefix: char, n: usize) -> Vec<String> {
    let mut v: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    v.sort();
    v
}

fn random_automaton(
    rng: &mut ChaCha8Rng,
    name: &str,
    prefix: char,
    n: usize,
    sigma: &EventAlphabet,
    spec: &RandomInstanceSpec,
) -> Automaton {
    let states = state_names(prefix, n);
    let id = |i: usize| states.binary_search(&format!("{prefix}{i}")).unwrap();
    let mut trans = vec![vec![Vec::new(); sigma.len()]; n];
    for q in 0..n {
        for e in sigma.ids() {
            if rng.gen_bool(spec.density) {
                trans[id(q)][e].push(id(rng.gen_range(0..n)));
                if rng.gen_bool(spec.branching) {
                    trans[id(q)][e].push(id(rng.gen_range(0..n)));
                }
            }
        }
    }
    let marked = (0..n).map(|_| rng.gen_bool(spec.frac_marked)).collect();
    Automaton::from_parts(
        name.to_string(),
        sigma.clone(),
        states.clone(),
        Some(id(0)),
        marked,
        trans,
    )
}

/// A spec that simulates into `g` by construction: each spec state is tagged
/// with a plant state, and every spec edge follows a plant edge.
fn substructure_spec(
    rng: &mut ChaCha8Rng,
    g: &Automaton,
    n: usize,
    spec: &RandomInstanceSpec,
) -> Automaton {
    let sigma = g.alphabet();
    let x0 = g.initial().expect("generated plants have an initial state");
    let mut tag = vec![x0];
    let mut edges: Vec<(usize, EventId, usize)> = Vec::new();
    let mut head = 0;
    while head < tag.len() {
        let x = tag[head];
        for e in sigma.ids() {
            for &x2 in g.successors(x, e) {
                if !rng.gen_bool(spec.density.max(0.5)) {
                    continue;
                }
                let same: Vec<usize> = (0..tag.len()).filter(|&i| tag[i] == x2).collect();
                let target = if tag.len() < n && (same.is_empty() || rng.gen_bool(0.6)) {
                    tag.push(x2);
                    tag.len() - 1
                } else if !same.is_empty() {
                    same[rng.gen_range(0..same.len())]
                } else {
                    continue;
                };
                edges.push((head, e, target));
            }
        }
        head += 1;
    }
    let m = tag.len();
    let states = state_names('q', m);
    let id = |i: usize| states.binary_search(&format!("q{i}")).unwrap();
    let mut trans = vec![vec![Vec::new(); sigma.len()]; m];
    for (s, e, d) in edges {
        trans[id(s)][e].push(id(d));
    }
    let mut marked = vec![false; m];
    for (i, &x) in tag.iter().enumerate() {
        marked[id(i)] = g.is_marked(x) && rng.gen_bool(0.7);
    }
    let q0 = id(0);
    Automaton::from_parts("R".into(), sigma.clone(), states, Some(q0), marked, trans)
}

/// A seeded random `(spec, plant)` pair.
pub fn random_instance(spec: &RandomInstanceSpec) -> (Automaton, Automaton) {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let events: Vec<Event> = (0..spec.events)
        .map(|i| {
            Event::new(
                event_name(i),
                !rng.gen_bool(spec.frac_uncontrollable),
                !rng.gen_bool(spec.frac_unobservable),
            )
        })
        .collect();
    let sigma = EventAlphabet::new(events).expect("generated names are distinct");
    let nq = rng.gen_range(spec.spec_states.0..=spec.spec_states.1);
    let nx = rng.gen_range(spec.plant_states.0..=spec.plant_states.1);
    let g = random_automaton(&mut rng, "G", 'x', nx, &sigma, spec);
    let r = if spec.substructure {
        substructure_spec(&mut rng, &g, nq, spec)
    } else {
        random_automaton(&mut rng, "R", 'q', nq, &sigma, spec)
    };
    (r, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::synthesis::algorithm2;

    #[test]
    fn controllable_condition_examples() {
        let (r, g) = (fixtures::t1_spec(), fixtures::t1_plant());
        let w = bounded_controllable_condition(&r, &g, 3).unwrap().unwrap();
        assert_eq!(r.alphabet().format_word(&w.string), "a");
        assert_eq!(r.state_name(w.state), "q1");
        assert_eq!(r.alphabet().name(w.event), "u");
        let res = algorithm2(&r, &g).unwrap();
        let sub = res.result().unwrap();
        assert!(bounded_controllable_condition(sub, &g, 6)
            .unwrap()
            .is_none());
    }

    #[test]
    fn strong_observable_condition_examples() {
        let (r, g) = (fixtures::t2_spec(), fixtures::t2_plant());
        let w = bounded_strong_observable_condition(&r, &g, 3)
            .unwrap()
            .unwrap();
        let sigma = r.alphabet();
        match w {
            StrongObservableWitness::Pair {
                s1,
                s2,
                state,
                event,
            } => {
                assert_eq!(sigma.format_word(&s1), "d");
                assert_eq!(sigma.format_word(&s2), "g d");
                assert_eq!(r.state_name(state), "q3");
                assert_eq!(sigma.name(event), "r");
            }
            other => panic!("unexpected witness {other:?}"),
        }
        assert!(bounded_observable_condition(&r, &g, 3).unwrap().is_some());
        let (r3, g3) = (fixtures::t3_spec(), fixtures::t3_plant());
        assert!(bounded_strong_observable_condition(&r3, &g3, 4)
            .unwrap()
            .is_none());
    }

    #[test]
    fn brute_force_examples() {
        let (r, g) = (fixtures::t1_spec(), fixtures::t1_plant());
        let BruteForce::Supremal(z) =
            brute_force_supremal(&r, &g, Mode::ControllableStrongObservable).unwrap()
        else {
            panic!("expected a supremal set");
        };
        let mut expected = vec![("q0", "x0"), ("q2", "x2")];
        for x in ["x0", "x1", "x2", "x3", "x4"] {
            expected.push(("q3", x));
        }
        assert_eq!(z, StatePairSet::from_names(&r, &g, expected).unwrap());

        let one = crate::automaton::AutomatonBuilder::new("A")
            .state("s")
            .initial("s")
            .build()
            .unwrap();
        let BruteForce::Supremal(z) =
            brute_force_supremal(&one, &one, Mode::StrongObservable).unwrap()
        else {
            panic!("expected a supremal set");
        };
        assert_eq!(z.len(), 1);
    }

    #[test]
    fn brute_force_guard() {
        let g = fixtures::t1_plant();
        let mut b = crate::automaton::AutomatonBuilder::new("R").alphabet(g.alphabet());
        for i in 0..=SPEC_ENUMERATION_LIMIT {
            b = b.state(&format!("q{i:02}"));
        }
        let r = b.initial("q00").build().unwrap();
        assert!(matches!(
            brute_force_supremal(&r, &g, Mode::StrongObservable),
            Err(Error::GuardExceeded(..))
        ));
    }

    #[test]
    fn candidates_cover_literal_sets() {
        // every literally valid Z, trimmed, lies inside the candidate of its
        // reachable rows, and that candidate is itself literally valid
        for seed in 0..40 {
            let spec = RandomInstanceSpec {
                seed,
                spec_states: (2, 4),
                plant_states: (2, 4),
                ..Default::default()
            };
            let (r, g) = random_instance(&spec);
            if r.num_states() * g.num_states() > 12 {
                continue;
            }
            let k = default_bound(&r, &g);
            for mode in [Mode::StrongObservable, Mode::ControllableStrongObservable] {
                let literal = literal_valid_sets(&r, &g, mode, k);
                for z in &literal {
                    let t = trim(&r, z);
                    let w = candidate(&r, &g, &t.spec_projection(), mode, k).unwrap();
                    let w = w.unwrap_or_else(|| panic!("seed {seed}: no candidate for {z}"));
                    assert!(t.is_subset(&w), "seed {seed}");
                    assert!(literal.contains(&w), "seed {seed}");
                }
            }
        }
    }

    #[test]
    fn generator_is_deterministic() {
        let spec = RandomInstanceSpec {
            seed: 1,
            spec_states: (3, 3),
            plant_states: (3, 3),
            ..Default::default()
        };
        assert_eq!(random_instance(&spec), random_instance(&spec));
        let empty = RandomInstanceSpec {
            density: 0.0,
            ..spec
        };
        let (r, g) = random_instance(&empty);
        assert_eq!(r.num_transitions() + g.num_transitions(), 0);
    }
}
