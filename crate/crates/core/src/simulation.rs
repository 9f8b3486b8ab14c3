//! The simulation operator F_s, greatest simulations and bisimilarity.

use crate::automaton::{Automaton, StateId};
use crate::error::Result;
use crate::pairs::StatePairSet;

/// Which transitions of the spec generate matching obligations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMode {
    /// Every transition of R.
    Full,
    /// Only transitions between spec states present in the Q-projection of Z.
    Restricted,
}

/// True if every `q`-move allowed by `rows` is matched from `x` inside `z`.
fn matches_all(
    r: &Automaton,
    g: &Automaton,
    z: &StatePairSet,
    rows: Option<&[bool]>,
    q: StateId,
    x: StateId,
) -> bool {
    if r.is_marked(q) && !g.is_marked(x) {
        return false;
    }
    r.alphabet().ids().all(|e| {
        r.successors(q, e)
            .iter()
            .filter(|&&q2| rows.is_none_or(|rows| rows[q2]))
            .all(|&q2| g.successors(x, e).iter().any(|&x2| z.contains(q2, x2)))
    })
}

/// One application of F_s. The result is always a subset of `z`.
pub fn f_s_step(
    r: &Automaton,
    g: &Automaton,
    z: &StatePairSet,
    mode: SimMode,
) -> Result<StatePairSet> {
    r.check_alphabet(g)?;
    z.check_universe(r, g)?;
    let rows = match mode {
        SimMode::Full => None,
        SimMode::Restricted => Some(z.spec_projection()),
    };
    let mut out = z.cleared();
    for (q, x) in z.iter() {
        if matches_all(r, g, z, rows.as_deref(), q, x) {
            out.insert(q, x);
        }
    }
    Ok(out)
}

/// Iterates `f` from `start` until the set stops changing. Returns the
/// fixpoint and the number of applications performed, including the
/// confirming one.
pub(crate) fn iterate_to_fixpoint(
    start: StatePairSet,
    mut f: impl FnMut(&StatePairSet) -> Result<StatePairSet>,
) -> Result<(StatePairSet, usize)> {
    let mut cur = start;
    let mut steps = 0;
    loop {
        let next = f(&cur)?;
        steps += 1;
        if next == cur {
            return Ok((cur, steps));
        }
        cur = next;
    }
}

/// A relation φ ⊆ Q×X witnessing that the left automaton is simulated by
/// the right one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationRelation {
    pub pairs: StatePairSet,
}

impl SimulationRelation {
    /// Checks the defining conditions directly: marking, matching of every
    /// left move, and the initial pair.
    pub fn is_valid_for(&self, r: &Automaton, g: &Automaton) -> bool {
        let (Some(q0), Some(x0)) = (r.initial(), g.initial()) else {
            return false;
        };
        self.pairs.contains(q0, x0)
            && self
                .pairs
                .iter()
                .all(|(q, x)| matches_all(r, g, &self.pairs, None, q, x))
    }
}

/// The largest simulation of `r` by `g`, if it relates the initial states.
pub fn greatest_simulation(r: &Automaton, g: &Automaton) -> Result<Option<SimulationRelation>> {
    r.check_alphabet(g)?;
    let full = StatePairSet::full(r, g);
    let (z, _) = iterate_to_fixpoint(full, |z| f_s_step(r, g, z, SimMode::Full))?;
    Ok(match (r.initial(), g.initial()) {
        (Some(q0), Some(x0)) if z.contains(q0, x0) => Some(SimulationRelation { pairs: z }),
        _ => None,
    })
}

/// R ≺ G.
pub fn is_simulated_by(r: &Automaton, g: &Automaton) -> Result<bool> {
    Ok(greatest_simulation(r, g)?.is_some())
}

/// Largest bisimulation between `a` and `b` (two-way matching, equal marking).
pub fn greatest_bisimulation(a: &Automaton, b: &Automaton) -> Result<StatePairSet> {
    a.check_alphabet(b)?;
    let start = StatePairSet::full(a, b);
    let (z, _) = iterate_to_fixpoint(start, |z| {
        let mut out = z.cleared();
        for (p, q) in z.iter() {
            if a.is_marked(p) != b.is_marked(q) {
                continue;
            }
            let ok = a.alphabet().ids().all(|e| {
                a.successors(p, e)
                    .iter()
                    .all(|&p2| b.successors(q, e).iter().any(|&q2| z.contains(p2, q2)))
                    && b.successors(q, e)
                        .iter()
                        .all(|&q2| a.successors(p, e).iter().any(|&p2| z.contains(p2, q2)))
            });
            if ok {
                out.insert(p, q);
            }
        }
        Ok(out)
    })?;
    Ok(z)
}

pub fn is_bisimilar(a: &Automaton, b: &Automaton) -> Result<bool> {
    let z = greatest_bisimulation(a, b)?;
    Ok(match (a.initial(), b.initial()) {
        (Some(p0), Some(q0)) => z.contains(p0, q0),
        (None, None) => true,
        _ => false,
    })
}
