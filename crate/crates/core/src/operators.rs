//! The controllable operator F_c, the strong observable operator F_so, the
//! calculability tests and the composite maps h2 and h3.

use std::fmt;

use crate::alphabet::{EventAlphabet, EventId, Word};
use crate::automaton::{Automaton, StateId};
use crate::error::Result;
use crate::pairs::StatePairSet;
use crate::products::{
    controllable_product_with, observable_product, so_track_product, unobs_inclusion_check,
    Inclusion, ScNode,
};
use crate::simulation::{f_s_step, SimMode};
use crate::structure::NondetInfo;

/// Why a spec state was taken out of Z. Every variant can be replayed
/// against the automata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    /// `string` reaches `(q, plant)`; the plant may continue with the
    /// uncontrollable `event` (per Γ_n) but the spec may not.
    Uncontrollable {
        plant: StateId,
        event: EventId,
        string: Word,
    },
    /// `s1σ` and `s2σ` are plant strings, `P(s1) = P(s2)`, σ controllable,
    /// and the spec state reached by `s2` disables σ.
    Inconsistent { s1: Word, s2: Word, event: EventId },
    /// An unobservable plant string the restricted spec cannot follow.
    HiddenString { string: Word },
    /// The state lost all its pairs in the simulation step.
    Simulation,
}

impl Reason {
    pub fn render(&self, sigma: &EventAlphabet, plant_states: &[String]) -> String {
        match self {
            Reason::Uncontrollable {
                plant,
                event,
                string,
            } => format!(
                "uncontrollable {} after {} at plant {}",
                sigma.name(*event),
                sigma.format_word(string),
                plant_states[*plant]
            ),
            Reason::Inconsistent { s1, s2, event } => format!(
                "inconsistent {} s1={} s2={}",
                sigma.name(*event),
                sigma.format_word(s1),
                sigma.format_word(s2)
            ),
            Reason::HiddenString { string } => {
                format!("hidden string {} not followed", sigma.format_word(string))
            }
            Reason::Simulation => "simulation".to_string(),
        }
    }
}

/// A removed spec state with its first witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Removal {
    pub state: StateId,
    pub reason: Reason,
}

/// Removed spec states in ascending order, one witness each.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RemovalDiagnostics {
    pub removals: Vec<Removal>,
}

impl RemovalDiagnostics {
    fn add(&mut self, state: StateId, reason: Reason) {
        if !self.contains(state) {
            self.removals.push(Removal { state, reason });
        }
    }

    fn finish(mut self) -> Self {
        self.removals.sort_by_key(|r| r.state);
        self
    }

    pub fn contains(&self, q: StateId) -> bool {
        self.removals.iter().any(|r| r.state == q)
    }

    pub fn states(&self) -> Vec<StateId> {
        self.removals.iter().map(|r| r.state).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.removals.is_empty()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for r in &self.removals {
            m[r.state] = true;
        }
        m
    }
}

/// Evidence that a calculability test fails: spec state `state` in Q_M is
/// paired with plant state `plant`, and `event` exposes the gap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalcWitness {
    pub state: StateId,
    pub plant: StateId,
    pub event: EventId,
    /// A common string reaching the pair, when one is tracked.
    pub string: Option<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Calculability {
    Calculable,
    NotCalculable(CalcWitness),
}

impl Calculability {
    pub fn is_calculable(&self) -> bool {
        matches!(self, Calculability::Calculable)
    }
}

impl fmt::Display for Calculability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Calculability::Calculable => write!(f, "calculable"),
            Calculability::NotCalculable(_) => write!(f, "not calculable"),
        }
    }
}

/// Operator evaluation for a fixed spec and plant. Holds Γ_n of the plant so
/// it is computed once.
#[derive(Debug, Clone)]
pub struct Operators<'a> {
    r: &'a Automaton,
    g: &'a Automaton,
    g_info: NondetInfo,
}

impl<'a> Operators<'a> {
    pub fn new(r: &'a Automaton, g: &'a Automaton) -> Result<Self> {
        r.check_alphabet(g)?;
        Ok(Operators {
            r,
            g,
            g_info: NondetInfo::new(g),
        })
    }

    pub fn spec(&self) -> &Automaton {
        self.r
    }

    pub fn plant(&self) -> &Automaton {
        self.g
    }

    /// Rc(Z) with the spec's state numbering kept.
    fn rz(&self, z: &StatePairSet) -> Result<Automaton> {
        z.check_universe(self.r, self.g)?;
        Ok(self.r.restrict_in_place(&z.spec_projection()))
    }

    /// Q_d(Z) from the violation edges of Rc(Z) ×_sc G.
    pub fn q_d(&self, z: &StatePairSet) -> Result<RemovalDiagnostics> {
        let rz = self.rz(z)?;
        let product = controllable_product_with(&rz, self.g, &self.g_info);
        let mut diag = RemovalDiagnostics::default();
        for (q, x, event) in product.violations() {
            if !diag.contains(q) {
                let node = product
                    .node_index(q, x)
                    .expect("violation source is a node");
                let string = product.witness(node);
                diag.add(
                    q,
                    Reason::Uncontrollable {
                        plant: x,
                        event,
                        string,
                    },
                );
            }
        }
        Ok(diag.finish())
    }

    /// F_c(Z) = Z \ (Q_d(Z) × X).
    pub fn f_c(&self, z: &StatePairSet) -> Result<StatePairSet> {
        let d = self.q_d(z)?;
        Ok(z.without_rows(&d.mask(self.r.num_states())))
    }

    /// Q_d'(Z): the ε-clause and the two-track clause.
    pub fn q_d_prime(&self, z: &StatePairSet) -> Result<RemovalDiagnostics> {
        let rz = self.rz(z)?;
        let mut diag = RemovalDiagnostics::default();
        let Some(q0) = rz.initial() else {
            return Ok(diag);
        };
        if let Inclusion::Counterexample(string) = unobs_inclusion_check(self.g, &rz)? {
            diag.add(q0, Reason::HiddenString { string });
        }
        let sigma = self.r.alphabet();
        let controllable: Vec<EventId> = sigma.controllable().collect();
        let track = so_track_product(&rz, self.g)?;
        for (i, t) in track.states.iter().enumerate() {
            if !t.s1_nonempty || diag.contains(t.q2) {
                continue;
            }
            let bad = controllable.iter().copied().find(|&e| {
                self.g.has_event(t.x1, e) && self.g.has_event(t.x2, e) && !rz.has_event(t.q2, e)
            });
            if let Some(event) = bad {
                let (s1, s2) = track.witness(i);
                diag.add(t.q2, Reason::Inconsistent { s1, s2, event });
            }
        }
        Ok(diag.finish())
    }

    /// F_so(Z) = Z \ (Q_d'(Z) × X).
    pub fn f_so(&self, z: &StatePairSet) -> Result<StatePairSet> {
        let d = self.q_d_prime(z)?;
        Ok(z.without_rows(&d.mask(self.r.num_states())))
    }

    pub fn f_s(&self, z: &StatePairSet, mode: SimMode) -> Result<StatePairSet> {
        f_s_step(self.r, self.g, z, mode)
    }

    /// h2(Z) = F_s(Z) ∩ F_so(Z), F_s in restricted mode.
    pub fn h2(&self, z: &StatePairSet) -> Result<StatePairSet> {
        Ok(self.h2_explained(z)?.0)
    }

    /// h3(Z) = F_s(Z) ∩ F_c(Z) ∩ F_so(Z), F_s in restricted mode.
    pub fn h3(&self, z: &StatePairSet) -> Result<StatePairSet> {
        Ok(self.h3_explained(z)?.0)
    }

    pub(crate) fn h2_explained(
        &self,
        z: &StatePairSet,
    ) -> Result<(StatePairSet, RemovalDiagnostics)> {
        let sim = self.f_s(z, SimMode::Restricted)?;
        let so = self.q_d_prime(z)?;
        let next = sim.without_rows(&so.mask(self.r.num_states()));
        Ok((next, so))
    }

    pub(crate) fn h3_explained(
        &self,
        z: &StatePairSet,
    ) -> Result<(StatePairSet, RemovalDiagnostics)> {
        let sim = self.f_s(z, SimMode::Restricted)?;
        let mut diag = self.q_d(z)?;
        for r in self.q_d_prime(z)?.removals {
            diag.add(r.state, r.reason);
        }
        let diag = diag.finish();
        let next = sim.without_rows(&diag.mask(self.r.num_states()));
        Ok((next, diag))
    }

    /// Calculability for the controllable operator: no state of Q_M meets
    /// an uncontrollable plant continuation it cannot follow.
    pub fn is_calculable_controllable(&self) -> Calculability {
        let (r, g) = (self.r, self.g);
        let counts = r.string_count_class();
        let sigma = r.alphabet();
        // the product only explores pairs reachable from (q0, x0)
        let product = controllable_product_with(r, g, &self.g_info);
        for (i, node) in product.nodes.iter().enumerate() {
            let ScNode::Pair(q, x) = *node else {
                continue;
            };
            if !counts.in_q_m(q) {
                continue;
            }
            if let Some(event) = sigma
                .uncontrollable()
                .find(|&e| g.has_event(x, e) && !r.has_event(q, e))
            {
                return Calculability::NotCalculable(CalcWitness {
                    state: q,
                    plant: x,
                    event,
                    string: Some(product.witness(i)),
                });
            }
        }
        Calculability::Calculable
    }

    /// Calculability for the strong observable operator, over the reachable
    /// pairs of R ×_so G.
    pub fn is_calculable_strong_observable(&self) -> Result<Calculability> {
        let (r, g) = (self.r, self.g);
        let counts = r.string_count_class();
        let sigma = r.alphabet();
        let product = observable_product(r, g)?;
        for &(q, x) in &product.nodes {
            if !counts.in_q_m(q) {
                continue;
            }
            if let Some(event) = sigma
                .controllable()
                .find(|&e| g.has_event(x, e) && !r.has_event(q, e))
            {
                return Ok(Calculability::NotCalculable(CalcWitness {
                    state: q,
                    plant: x,
                    event,
                    string: None,
                }));
            }
        }
        Ok(Calculability::Calculable)
    }
}

pub fn q_d(r: &Automaton, g: &Automaton, z: &StatePairSet) -> Result<RemovalDiagnostics> {
    Operators::new(r, g)?.q_d(z)
}

pub fn f_c(r: &Automaton, g: &Automaton, z: &StatePairSet) -> Result<StatePairSet> {
    Operators::new(r, g)?.f_c(z)
}

pub fn q_d_prime(r: &Automaton, g: &Automaton, z: &StatePairSet) -> Result<RemovalDiagnostics> {
    Operators::new(r, g)?.q_d_prime(z)
}

pub fn f_so(r: &Automaton, g: &Automaton, z: &StatePairSet) -> Result<StatePairSet> {
    Operators::new(r, g)?.f_so(z)
}

pub fn h2(r: &Automaton, g: &Automaton, z: &StatePairSet) -> Result<StatePairSet> {
    Operators::new(r, g)?.h2(z)
}

pub fn h3(r: &Automaton, g: &Automaton, z: &StatePairSet) -> Result<StatePairSet> {
    Operators::new(r, g)?.h3(z)
}

pub fn is_calculable_controllable(r: &Automaton, g: &Automaton) -> Result<Calculability> {
    Ok(Operators::new(r, g)?.is_calculable_controllable())
}

pub fn is_calculable_strong_observable(r: &Automaton, g: &Automaton) -> Result<Calculability> {
    Operators::new(r, g)?.is_calculable_strong_observable()
}
