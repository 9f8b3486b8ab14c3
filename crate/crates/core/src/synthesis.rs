//! Fixpoint drivers for the strong observable (h2) and controllable and
//! strong observable (h3) synthesis problems, plus result verification.

use std::fmt;

use crate::automaton::Automaton;
use crate::error::Result;
use crate::operators::{Calculability, Operators, Reason, Removal};
use crate::oracle;
use crate::pairs::StatePairSet;
use crate::simulation::greatest_simulation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Strong observable subautomaton, iterating h2.
    StrongObservable,
    /// Controllable and strong observable subautomaton, iterating h3.
    ControllableStrongObservable,
}

impl Mode {
    pub fn short_name(self) -> &'static str {
        match self {
            Mode::StrongObservable => "so",
            Mode::ControllableStrongObservable => "cso",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::StrongObservable => write!(f, "strong-observable"),
            Mode::ControllableStrongObservable => write!(f, "controllable-strong-observable"),
        }
    }
}

/// One application of h2 or h3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Iteration {
    /// 1-based.
    pub index: usize,
    /// The iterate after this step.
    pub pairs: StatePairSet,
    /// Spec states present before the step and absent after it, each with
    /// the operator witness when one exists.
    pub removed: Vec<Removal>,
}

impl Iteration {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nonexistence {
    NotCalculable(Calculability),
    InitialPairRemoved,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Result {
        pairs: StatePairSet,
        automaton: Automaton,
    },
    Nonexistent(Nonexistence),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisTrace {
    pub mode: Mode,
    /// Only evaluated in controllable mode.
    pub controllable_calculability: Option<Calculability>,
    pub observable_calculability: Calculability,
    pub iterations: Vec<Iteration>,
    pub outcome: Outcome,
}

impl SynthesisTrace {
    pub fn result(&self) -> Option<&Automaton> {
        match &self.outcome {
            Outcome::Result { automaton, .. } => Some(automaton),
            Outcome::Nonexistent(_) => None,
        }
    }

    /// The final iterate (Q×X when no iteration ran).
    pub fn final_pairs(&self) -> Option<&StatePairSet> {
        self.iterations.last().map(|i| &i.pairs)
    }

    pub fn is_calculable(&self) -> bool {
        self.observable_calculability.is_calculable()
            && self
                .controllable_calculability
                .as_ref()
                .is_none_or(Calculability::is_calculable)
    }
}

/// Runs the fixpoint iteration from Q×X with h2 or h3, skipping the
/// calculability gate. Exposed for diagnostics and tests.
pub fn iterate(r: &Automaton, g: &Automaton, mode: Mode) -> Result<Vec<Iteration>> {
    let ops = Operators::new(r, g)?;
    let mut cur = StatePairSet::full(r, g);
    let mut iterations = Vec::new();
    loop {
        let (next, diag) = match mode {
            Mode::StrongObservable => ops.h2_explained(&cur)?,
            Mode::ControllableStrongObservable => ops.h3_explained(&cur)?,
        };
        let before = cur.spec_projection();
        let after = next.spec_projection();
        let removed = (0..r.num_states())
            .filter(|&q| before[q] && !after[q])
            .map(|q| {
                diag.removals
                    .iter()
                    .find(|d| d.state == q)
                    .cloned()
                    .unwrap_or(Removal {
                        state: q,
                        reason: Reason::Simulation,
                    })
            })
            .collect();
        let done = next == cur;
        iterations.push(Iteration {
            index: iterations.len() + 1,
            pairs: next.clone(),
            removed,
        });
        if done {
            return Ok(iterations);
        }
        cur = next;
    }
}

fn run(r: &Automaton, g: &Automaton, mode: Mode) -> Result<SynthesisTrace> {
    let ops = Operators::new(r, g)?;
    let observable_calculability = ops.is_calculable_strong_observable()?;
    let controllable_calculability = match mode {
        Mode::StrongObservable => None,
        Mode::ControllableStrongObservable => Some(ops.is_calculable_controllable()),
    };
    let mut trace = SynthesisTrace {
        mode,
        controllable_calculability,
        observable_calculability,
        iterations: Vec::new(),
        outcome: Outcome::Nonexistent(Nonexistence::InitialPairRemoved),
    };
    let gate = [
        trace.controllable_calculability.clone(),
        Some(trace.observable_calculability.clone()),
    ];
    if let Some(failed) = gate.into_iter().flatten().find(|c| !c.is_calculable()) {
        trace.outcome = Outcome::Nonexistent(Nonexistence::NotCalculable(failed));
        return Ok(trace);
    }
    trace.iterations = iterate(r, g, mode)?;
    let y = trace.final_pairs().expect("at least one iteration").clone();
    let kept = match (r.initial(), g.initial()) {
        (Some(q0), Some(x0)) => y.contains(q0, x0),
        _ => false,
    };
    if kept {
        trace.outcome = Outcome::Result {
            automaton: r.restrict(&y)?,
            pairs: y,
        };
    }
    Ok(trace)
}

/// Supremal simulation-based strong observable subautomaton of `r`.
pub fn algorithm1(r: &Automaton, g: &Automaton) -> Result<SynthesisTrace> {
    run(r, g, Mode::StrongObservable)
}

/// Supremal simulation-based controllable and strong observable
/// subautomaton of `r`.
pub fn algorithm2(r: &Automaton, g: &Automaton) -> Result<SynthesisTrace> {
    run(r, g, Mode::ControllableStrongObservable)
}

pub fn synthesize(r: &Automaton, g: &Automaton, mode: Mode) -> Result<SynthesisTrace> {
    run(r, g, mode)
}

/// Outcome of one verification check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub bound: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let verdict = if c.passed { "pass" } else { "FAIL" };
            write!(f, "{}: {verdict}", c.name)?;
            if !c.detail.is_empty() {
                write!(f, " ({})", c.detail)?;
            }
            writeln!(f)?;
        }
        let outcome = if self.passed() {
            "valid result"
        } else {
            "not a valid result"
        };
        writeln!(f, "outcome: {outcome}")
    }
}

/// Bound used by [`verify_result`] for its language-level checks.
pub fn default_verify_bound(sub: &Automaton, g: &Automaton) -> usize {
    (sub.num_states() + 1) * (g.num_states() + 1)
}

/// Checks a candidate subautomaton against the plant and the original spec.
pub fn verify_result(
    r: &Automaton,
    g: &Automaton,
    sub: &Automaton,
    bound: Option<usize>,
) -> Result<VerificationReport> {
    r.check_alphabet(g)?;
    sub.check_alphabet(g)?;
    let bound = bound.unwrap_or_else(|| default_verify_bound(sub, g));
    let mut checks = Vec::new();
    let sigma = g.alphabet();

    let sim = greatest_simulation(sub, g)?;
    checks.push(Check {
        name: "simulated-by-plant",
        passed: sim.is_some(),
        detail: String::new(),
    });

    let ops = Operators::new(sub, g)?;
    let full = StatePairSet::full(sub, g);
    let qd = ops.q_d(&full)?;
    checks.push(Check {
        name: "controllable",
        passed: qd.is_empty(),
        detail: describe(sub, g, &qd.removals),
    });
    let qdp = ops.q_d_prime(&full)?;
    checks.push(Check {
        name: "strong-observable",
        passed: qdp.is_empty(),
        detail: describe(sub, g, &qdp.removals),
    });

    let subset = sub.state_names().iter().all(|s| r.state_id(s).is_some());
    let below_spec = subset && greatest_simulation(sub, r)?.is_some();
    checks.push(Check {
        name: "simulated-by-spec",
        passed: below_spec,
        detail: if subset {
            String::new()
        } else {
            "candidate has states outside the spec".to_string()
        },
    });

    let lc = oracle::bounded_language_controllable(sub, g, bound)?;
    checks.push(Check {
        name: "language-controllable",
        passed: lc.is_none(),
        detail: lc
            .map(|(s, e)| format!("{} then {}", sigma.format_word(&s), sigma.name(e)))
            .unwrap_or_default(),
    });
    let lo = oracle::bounded_language_observable(sub, g, bound)?;
    checks.push(Check {
        name: "language-observable",
        passed: lo.is_none(),
        detail: lo
            .map(|(s1, s2, e)| {
                format!(
                    "s={} s'={} event {}",
                    sigma.format_word(&s1),
                    sigma.format_word(&s2),
                    sigma.name(e)
                )
            })
            .unwrap_or_default(),
    });
    Ok(VerificationReport { checks, bound })
}

fn describe(sub: &Automaton, g: &Automaton, removals: &[Removal]) -> String {
    removals
        .iter()
        .map(|r| {
            format!(
                "{}: {}",
                sub.state_name(r.state),
                r.reason.render(g.alphabet(), g.state_names())
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Names of the spec states of `pairs`, in canonical order.
pub fn spec_state_names(pairs: &StatePairSet) -> Vec<String> {
    pairs.spec_projection_names()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn removed_names(r: &Automaton, removed: &[Removal]) -> Vec<String> {
        removed
            .iter()
            .map(|x| r.state_name(x.state).to_string())
            .collect()
    }

    #[test]
    fn t1_algorithm2() {
        let (r, g) = (fixtures::t1_spec(), fixtures::t1_plant());
        let trace = algorithm2(&r, &g).unwrap();
        assert_eq!(trace.iterations.len(), 2);
        let res = trace.result().unwrap();
        assert_eq!(res.state_names(), ["q0", "q2", "q3"]);
        assert_eq!(res.num_transitions(), 2);
        assert_eq!(removed_names(&r, &trace.iterations[0].removed), ["q1"]);
        let report = verify_result(&r, &g, res, None).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn t1_full_spec_fails_controllability() {
        let (r, g) = (fixtures::t1_spec(), fixtures::t1_plant());
        let report = verify_result(&r, &g, &r, None).unwrap();
        let c = report.check("controllable").unwrap();
        assert!(!c.passed);
        assert!(c.detail.starts_with("q1: uncontrollable u"), "{}", c.detail);
        assert!(!report.passed());
    }

    #[test]
    fn empty_candidate_is_not_valid() {
        let (r, g) = (fixtures::t1_spec(), fixtures::t1_plant());
        let e = Automaton::empty("E", g.alphabet().clone());
        let report = verify_result(&r, &g, &e, None).unwrap();
        assert!(!report.check("simulated-by-plant").unwrap().passed);
        assert!(report.check("controllable").unwrap().passed);
        assert!(report.check("strong-observable").unwrap().passed);
        assert!(report.to_string().contains("not a valid result"));
    }

    #[test]
    fn t2_algorithm1_is_nonexistent() {
        let (r, g) = (fixtures::t2_spec(), fixtures::t2_plant());
        let trace = algorithm1(&r, &g).unwrap();
        assert!(trace.result().is_none());
        let removed: Vec<Vec<String>> = trace
            .iterations
            .iter()
            .map(|i| removed_names(&r, &i.removed))
            .collect();
        assert_eq!(removed[0], ["q3"]);
        assert_eq!(removed[1], ["q2"]);
        assert_eq!(removed[2], ["q0"]);
        assert!(matches!(
            trace.iterations[2].removed[0].reason,
            Reason::HiddenString { .. }
        ));
        assert!(matches!(
            trace.outcome,
            Outcome::Nonexistent(Nonexistence::InitialPairRemoved)
        ));
    }

    #[test]
    fn t3_algorithm1_keeps_everything() {
        let (r, g) = (fixtures::t3_spec(), fixtures::t3_plant());
        let trace = algorithm1(&r, &g).unwrap();
        let res = trace.result().unwrap();
        assert_eq!(res, &r.accessible());
        assert!(trace.iterations.iter().all(|i| i.removed.is_empty()));
    }
}
