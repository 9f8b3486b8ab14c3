//! Synthesis of supremal simulation-based controllable and strong
//! observable subautomata for nondeterministic plants under partial
//! observation.
//!
//! A plant `G` and a specification `R` share an [`EventAlphabet`] whose
//! events are flagged controllable/uncontrollable and
//! observable/unobservable. The synthesis iterates monotone-style operators
//! on subsets of `Q×X` ([`StatePairSet`]) from `Q×X` down to a fixpoint and
//! reads the resulting subautomaton of `R` off the surviving spec states.
//!
//! ```
//! use simsynth::{fixtures, synthesis};
//!
//! let (spec, plant) = (fixtures::t1_spec(), fixtures::t1_plant());
//! let trace = synthesis::algorithm2(&spec, &plant).unwrap();
//! let result = trace.result().unwrap();
//! assert_eq!(result.state_names(), ["q0", "q2", "q3"]);
//! ```

pub mod alphabet;
pub mod automaton;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod operators;
pub mod oracle;
pub mod pairs;
pub mod products;
pub mod simulation;
pub mod structure;
pub mod synthesis;

pub use alphabet::{Event, EventAlphabet, EventId, Word};
pub use automaton::{Automaton, AutomatonBuilder, StateId, ValidationReport, Violation};
pub use error::{Error, Result};
pub use pairs::StatePairSet;
pub use synthesis::{algorithm1, algorithm2, verify_result, Mode, SynthesisTrace};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/automata.md")]
    mod automata {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/synthesis.md")]
    mod synthesis {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
