//! The small reference instances shipped in `fixtures/`.
//!
//! * T1: all events observable, `u` uncontrollable; the spec forgets `u`
//!   after `a`.
//! * T2 / T3: `g` is uncontrollable and unobservable; T3's spec mirrors the
//!   plant, T2's spec refuses `r` after `g d`.
//! * MFG: the manufacturing example with two production lines.

use crate::automaton::Automaton;
use crate::io::parse_aut;

macro_rules! fixture {
    ($fn:ident, $file:literal) => {
        pub fn $fn() -> Automaton {
            parse_aut(include_str!(concat!("../fixtures/", $file)))
                .expect(concat!("fixture ", $file, " parses"))
        }
    };
}

fixture!(t1_plant, "t1_plant.aut");
fixture!(t1_spec, "t1_spec.aut");
fixture!(t2_plant, "t2_plant.aut");
fixture!(t2_spec, "t2_spec.aut");
fixture!(t3_plant, "t3_plant.aut");
fixture!(t3_spec, "t3_spec.aut");
fixture!(mfg_plant, "mfg_plant.aut");
fixture!(mfg_spec, "mfg_spec.aut");

/// Every fixture automaton.
pub fn all() -> Vec<Automaton> {
    vec![
        t1_plant(),
        t1_spec(),
        t2_plant(),
        t2_spec(),
        t3_plant(),
        t3_spec(),
        mfg_plant(),
        mfg_spec(),
    ]
}
