//! Text formats: the `.aut` automaton format, Graphviz DOT export and the
//! `key=value` synthesis trace.
//!
//! ```text
//! # comment
//! automaton G
//! event a c o
//! event g uc uo
//! state x0
//! state x1 marked
//! initial x0
//! trans x0 a x1
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::alphabet::Event;
use crate::automaton::{Automaton, AutomatonBuilder};
use crate::error::{Error, Result};
use crate::operators::{Calculability, Removal};
use crate::products::{ControllableProduct, ObservableProduct, ScNode};
use crate::synthesis::{Nonexistence, Outcome, SynthesisTrace};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses one automaton in `.aut` format.
pub fn parse_aut(text: &str) -> Result<Automaton> {
    let mut name: Option<String> = None;
    let mut events: HashMap<String, usize> = HashMap::new();
    let mut b = AutomatonBuilder::default();
    let mut states: HashSet<String> = HashSet::new();
    let mut initial: Option<(String, usize)> = None;
    let mut trans_lines: Vec<usize> = Vec::new();
    let mut seen_trans: HashSet<(String, String, String)> = HashSet::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&directive, args)) = tokens.split_first() else {
            continue;
        };
        match (directive, args) {
            ("automaton", [n]) => {
                if name.is_some() {
                    return Err(parse_err(line, "duplicate automaton declaration"));
                }
                name = Some(n.to_string());
            }
            ("event", [n, c, o]) => {
                let controllable = match *c {
                    "c" => true,
                    "uc" => false,
                    other => {
                        return Err(parse_err(line, format!("expected c or uc, found {other}")))
                    }
                };
                let observable = match *o {
                    "o" => true,
                    "uo" => false,
                    other => {
                        return Err(parse_err(line, format!("expected o or uo, found {other}")))
                    }
                };
                if events.insert(n.to_string(), line).is_some() {
                    return Err(parse_err(line, format!("duplicate event {n}")));
                }
                b.events.push(Event::new(*n, controllable, observable));
            }
            ("state", [n, rest @ ..]) if rest.len() <= 1 => {
                let marked = match rest {
                    [] => false,
                    ["marked"] => true,
                    [other] => {
                        return Err(parse_err(line, format!("expected marked, found {other}")))
                    }
                    _ => unreachable!(),
                };
                if !states.insert(n.to_string()) {
                    return Err(parse_err(line, format!("duplicate state {n}")));
                }
                b.states.push((n.to_string(), marked));
            }
            ("initial", [n]) => {
                if initial.is_some() {
                    return Err(parse_err(line, "multiple initial states"));
                }
                initial = Some((n.to_string(), line));
            }
            ("trans", [src, ev, dst]) => {
                if !events.contains_key(*ev) {
                    return Err(parse_err(line, format!("unknown event {ev}")));
                }
                let t = (src.to_string(), ev.to_string(), dst.to_string());
                if !seen_trans.insert(t.clone()) {
                    return Err(parse_err(
                        line,
                        format!("duplicate transition {src} {ev} {dst}"),
                    ));
                }
                b.transitions.push(t);
                trans_lines.push(line);
            }
            ("automaton", _) => return Err(parse_err(line, "expected `automaton <name>`")),
            ("event", _) => return Err(parse_err(line, "expected `event <name> <c|uc> <o|uo>`")),
            ("state", _) => return Err(parse_err(line, "expected `state <name> [marked]`")),
            ("initial", _) => return Err(parse_err(line, "expected `initial <name>`")),
            ("trans", _) => return Err(parse_err(line, "expected `trans <src> <event> <dst>`")),
            (other, _) => return Err(parse_err(line, format!("unknown directive {other}"))),
        }
    }

    let name = name.ok_or_else(|| parse_err(1, "missing automaton declaration"))?;
    let (init, init_line) =
        initial.ok_or_else(|| parse_err(last_line.max(1), "missing initial state"))?;
    if !states.contains(&init) {
        return Err(parse_err(init_line, format!("unknown state {init}")));
    }
    for ((src, _, dst), &line) in b.transitions.iter().zip(&trans_lines) {
        for s in [src, dst] {
            if !states.contains(s) {
                return Err(parse_err(line, format!("unknown state {s}")));
            }
        }
    }
    b.name = name;
    b.initial = vec![init];
    b.build()
}

/// Canonical `.aut` text; `parse_aut(&write_aut(a)) == a`.
pub fn write_aut(a: &Automaton) -> String {
    let mut out = String::new();
    writeln!(out, "automaton {}", a.name()).unwrap();
    for e in a.alphabet().events() {
        writeln!(out, "event {e}").unwrap();
    }
    for q in a.state_ids() {
        if a.is_marked(q) {
            writeln!(out, "state {} marked", a.state_name(q)).unwrap();
        } else {
            writeln!(out, "state {}", a.state_name(q)).unwrap();
        }
    }
    if let Some(q0) = a.initial() {
        writeln!(out, "initial {}", a.state_name(q0)).unwrap();
    }
    for (q, e, d) in a.transitions() {
        writeln!(
            out,
            "trans {} {} {}",
            a.state_name(q),
            a.alphabet().name(e),
            a.state_name(d)
        )
        .unwrap();
    }
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn dot_header(out: &mut String, name: &str) {
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
}

fn dot_initial(out: &mut String, node: &str) {
    writeln!(out, "  __start [shape=point];").unwrap();
    writeln!(out, "  __start -> {};", quote(node)).unwrap();
}

/// DOT rendering of an automaton.
pub fn automaton_dot(a: &Automaton) -> String {
    let mut out = String::new();
    dot_header(&mut out, a.name());
    for q in a.state_ids() {
        let shape = if a.is_marked(q) {
            " [shape=doublecircle]"
        } else {
            ""
        };
        writeln!(out, "  {}{shape};", quote(a.state_name(q))).unwrap();
    }
    if let Some(q0) = a.initial() {
        dot_initial(&mut out, a.state_name(q0));
    }
    for (q, e, d) in a.transitions() {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(a.state_name(q)),
            quote(a.state_name(d)),
            quote(a.alphabet().name(e))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Label of the reserved violation pair.
pub const VIOLATION_LABEL: &str = "(q_v,x_v)";

fn sc_label(p: &ControllableProduct, n: ScNode) -> String {
    match n {
        ScNode::Pair(q, x) => format!("({},{})", p.spec_states[q], p.plant_states[x]),
        ScNode::Violation => VIOLATION_LABEL.to_string(),
    }
}

/// DOT rendering of a controllable product; the violation node is shaded.
pub fn controllable_product_dot(p: &ControllableProduct) -> String {
    let mut out = String::new();
    dot_header(&mut out, "controllable_product");
    for (i, &n) in p.nodes.iter().enumerate() {
        let attrs = match n {
            ScNode::Violation => " [style=filled, fillcolor=gray]",
            ScNode::Pair(..) => "",
        };
        writeln!(out, "  n{i} [label={}]{attrs};", quote(&sc_label(p, n))).unwrap();
    }
    if !p.nodes.is_empty() {
        writeln!(out, "  __start [shape=point];").unwrap();
        writeln!(out, "  __start -> n0;").unwrap();
    }
    for &(s, e, d) in &p.edges {
        writeln!(out, "  n{s} -> n{d} [label={}];", quote(p.alphabet.name(e))).unwrap();
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of an observable product; edges carry `(σ1,σ2)` with `~`
/// for ε.
pub fn observable_product_dot(p: &ObservableProduct) -> String {
    let mut out = String::new();
    dot_header(&mut out, "observable_product");
    for (i, &(q, x)) in p.nodes.iter().enumerate() {
        let label = format!("({},{})", p.spec_states[q], p.plant_states[x]);
        writeln!(out, "  n{i} [label={}];", quote(&label)).unwrap();
    }
    if !p.nodes.is_empty() {
        writeln!(out, "  __start [shape=point];").unwrap();
        writeln!(out, "  __start -> n0;").unwrap();
    }
    let name = |e: Option<usize>| e.map_or("~", |e| p.alphabet.name(e));
    for &(s, (e1, e2), d) in &p.edges {
        let label = format!("({},{})", name(e1), name(e2));
        writeln!(out, "  n{s} -> n{d} [label={}];", quote(&label)).unwrap();
    }
    out.push_str("}\n");
    out
}

fn calc_line(c: &Calculability, r: &Automaton, g: &Automaton) -> String {
    match c {
        Calculability::Calculable => "yes".to_string(),
        Calculability::NotCalculable(w) => format!(
            "no state={} plant={} event={}",
            r.state_name(w.state),
            g.state_name(w.plant),
            r.alphabet().name(w.event)
        ),
    }
}

fn removal_text(r: &Automaton, g: &Automaton, removed: &[Removal]) -> (String, String) {
    let names: Vec<&str> = removed.iter().map(|x| r.state_name(x.state)).collect();
    let reasons: Vec<String> = removed
        .iter()
        .map(|x| {
            format!(
                "{}:{}",
                r.state_name(x.state),
                x.reason.render(g.alphabet(), g.state_names())
            )
        })
        .collect();
    (names.join(","), reasons.join(";"))
}

/// Line-oriented `key=value` rendering of a synthesis run. Each iteration
/// contributes the keys `iter`, `size`, `removed` and `reason`.
pub fn write_trace(trace: &SynthesisTrace, r: &Automaton, g: &Automaton) -> String {
    let mut out = String::new();
    writeln!(out, "mode={}", trace.mode.short_name()).unwrap();
    if let Some(c) = &trace.controllable_calculability {
        writeln!(out, "calculable_controllable={}", calc_line(c, r, g)).unwrap();
    }
    writeln!(
        out,
        "calculable_strong_observable={}",
        calc_line(&trace.observable_calculability, r, g)
    )
    .unwrap();
    for it in &trace.iterations {
        let (removed, reason) = removal_text(r, g, &it.removed);
        writeln!(out, "iter={}", it.index).unwrap();
        writeln!(out, "size={}", it.size()).unwrap();
        writeln!(out, "removed={removed}").unwrap();
        writeln!(out, "reason={reason}").unwrap();
    }
    match &trace.outcome {
        Outcome::Result { automaton, .. } => {
            writeln!(out, "outcome=result").unwrap();
            writeln!(out, "states={}", automaton.state_names().join(",")).unwrap();
        }
        Outcome::Nonexistent(Nonexistence::NotCalculable(_)) => {
            writeln!(out, "outcome=nonexistent").unwrap();
            writeln!(out, "cause=not calculable").unwrap();
        }
        Outcome::Nonexistent(Nonexistence::InitialPairRemoved) => {
            writeln!(out, "outcome=nonexistent").unwrap();
            writeln!(out, "cause=initial pair removed").unwrap();
        }
    }
    out
}
