//! Nondeterministic finite automata with a single initial state.
//!
//! States are identified by name and stored in lexicographic order, so a
//! [`StateId`] is stable for a given state set. Transition relations are
//! set-valued: `successors(q, e)` is a sorted, duplicate-free slice.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::alphabet::{Event, EventAlphabet, EventId, Word};
use crate::error::{Error, Result};
use crate::pairs::StatePairSet;

/// Index of a state inside its [`Automaton`].
pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    name: String,
    alphabet: EventAlphabet,
    states: Vec<String>,
    initial: Option<StateId>,
    marked: Vec<bool>,
    // trans[state][event] -> sorted successors
    trans: Vec<Vec<Vec<StateId>>>,
}

/// A violated automaton invariant, as reported by [`AutomatonBuilder::validate`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    DuplicateEvent(String),
    DuplicateState(String),
    UnknownState(String),
    UnknownEvent(String),
    DuplicateTransition(String, String, String),
    MissingInitial,
    MultipleInitial(Vec<String>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateEvent(e) => write!(f, "duplicate event {e}"),
            Violation::DuplicateState(s) => write!(f, "duplicate state {s}"),
            Violation::UnknownState(s) => write!(f, "unknown state {s}"),
            Violation::UnknownEvent(e) => write!(f, "unknown event {e}"),
            Violation::DuplicateTransition(s, e, d) => {
                write!(f, "duplicate transition {s} {e} {d}")
            }
            Violation::MissingInitial => write!(f, "missing initial state"),
            Violation::MultipleInitial(v) => write!(f, "multiple initial states {}", v.join(", ")),
        }
    }
}

/// Outcome of validation: empty means the description is a valid automaton.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let msgs: Vec<_> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", msgs.join("; "))
    }
}

/// Name-based description of an automaton, checked by [`validate`](Self::validate)
/// and turned into an [`Automaton`] by [`build`](Self::build).
#[derive(Debug, Clone, Default)]
pub struct AutomatonBuilder {
    pub name: String,
    pub events: Vec<Event>,
    pub states: Vec<(String, bool)>,
    pub initial: Vec<String>,
    pub transitions: Vec<(String, String, String)>,
}

impl AutomatonBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        AutomatonBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn event(mut self, name: &str, controllable: bool, observable: bool) -> Self {
        self.events.push(Event::new(name, controllable, observable));
        self
    }

    pub fn alphabet(mut self, alphabet: &EventAlphabet) -> Self {
        self.events.extend(alphabet.events().iter().cloned());
        self
    }

    pub fn state(mut self, name: &str) -> Self {
        self.states.push((name.to_string(), false));
        self
    }

    pub fn marked_state(mut self, name: &str) -> Self {
        self.states.push((name.to_string(), true));
        self
    }

    pub fn states<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Self {
        self.states
            .extend(names.into_iter().map(|n| (n.to_string(), false)));
        self
    }

    pub fn initial(mut self, name: &str) -> Self {
        self.initial.push(name.to_string());
        self
    }

    pub fn trans(mut self, src: &str, event: &str, dst: &str) -> Self {
        self.transitions
            .push((src.to_string(), event.to_string(), dst.to_string()));
        self
    }

    /// Checks every automaton invariant and names the offending items.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let alphabet = EventAlphabet::from_unchecked(self.events.clone());
        for d in alphabet.duplicate_names() {
            violations.push(Violation::DuplicateEvent(d));
        }
        let mut seen = BTreeSet::new();
        for (s, _) in &self.states {
            if !seen.insert(s.as_str()) {
                violations.push(Violation::DuplicateState(s.clone()));
            }
        }
        match self.initial.len() {
            0 => violations.push(Violation::MissingInitial),
            1 => {}
            _ => violations.push(Violation::MultipleInitial(self.initial.clone())),
        }
        for i in &self.initial {
            if !seen.contains(i.as_str()) {
                violations.push(Violation::UnknownState(i.clone()));
            }
        }
        let mut edges = BTreeSet::new();
        for (src, ev, dst) in &self.transitions {
            for s in [src, dst] {
                if !seen.contains(s.as_str()) {
                    violations.push(Violation::UnknownState(s.clone()));
                }
            }
            if alphabet.id(ev).is_none() {
                violations.push(Violation::UnknownEvent(ev.clone()));
            }
            if !edges.insert((src, ev, dst)) {
                violations.push(Violation::DuplicateTransition(
                    src.clone(),
                    ev.clone(),
                    dst.clone(),
                ));
            }
        }
        ValidationReport { violations }
    }

    pub fn build(&self) -> Result<Automaton> {
        let report = self.validate();
        if !report.is_ok() {
            return Err(Error::Invalid(report.to_string()));
        }
        let alphabet = EventAlphabet::new(self.events.iter().cloned())?;
        let mut names: Vec<String> = self.states.iter().map(|(s, _)| s.clone()).collect();
        names.sort();
        let idx = |n: &str| names.binary_search_by(|s| s.as_str().cmp(n)).unwrap();
        let mut marked = vec![false; names.len()];
        for (s, m) in &self.states {
            marked[idx(s)] = *m;
        }
        let mut trans = vec![vec![Vec::new(); alphabet.len()]; names.len()];
        for (src, ev, dst) in &self.transitions {
            trans[idx(src)][alphabet.id(ev).unwrap()].push(idx(dst));
        }
        for row in &mut trans {
            for succ in row.iter_mut() {
                succ.sort_unstable();
            }
        }
        Ok(Automaton {
            name: self.name.clone(),
            initial: Some(idx(&self.initial[0])),
            alphabet,
            states: names,
            marked,
            trans,
        })
    }
}

impl Automaton {
    /// The designated empty automaton: no states, language ∅.
    pub fn empty(name: impl Into<String>, alphabet: EventAlphabet) -> Self {
        Automaton {
            name: name.into(),
            alphabet,
            states: Vec::new(),
            initial: None,
            marked: Vec::new(),
            trans: Vec::new(),
        }
    }

    /// Assembles an automaton from index-based parts. `states` must be sorted
    /// and duplicate-free; successor lists are normalized here.
    pub(crate) fn from_parts(
        name: String,
        alphabet: EventAlphabet,
        states: Vec<String>,
        initial: Option<StateId>,
        marked: Vec<bool>,
        mut trans: Vec<Vec<Vec<StateId>>>,
    ) -> Self {
        debug_assert!(states.windows(2).all(|w| w[0] < w[1]));
        for row in &mut trans {
            for succ in row.iter_mut() {
                succ.sort_unstable();
                succ.dedup();
            }
        }
        Automaton {
            name,
            alphabet,
            states,
            initial,
            marked,
            trans,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn alphabet(&self) -> &EventAlphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_ids(&self) -> std::ops::Range<StateId> {
        0..self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.binary_search_by(|s| s.as_str().cmp(name)).ok()
    }

    pub(crate) fn require_state(&self, name: &str) -> Result<StateId> {
        self.state_id(name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    /// True for the designated empty automaton (or any automaton whose
    /// initial state has been cut away).
    pub fn is_empty(&self) -> bool {
        self.initial.is_none()
    }

    pub fn is_marked(&self, q: StateId) -> bool {
        self.marked[q]
    }

    pub fn successors(&self, q: StateId, e: EventId) -> &[StateId] {
        &self.trans[q][e]
    }

    pub fn has_event(&self, q: StateId, e: EventId) -> bool {
        !self.trans[q][e].is_empty()
    }

    /// All transitions `(src, event, dst)` in canonical order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, EventId, StateId)> + '_ {
        self.trans.iter().enumerate().flat_map(|(q, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(e, succ)| succ.iter().map(move |&d| (q, e, d)))
        })
    }

    pub fn num_transitions(&self) -> usize {
        self.trans.iter().flatten().map(Vec::len).sum()
    }

    /// Γ(q): the events with at least one successor at `q`.
    pub fn active_events(&self, q: StateId) -> Vec<EventId> {
        self.alphabet
            .ids()
            .filter(|&e| self.has_event(q, e))
            .collect()
    }

    /// Name-based [`active_events`](Self::active_events).
    pub fn active_event_names(&self, state: &str) -> Result<Vec<String>> {
        let q = self.require_state(state)?;
        Ok(self
            .active_events(q)
            .into_iter()
            .map(|e| self.alphabet.name(e).to_string())
            .collect())
    }

    /// States reachable from `from` by exactly `word`.
    pub fn step(&self, from: &[StateId], word: &[EventId]) -> Vec<StateId> {
        let mut cur: Vec<StateId> = from.to_vec();
        cur.sort_unstable();
        cur.dedup();
        for &e in word {
            let mut next = Vec::new();
            for &q in &cur {
                next.extend_from_slice(&self.trans[q][e]);
            }
            next.sort_unstable();
            next.dedup();
            cur = next;
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    /// States reached from the initial state by `word` (empty if undefined).
    pub fn step_from_initial(&self, word: &[EventId]) -> Vec<StateId> {
        match self.initial {
            Some(q0) => self.step(&[q0], word),
            None => Vec::new(),
        }
    }

    /// Name-based [`step`](Self::step).
    pub fn step_names(&self, from: &[&str], word: &str) -> Result<Vec<String>> {
        let from = from
            .iter()
            .map(|s| self.require_state(s))
            .collect::<Result<Vec<_>>>()?;
        let w = self.alphabet.parse_word(word)?;
        Ok(self
            .step(&from, &w)
            .into_iter()
            .map(|q| self.states[q].clone())
            .collect())
    }

    pub fn accepts_prefix(&self, word: &[EventId]) -> bool {
        !self.step_from_initial(word).is_empty()
    }

    /// Reachability mask from the initial state.
    pub fn reachable_mask(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        let Some(q0) = self.initial else {
            return seen;
        };
        let mut queue = VecDeque::from([q0]);
        seen[q0] = true;
        while let Some(q) = queue.pop_front() {
            for succ in &self.trans[q] {
                for &d in succ {
                    if !seen[d] {
                        seen[d] = true;
                        queue.push_back(d);
                    }
                }
            }
        }
        seen
    }

    /// Keeps the states flagged in `keep` (in original order) with every
    /// transition between kept states.
    pub(crate) fn induced(&self, keep: &[bool]) -> Automaton {
        let mut remap = vec![usize::MAX; self.states.len()];
        let mut states = Vec::new();
        for q in self.state_ids().filter(|&q| keep[q]) {
            remap[q] = states.len();
            states.push(self.states[q].clone());
        }
        let trans = self
            .state_ids()
            .filter(|&q| keep[q])
            .map(|q| {
                self.trans[q]
                    .iter()
                    .map(|succ| {
                        succ.iter()
                            .filter(|&&d| keep[d])
                            .map(|&d| remap[d])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let marked = self
            .state_ids()
            .filter(|&q| keep[q])
            .map(|q| self.marked[q])
            .collect();
        let initial = self.initial.filter(|&q| keep[q]).map(|q| remap[q]);
        Automaton::from_parts(
            self.name.clone(),
            self.alphabet.clone(),
            states,
            initial,
            marked,
            trans,
        )
    }

    /// Ac: restriction to the states reachable from the initial state.
    pub fn accessible(&self) -> Automaton {
        if self.initial.is_none() {
            return Automaton::empty(self.name.clone(), self.alphabet.clone());
        }
        self.induced(&self.reachable_mask())
    }

    /// Same universe, but only transitions between states in `rows` survive,
    /// then everything not reachable from the initial state is detached.
    /// State ids are preserved. If the initial state is not in `rows` the
    /// result has no initial state (language ∅).
    pub(crate) fn restrict_in_place(&self, rows: &[bool]) -> Automaton {
        let initial = self.initial.filter(|&q| rows[q]);
        let mut trans: Vec<Vec<Vec<StateId>>> = self
            .trans
            .iter()
            .enumerate()
            .map(|(q, row)| {
                row.iter()
                    .map(|succ| {
                        if rows[q] {
                            succ.iter().copied().filter(|&d| rows[d]).collect()
                        } else {
                            Vec::new()
                        }
                    })
                    .collect()
            })
            .collect();
        let mut partial = Automaton {
            name: self.name.clone(),
            alphabet: self.alphabet.clone(),
            states: self.states.clone(),
            initial,
            marked: self.marked.clone(),
            trans: Vec::new(),
        };
        partial.trans = std::mem::take(&mut trans);
        let reach = partial.reachable_mask();
        for q in self.state_ids() {
            if !reach[q] {
                for succ in partial.trans[q].iter_mut() {
                    succ.clear();
                }
                partial.marked[q] = false;
            }
        }
        partial
    }

    /// Rc(Z): keep the spec states appearing in `z`, all transitions between
    /// them, marked states among them, then apply Ac. Returns the empty
    /// automaton when the initial state is cut.
    pub fn restrict(&self, z: &StatePairSet) -> Result<Automaton> {
        if z.spec_states() != self.state_names() {
            return Err(Error::UniverseMismatch(format!(
                "pair set spec universe has {} states, automaton {} has {}",
                z.spec_len(),
                self.name,
                self.num_states()
            )));
        }
        let rows = z.spec_projection();
        if self.initial.is_none_or(|q0| !rows[q0]) {
            return Ok(Automaton::empty(self.name.clone(), self.alphabet.clone()));
        }
        Ok(self.restrict_in_place(&rows).accessible())
    }

    /// Every word of length at most `k`, in length-then-lexicographic order
    /// (by event index).
    pub fn bounded_language(&self, k: usize) -> Vec<Word> {
        let Some(q0) = self.initial else {
            return Vec::new();
        };
        let mut out = vec![Vec::new()];
        let mut frontier: Vec<(Word, Vec<StateId>)> = vec![(Vec::new(), vec![q0])];
        for _ in 0..k {
            let mut next = Vec::new();
            for (w, cur) in &frontier {
                for e in self.alphabet.ids() {
                    let succ = self.step(cur, &[e]);
                    if !succ.is_empty() {
                        let mut w2 = w.clone();
                        w2.push(e);
                        out.push(w2.clone());
                        next.push((w2, succ));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        out
    }

    /// Name-rendered [`bounded_language`](Self::bounded_language).
    pub fn bounded_language_names(&self, k: usize) -> Vec<String> {
        self.bounded_language(k)
            .iter()
            .map(|w| self.alphabet.format_word(w))
            .collect()
    }

    /// Checks the structural invariants of an already-built automaton.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for d in self.alphabet.duplicate_names() {
            violations.push(Violation::DuplicateEvent(d));
        }
        for w in self.states.windows(2) {
            if w[0] >= w[1] {
                violations.push(Violation::DuplicateState(w[1].clone()));
            }
        }
        if self.initial.is_none() && !self.states.is_empty() {
            violations.push(Violation::MissingInitial);
        }
        for (q, row) in self.trans.iter().enumerate() {
            for (e, succ) in row.iter().enumerate() {
                for w in succ.windows(2) {
                    if w[0] >= w[1] {
                        violations.push(Violation::DuplicateTransition(
                            self.states[q].clone(),
                            self.alphabet.name(e).to_string(),
                            self.states[w[1]].clone(),
                        ));
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// Converts back to the name-based description.
    pub fn to_builder(&self) -> AutomatonBuilder {
        AutomatonBuilder {
            name: self.name.clone(),
            events: self.alphabet.events().to_vec(),
            states: self
                .state_ids()
                .map(|q| (self.states[q].clone(), self.marked[q]))
                .collect(),
            initial: self
                .initial
                .map(|q| self.states[q].clone())
                .into_iter()
                .collect(),
            transitions: self
                .transitions()
                .map(|(q, e, d)| {
                    (
                        self.states[q].clone(),
                        self.alphabet.name(e).to_string(),
                        self.states[d].clone(),
                    )
                })
                .collect(),
        }
    }

    pub(crate) fn check_alphabet(&self, other: &Automaton) -> Result<()> {
        match self.alphabet.mismatch(&other.alphabet) {
            None => Ok(()),
            Some(m) => Err(Error::AlphabetMismatch(m)),
        }
    }
}
