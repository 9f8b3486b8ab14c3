//! Events and event alphabets.
//!
//! Every event carries two independent flags: whether a supervisor may
//! disable it (controllable) and whether a supervisor can see it
//! (observable). Alphabets are kept sorted by event name so that event
//! indices, and everything derived from them, are reproducible.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Index of an event inside its [`EventAlphabet`].
pub type EventId = usize;

/// A finite event string, stored as alphabet indices.
pub type Word = Vec<EventId>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    pub name: String,
    pub controllable: bool,
    pub observable: bool,
}

impl Event {
    pub fn new(name: impl Into<String>, controllable: bool, observable: bool) -> Self {
        Event {
            name: name.into(),
            controllable,
            observable,
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.name,
            if self.controllable { "c" } else { "uc" },
            if self.observable { "o" } else { "uo" }
        )
    }
}

/// An ordered set of events, sorted lexicographically by name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct EventAlphabet {
    events: Vec<Event>,
}

impl EventAlphabet {
    /// Builds an alphabet, rejecting duplicate names.
    pub fn new(events: impl IntoIterator<Item = Event>) -> Result<Self> {
        let mut events: Vec<Event> = events.into_iter().collect();
        events.sort_by(|a, b| a.name.cmp(&b.name));
        for w in events.windows(2) {
            if w[0].name == w[1].name {
                return Err(Error::Invalid(format!("duplicate event {}", w[0].name)));
            }
        }
        Ok(EventAlphabet { events })
    }

    /// Builds an alphabet without the uniqueness check. Used by the parser
    /// and by validation tests that need to represent broken inputs.
    pub(crate) fn from_unchecked(mut events: Vec<Event>) -> Self {
        events.sort_by(|a, b| a.name.cmp(&b.name));
        EventAlphabet { events }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn ids(&self) -> std::ops::Range<EventId> {
        0..self.events.len()
    }

    pub fn event(&self, id: EventId) -> &Event {
        &self.events[id]
    }

    pub fn name(&self, id: EventId) -> &str {
        &self.events[id].name
    }

    pub fn id(&self, name: &str) -> Option<EventId> {
        self.events
            .binary_search_by(|e| e.name.as_str().cmp(name))
            .ok()
    }

    pub fn is_controllable(&self, id: EventId) -> bool {
        self.events[id].controllable
    }

    pub fn is_observable(&self, id: EventId) -> bool {
        self.events[id].observable
    }

    pub fn controllable(&self) -> impl Iterator<Item = EventId> + '_ {
        self.ids().filter(|&e| self.is_controllable(e))
    }

    pub fn uncontrollable(&self) -> impl Iterator<Item = EventId> + '_ {
        self.ids().filter(|&e| !self.is_controllable(e))
    }

    pub fn unobservable(&self) -> impl Iterator<Item = EventId> + '_ {
        self.ids().filter(|&e| !self.is_observable(e))
    }

    /// Parses a whitespace-separated event string. `~` and the empty string
    /// denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.split_whitespace()
            .filter(|t| *t != "~")
            .map(|t| self.id(t).ok_or_else(|| Error::UnknownEvent(t.to_string())))
            .collect()
    }

    /// Renders a word as space-separated event names, `~` for the empty word.
    pub fn format_word(&self, word: &[EventId]) -> String {
        if word.is_empty() {
            return "~".to_string();
        }
        word.iter()
            .map(|&e| self.name(e))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Natural projection onto the observable events.
    pub fn project(&self, word: &[EventId]) -> Word {
        word.iter()
            .copied()
            .filter(|&e| self.is_observable(e))
            .collect()
    }

    /// Projection of a word given by name. Fails on events outside the alphabet.
    pub fn project_names(&self, word: &str) -> Result<String> {
        let w = self.parse_word(word)?;
        Ok(self.format_word(&self.project(&w)))
    }

    pub(crate) fn duplicate_names(&self) -> BTreeSet<String> {
        self.events
            .windows(2)
            .filter(|w| w[0].name == w[1].name)
            .map(|w| w[0].name.clone())
            .collect()
    }

    /// Describes the first difference between two alphabets, if any.
    pub fn mismatch(&self, other: &EventAlphabet) -> Option<String> {
        if self == other {
            return None;
        }
        for e in &self.events {
            match other.id(&e.name).map(|i| other.event(i)) {
                None => return Some(format!("event {} missing from the other alphabet", e.name)),
                Some(o) if o != e => {
                    return Some(format!("event {} declared as '{}' and '{}'", e.name, e, o))
                }
                _ => {}
            }
        }
        for e in &other.events {
            if self.id(&e.name).is_none() {
                return Some(format!("event {} missing from the first alphabet", e.name));
            }
        }
        Some("alphabets differ".to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> EventAlphabet {
        EventAlphabet::new([
            Event::new("g", false, false),
            Event::new("d", true, true),
            Event::new("s", false, true),
        ])
        .unwrap()
    }

    #[test]
    fn sorted_by_name() {
        let a = sigma();
        let names: Vec<_> = a.events().iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["d", "g", "s"]);
        assert_eq!(a.id("s"), Some(2));
        assert_eq!(a.id("x"), None);
    }

    #[test]
    fn duplicate_rejected() {
        let err = EventAlphabet::new([Event::new("a", true, true), Event::new("a", false, true)]);
        assert!(matches!(err, Err(Error::Invalid(m)) if m.contains("duplicate event")));
    }

    #[test]
    fn projection() {
        let a = sigma();
        assert_eq!(a.project_names("").unwrap(), "~");
        assert_eq!(a.project_names("g d").unwrap(), "d");
        assert_eq!(a.project_names("d s").unwrap(), "d s");
        assert_eq!(a.project_names("g g"), Ok("~".to_string()));
        assert!(matches!(a.project_names("d z"), Err(Error::UnknownEvent(e)) if e == "z"));
    }

    #[test]
    fn mismatch_reports_flags() {
        let a = sigma();
        let b = EventAlphabet::new([
            Event::new("g", true, false),
            Event::new("d", true, true),
            Event::new("s", false, true),
        ])
        .unwrap();
        assert!(a.mismatch(&a).is_none());
        assert!(a.mismatch(&b).unwrap().contains("event g"));
    }
}
