//! Subsets of Q×X, the lattice the synthesis operators act on.

use std::fmt;
use std::sync::Arc;

use crate::automaton::{Automaton, StateId};
use crate::error::{Error, Result};

/// A subset Z of Q×X, stored as a dense membership table (row = spec state).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StatePairSet {
    spec: Arc<Vec<String>>,
    plant: Arc<Vec<String>>,
    bits: Vec<bool>,
}

impl StatePairSet {
    fn with_value(r: &Automaton, g: &Automaton, value: bool) -> Self {
        StatePairSet {
            spec: Arc::new(r.state_names().to_vec()),
            plant: Arc::new(g.state_names().to_vec()),
            bits: vec![value; r.num_states() * g.num_states()],
        }
    }

    /// Q×X.
    pub fn full(r: &Automaton, g: &Automaton) -> Self {
        Self::with_value(r, g, true)
    }

    /// ∅ over the universe Q×X.
    pub fn empty(r: &Automaton, g: &Automaton) -> Self {
        Self::with_value(r, g, false)
    }

    /// An empty set over the same universe as `self`.
    pub fn cleared(&self) -> Self {
        StatePairSet {
            spec: self.spec.clone(),
            plant: self.plant.clone(),
            bits: vec![false; self.bits.len()],
        }
    }

    /// Builds a set from `(spec state, plant state)` names.
    pub fn from_names<'a>(
        r: &Automaton,
        g: &Automaton,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut z = Self::empty(r, g);
        for (q, x) in pairs {
            let q = r.require_state(q)?;
            let x = g.require_state(x)?;
            z.insert(q, x);
        }
        Ok(z)
    }

    /// Builds a set from index pairs over `r.states × g.states`.
    pub fn from_pairs(
        r: &Automaton,
        g: &Automaton,
        pairs: impl IntoIterator<Item = (StateId, StateId)>,
    ) -> Self {
        let mut z = Self::empty(r, g);
        for (q, x) in pairs {
            z.insert(q, x);
        }
        z
    }

    pub fn spec_states(&self) -> &[String] {
        &self.spec
    }

    pub fn plant_states(&self) -> &[String] {
        &self.plant
    }

    pub fn spec_len(&self) -> usize {
        self.spec.len()
    }

    pub fn plant_len(&self) -> usize {
        self.plant.len()
    }

    /// Fails unless the universe is exactly `r.states × g.states`.
    pub fn check_universe(&self, r: &Automaton, g: &Automaton) -> Result<()> {
        if self.spec.as_slice() != r.state_names() {
            return Err(Error::UniverseMismatch(format!(
                "spec states differ from those of {}",
                r.name()
            )));
        }
        if self.plant.as_slice() != g.state_names() {
            return Err(Error::UniverseMismatch(format!(
                "plant states differ from those of {}",
                g.name()
            )));
        }
        Ok(())
    }

    fn same_universe(&self, other: &StatePairSet) -> bool {
        Arc::ptr_eq(&self.spec, &other.spec) && Arc::ptr_eq(&self.plant, &other.plant)
            || self.spec == other.spec && self.plant == other.plant
    }

    #[inline]
    fn idx(&self, q: StateId, x: StateId) -> usize {
        q * self.plant.len() + x
    }

    #[inline]
    pub fn contains(&self, q: StateId, x: StateId) -> bool {
        self.bits[self.idx(q, x)]
    }

    pub fn contains_names(&self, q: &str, x: &str) -> bool {
        let q = self.spec.binary_search_by(|s| s.as_str().cmp(q));
        let x = self.plant.binary_search_by(|s| s.as_str().cmp(x));
        matches!((q, x), (Ok(q), Ok(x)) if self.contains(q, x))
    }

    pub fn insert(&mut self, q: StateId, x: StateId) {
        let i = self.idx(q, x);
        self.bits[i] = true;
    }

    pub fn remove(&mut self, q: StateId, x: StateId) {
        let i = self.idx(q, x);
        self.bits[i] = false;
    }

    /// Removes {q}×X.
    pub fn remove_spec_row(&mut self, q: StateId) {
        let n = self.plant.len();
        self.bits[q * n..(q + 1) * n].fill(false);
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Size of the universe |Q|·|X|.
    pub fn universe_len(&self) -> usize {
        self.bits.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        let n = self.plant.len().max(1);
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i / n, i % n))
    }

    /// Pairs rendered as `(q, x)` names.
    pub fn iter_names(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.iter()
            .map(|(q, x)| (self.spec[q].as_str(), self.plant[x].as_str()))
    }

    /// Membership mask of the Q-projection {q : ∃x, (q,x) ∈ Z}.
    pub fn spec_projection(&self) -> Vec<bool> {
        let n = self.plant.len();
        (0..self.spec.len())
            .map(|q| self.bits[q * n..(q + 1) * n].iter().any(|&b| b))
            .collect()
    }

    /// Names of the spec states in the Q-projection.
    pub fn spec_projection_names(&self) -> Vec<String> {
        self.spec_projection()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(q, _)| self.spec[q].clone())
            .collect()
    }

    pub fn is_subset(&self, other: &StatePairSet) -> bool {
        debug_assert!(self.same_universe(other));
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn intersection(&self, other: &StatePairSet) -> StatePairSet {
        debug_assert!(self.same_universe(other));
        StatePairSet {
            spec: self.spec.clone(),
            plant: self.plant.clone(),
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a && b)
                .collect(),
        }
    }

    pub fn union(&self, other: &StatePairSet) -> StatePairSet {
        debug_assert!(self.same_universe(other));
        StatePairSet {
            spec: self.spec.clone(),
            plant: self.plant.clone(),
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a || b)
                .collect(),
        }
    }

    /// Z minus every row whose spec state is flagged in `rows`.
    pub fn without_rows(&self, rows: &[bool]) -> StatePairSet {
        let mut out = self.clone();
        for (q, _) in rows.iter().enumerate().filter(|(_, &b)| b) {
            out.remove_spec_row(q);
        }
        out
    }

    /// The set whose membership is the bit pattern of `mask` (pair index
    /// `q·|X| + x` maps to bit of the same index). Used for enumeration.
    pub fn from_mask(&self, mask: u64) -> StatePairSet {
        debug_assert!(self.bits.len() <= 64);
        StatePairSet {
            spec: self.spec.clone(),
            plant: self.plant.clone(),
            bits: (0..self.bits.len()).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn to_mask(&self) -> u64 {
        debug_assert!(self.bits.len() <= 64);
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(0, |m, (i, _)| m | 1 << i)
    }
}

impl fmt::Display for StatePairSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (q, x)) in self.iter_names().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({q},{x})")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for StatePairSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
