//! Slot-game semantics: terms as costed automata.

mod arena;
mod cost_model;
mod denote;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use arena::{arena, cell, copycat, questions};
pub use cost_model::{CostModel, CostModelError};
pub use denote::{bind_cell, Denoter};

use crate::automaton::{AutomatonError, CostedAutomaton, Name, Value};
use crate::frontend::{DataType, Term, Type, TypedTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GamesemError {
    #[error("term is not in β-normal form: {0}")]
    NonNormalTerm(String),
    #[error("state does not cover the var-context: {0}")]
    StateDomain(String),
    #[error("unbound identifier {0}")]
    Unbound(Name),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// Values of the global variables, each with its declared data set.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaState(BTreeMap<Name, (DataType, Value)>);

impl GammaState {
    pub fn new() -> GammaState {
        GammaState::default()
    }

    pub fn with(mut self, name: impl Into<Name>, d: DataType, v: Value) -> GammaState {
        self.0.insert(name.into(), (d, v));
        self
    }

    pub fn get(&self, name: &str) -> Option<Value> {
        self.0.get(name).map(|(_, v)| *v)
    }

    pub fn data_type(&self, name: &str) -> Option<DataType> {
        self.0.get(name).map(|(d, _)| *d)
    }

    /// Updates an existing variable; false if absent or out of range.
    pub fn set(&mut self, name: &str, v: Value) -> bool {
        match self.0.get_mut(name) {
            Some((d, slot)) if d.contains(v) => {
                *slot = v;
                true
            }
            _ => false,
        }
    }

    /// Adds a fresh variable (used for local blocks).
    pub fn insert(&mut self, name: Name, d: DataType, v: Value) {
        self.0.insert(name, (d, v));
    }

    pub fn remove(&mut self, name: &str) -> Option<Value> {
        self.0.remove(name).map(|(_, v)| v)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, DataType, Value)> {
        self.0.iter().map(|(n, (d, v))| (n, *d, *v))
    }

    /// Every state over `vars`.
    pub fn all(vars: &[(Name, DataType)]) -> Vec<GammaState> {
        let mut out = vec![GammaState::new()];
        for (name, d) in vars {
            out = out
                .into_iter()
                .flat_map(|s| d.values().into_iter().map(move |v| s.clone().with(name.clone(), *d, v)))
                .collect();
        }
        out
    }
}

impl fmt::Display for GammaState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(n, _, v)| format!("{n}={v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Typing environment of a term's contexts.
pub fn environment(t: &TypedTerm) -> Vec<(Name, Type)> {
    let mut env: Vec<(Name, Type)> = t.var_context().into_iter().map(|(n, d)| (n, Type::Var(d))).collect();
    env.extend(t.delta.iter().cloned());
    env
}

/// Denotation of a β-normal term keeping the occurrence tags of context
/// identifiers apart.
pub fn denote_tagged(t: &TypedTerm, cm: &CostModel) -> Result<CostedAutomaton, GamesemError> {
    denote_term(&t.term, environment(t), cm)
}

pub fn denote_term(term: &Term, env: Vec<(Name, Type)>, cm: &CostModel) -> Result<CostedAutomaton, GamesemError> {
    Denoter::new(cm, env).denote(term)
}

/// Denotation of a β-normal term; contracted occurrences are merged.
pub fn denote(t: &TypedTerm, cm: &CostModel) -> Result<CostedAutomaton, GamesemError> {
    Ok(denote_tagged(t, cm)?.detag().minimize())
}

/// `⟦s⟧`: the shuffle of one initialized cell per variable, tagged by name.
pub fn state_strategy(s: &GammaState) -> CostedAutomaton {
    s.iter().fold(CostedAutomaton::epsilon(), |acc, (n, d, v)| {
        acc.shuffle(&cell(d, v).tag_all(&[crate::automaton::TagPart::id(n.clone())]))
    })
}

/// The term's denotation run against the state: the var-context moves are
/// played against initialized cells and hidden.
pub fn denote_at_state(t: &TypedTerm, s: &GammaState, cm: &CostModel) -> Result<CostedAutomaton, GamesemError> {
    let mut m = denote(t, cm)?;
    for (x, d) in t.var_context() {
        let v = s.get(&x).ok_or_else(|| GamesemError::StateDomain(format!("missing {x}")))?;
        if !d.contains(v) {
            return Err(GamesemError::StateDomain(format!("{x}={v} is outside {d}")));
        }
        m = bind_cell(&m, &x, d, v);
    }
    Ok(m)
}
