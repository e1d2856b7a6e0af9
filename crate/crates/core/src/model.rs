//! Interaction modes as flat operator sequences.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::Ident;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("mode name must not be empty")]
    EmptyName,
    #[error("mode `{0}` has no operator terms")]
    NoTerms(String),
    #[error("operator count must be at least 1 (got 0 for `{0}`)")]
    ZeroCount(String),
    #[error("duplicate mode name `{0}`")]
    DuplicateMode(String),
}

/// `count × symbol`, e.g. `2*M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct OperatorTerm {
    pub count: u32,
    pub symbol: Ident,
}

impl OperatorTerm {
    pub fn new(count: u32, symbol: Ident) -> Result<Self, ModelError> {
        if count == 0 {
            return Err(ModelError::ZeroCount(symbol.to_string()));
        }
        Ok(OperatorTerm { count, symbol })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mode {
    name: String,
    terms: Vec<OperatorTerm>,
}

impl Mode {
    pub fn new(name: impl Into<String>, terms: Vec<OperatorTerm>) -> Result<Self, ModelError> {
        let name = name.into();
        if name.is_empty() {
            return Err(ModelError::EmptyName);
        }
        if terms.is_empty() {
            return Err(ModelError::NoTerms(name));
        }
        if let Some(t) = terms.iter().find(|t| t.count == 0) {
            return Err(ModelError::ZeroCount(t.symbol.to_string()));
        }
        Ok(Mode { name, terms })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn terms(&self) -> &[OperatorTerm] {
        &self.terms
    }

    /// Total number of operator occurrences (sum of term counts).
    pub fn operator_count(&self) -> u64 {
        self.terms.iter().map(|t| u64::from(t.count)).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ModelSet {
    modes: Vec<Mode>,
}

impl ModelSet {
    pub fn new(modes: Vec<Mode>) -> Result<Self, ModelError> {
        let mut seen = HashSet::new();
        for m in &modes {
            if !seen.insert(m.name()) {
                return Err(ModelError::DuplicateMode(m.name().to_string()));
            }
        }
        Ok(ModelSet { modes })
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn get(&self, name: &str) -> Option<&Mode> {
        self.modes.iter().find(|m| m.name() == name)
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(n: u32, s: &str) -> OperatorTerm {
        OperatorTerm::new(n, Ident::new(s).unwrap()).unwrap()
    }

    #[test]
    fn operator_count_sums_counts() {
        let m = Mode::new("m", vec![term(1, "S"), term(2, "M"), term(3, "P_e")]).unwrap();
        assert_eq!(m.operator_count(), 6);
    }

    #[test]
    fn invalid_modes() {
        assert_eq!(Mode::new("", vec![term(1, "S")]), Err(ModelError::EmptyName));
        assert_eq!(Mode::new("x", vec![]), Err(ModelError::NoTerms("x".into())));
        assert!(OperatorTerm::new(0, Ident::new("S").unwrap()).is_err());
        let a = Mode::new("x", vec![term(1, "S")]).unwrap();
        assert_eq!(
            ModelSet::new(vec![a.clone(), a]),
            Err(ModelError::DuplicateMode("x".into()))
        );
    }
}
