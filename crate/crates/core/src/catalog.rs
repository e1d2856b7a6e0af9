//! Operator definitions and the catalogs that hold them.
//!
//! A [`Catalog`] is an ordered, duplicate-free set of [`OperatorDef`]s. All
//! values are immutable once built; [`Catalog::override_operator`] returns a
//! fresh catalog and leaves the receiver untouched.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("duplicate operator symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("negative duration {value} ms for operator `{symbol}`")]
    NegativeDuration { symbol: String, value: i64 },
    #[error("`{0}` is not a valid identifier (letter followed by letters, digits or `_`)")]
    InvalidIdentifier(String),
}

/// An identifier: an ASCII letter followed by ASCII letters, digits or `_`.
/// Case-sensitive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Ident(String);

impl Ident {
    pub fn new(s: impl Into<String>) -> Result<Self, CatalogError> {
        let s = s.into();
        if is_ident(&s) {
            Ok(Ident(s))
        } else {
            Err(CatalogError::InvalidIdentifier(s))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Ident {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ident::new(s)
    }
}

impl TryFrom<String> for Ident {
    type Error = CatalogError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        Ident::new(s)
    }
}

impl From<Ident> for String {
    fn from(id: Ident) -> String {
        id.0
    }
}

impl AsRef<str> for Ident {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorCategory {
    Perceptual,
    Cognitive,
    Motor,
    General,
}

impl OperatorCategory {
    pub const ALL: [OperatorCategory; 4] = [
        OperatorCategory::Perceptual,
        OperatorCategory::Cognitive,
        OperatorCategory::Motor,
        OperatorCategory::General,
    ];

    /// Lowercase keyword used by the model file format.
    pub fn keyword(self) -> &'static str {
        match self {
            OperatorCategory::Perceptual => "perceptual",
            OperatorCategory::Cognitive => "cognitive",
            OperatorCategory::Motor => "motor",
            OperatorCategory::General => "general",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.keyword() == s)
    }
}

impl fmt::Display for OperatorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// How long an operator takes: a fixed number of milliseconds, or a named
/// symbolic parameter resolved later by binding.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Duration {
    Fixed(u64),
    Parameter(Ident),
}

impl Duration {
    /// Fixed duration from a signed value, rejecting negatives.
    pub fn from_signed_ms(symbol: &str, ms: i64) -> Result<Self, CatalogError> {
        u64::try_from(ms)
            .map(Duration::Fixed)
            .map_err(|_| CatalogError::NegativeDuration {
                symbol: symbol.to_string(),
                value: ms,
            })
    }

    pub fn param(name: &str) -> Result<Self, CatalogError> {
        Ident::new(name).map(Duration::Parameter)
    }
}

impl fmt::Display for Duration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Duration::Fixed(ms) => write!(f, "{ms} ms"),
            Duration::Parameter(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorDef {
    pub symbol: Ident,
    pub display_name: String,
    pub category: OperatorCategory,
    pub duration: Duration,
    /// Citation for where the duration comes from.
    pub source: String,
}

impl OperatorDef {
    pub fn new(
        symbol: &str,
        display_name: &str,
        category: OperatorCategory,
        duration: Duration,
        source: &str,
    ) -> Result<Self, CatalogError> {
        Ok(OperatorDef {
            symbol: Ident::new(symbol)?,
            display_name: display_name.to_string(),
            category,
            duration,
            source: source.to_string(),
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    operators: Vec<OperatorDef>,
    index: HashMap<String, usize>,
}

impl PartialEq for Catalog {
    fn eq(&self, other: &Self) -> bool {
        self.operators == other.operators
    }
}

impl Eq for Catalog {}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_operators(
        operators: impl IntoIterator<Item = OperatorDef>,
    ) -> Result<Self, CatalogError> {
        let mut catalog = Catalog::new();
        for op in operators {
            catalog.insert(op)?;
        }
        Ok(catalog)
    }

    /// Appends a definition. Fails if the symbol is already declared.
    pub fn insert(&mut self, op: OperatorDef) -> Result<(), CatalogError> {
        let key = op.symbol.as_str().to_string();
        if self.index.contains_key(&key) {
            return Err(CatalogError::DuplicateSymbol(key));
        }
        self.index.insert(key, self.operators.len());
        self.operators.push(op);
        Ok(())
    }

    pub fn lookup(&self, symbol: &str) -> Result<&OperatorDef, CatalogError> {
        self.get(symbol)
            .ok_or_else(|| CatalogError::UnknownOperator(symbol.to_string()))
    }

    pub fn get(&self, symbol: &str) -> Option<&OperatorDef> {
        self.index.get(symbol).map(|&i| &self.operators[i])
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.index.contains_key(symbol)
    }

    pub fn operators(&self) -> &[OperatorDef] {
        &self.operators
    }

    pub fn iter(&self) -> impl Iterator<Item = &OperatorDef> {
        self.operators.iter()
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Returns a copy of the catalog with one operator's duration replaced.
    pub fn override_operator(&self, symbol: &str, duration: Duration) -> Result<Self, CatalogError> {
        let &i = self
            .index
            .get(symbol)
            .ok_or_else(|| CatalogError::UnknownOperator(symbol.to_string()))?;
        let mut next = self.clone();
        next.operators[i].duration = duration;
        Ok(next)
    }

    /// Multiplies every fixed duration by `factor`. Parameters are untouched.
    pub fn scale_fixed(&self, factor: u64) -> Self {
        let mut next = self.clone();
        for op in &mut next.operators {
            if let Duration::Fixed(ms) = &mut op.duration {
                *ms *= factor;
            }
        }
        next
    }
}

impl<'a> IntoIterator for &'a Catalog {
    type Item = &'a OperatorDef;
    type IntoIter = std::slice::Iter<'a, OperatorDef>;
    fn into_iter(self) -> Self::IntoIter {
        self.operators.iter()
    }
}

/// The fourteen operators used to model the box-stacking task, with the
/// durations collected from the HCI literature. `A` (adjusting the accuracy)
/// is task dependent and stays symbolic.
pub fn builtin_paper_catalog() -> Catalog {
    use OperatorCategory::*;
    const ERAZO: &str = "Erazo & Pino 2015";
    const JAFFE: &str = "Jaffe et al. 1970";
    let fixed = Duration::Fixed;
    let rows: [(&str, &str, OperatorCategory, Duration, &str); 14] = [
        ("S", "Scanning", Perceptual, fixed(13), "Potter et al. 2014"),
        ("P_e", "Pointing with Eye", Perceptual, fixed(230), "Sethawong & Sethawong 2019"),
        ("M", "Mentally Prepare", Cognitive, fixed(1350), ERAZO),
        ("Pa", "Pause before the Speech", Cognitive, fixed(700), JAFFE),
        ("Pr", "Hand Preparation", Motor, fixed(452), ERAZO),
        ("P_h", "Pointing with Hand", Motor, fixed(1046), ERAZO),
        ("G_H", "Grab with Hand", Motor, fixed(586), ERAZO),
        ("G_V", "Grab with Voice Command", Motor, fixed(130), JAFFE),
        ("R_V", "Release with Voice Command", Motor, fixed(130), JAFFE),
        ("MV", "Move with Hand", Motor, fixed(700), "Tonn-Eichstaedt 2006"),
        ("R_H", "Release with Hand", Motor, fixed(520), ERAZO),
        (
            "A",
            "Adjusting the Accuracy",
            Motor,
            Duration::Parameter(Ident("A".into())),
            "task dependent; no published value",
        ),
        ("Re", "Hand Retraction", Motor, fixed(746), ERAZO),
        ("W", "System Waiting Time", General, fixed(550), "measured on the study system"),
    ];
    Catalog::from_operators(rows.into_iter().map(|(sym, name, cat, dur, src)| OperatorDef {
        symbol: Ident(sym.to_string()),
        display_name: name.to_string(),
        category: cat,
        duration: dur,
        source: src.to_string(),
    }))
    .expect("built-in catalog has unique symbols")
}
