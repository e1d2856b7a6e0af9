//! GOMS task-time prediction and SUS / NASA-TLX survey analysis for
//! comparing interaction modes.
//!
//! The prediction side parses operator catalogs and mode definitions
//! ([`dsl`]), then evaluates each mode as an affine function of any
//! symbolic operator durations ([`predictor`]). The survey side scores
//! questionnaire responses ([`survey`]) and compares modes with
//! within-subject nonparametric tests ([`stats`], [`analysis`]).
//! [`report`] renders everything as JSON, Markdown or CSV.

pub mod analysis;
pub mod catalog;
pub mod dsl;
pub mod model;
pub mod predictor;
pub mod report;
pub mod stats;
pub mod survey;
pub mod synthetic;

pub use catalog::{builtin_paper_catalog, Catalog, CatalogError, Duration, Ident, OperatorCategory, OperatorDef};
pub use dsl::{parse_catalog, parse_modes, serialize_catalog, serialize_modes, ParseError, ParseErrors};
pub use model::{Mode, ModelSet, OperatorTerm};
pub use predictor::{compare, predict, sweep, AffineTime, Bindings, CrossoverReport, Prediction, Ranking};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
