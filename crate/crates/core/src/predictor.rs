//! Task-time prediction: a mode's time is the sum of its operators' times.
//!
//! Because some operators carry a symbolic parameter instead of a fixed
//! duration, every prediction is an affine expression
//! `constant_ms + Σ coeff_p · p`. Everything here is exact integer (or
//! rational) arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::catalog::{Catalog, CatalogError, Duration, Ident, OperatorCategory};
use crate::model::{Mode, ModelSet};

/// Parameter name → bound value in milliseconds.
pub type Bindings = BTreeMap<String, u64>;

/// Upper limit on evaluated sweep points.
pub const MAX_SWEEP_POINTS: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PredictError {
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("unbound parameter {0}")]
    UnboundParameter(String),
    #[error("repeat must be at least 1")]
    ZeroRepeat,
    #[error("arithmetic overflow while summing operator times")]
    Overflow,
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}

impl From<CatalogError> for PredictError {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::UnknownOperator(s) => PredictError::UnknownOperator(s),
            other => PredictError::UnknownOperator(other.to_string()),
        }
    }
}

/// `constant_ms + Σ coeffs[p] · p`, all in milliseconds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct AffineTime {
    pub constant_ms: u64,
    #[serde(rename = "params")]
    pub coeffs: BTreeMap<Ident, u64>,
}

impl AffineTime {
    pub fn constant(ms: u64) -> Self {
        AffineTime {
            constant_ms: ms,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn parameter(name: Ident, coeff: u64) -> Self {
        let mut coeffs = BTreeMap::new();
        if coeff > 0 {
            coeffs.insert(name, coeff);
        }
        AffineTime { constant_ms: 0, coeffs }
    }

    pub fn of_duration(d: &Duration) -> Self {
        match d {
            Duration::Fixed(ms) => AffineTime::constant(*ms),
            Duration::Parameter(p) => AffineTime::parameter(p.clone(), 1),
        }
    }

    pub fn checked_add(&self, other: &AffineTime) -> Result<AffineTime, PredictError> {
        let mut out = self.clone();
        out.constant_ms = out
            .constant_ms
            .checked_add(other.constant_ms)
            .ok_or(PredictError::Overflow)?;
        for (p, c) in &other.coeffs {
            let slot = out.coeffs.entry(p.clone()).or_insert(0);
            *slot = slot.checked_add(*c).ok_or(PredictError::Overflow)?;
        }
        Ok(out)
    }

    pub fn checked_scale(&self, k: u64) -> Result<AffineTime, PredictError> {
        if k == 0 {
            return Ok(AffineTime::default());
        }
        let mut out = AffineTime::constant(self.constant_ms.checked_mul(k).ok_or(PredictError::Overflow)?);
        for (p, c) in &self.coeffs {
            out.coeffs
                .insert(p.clone(), c.checked_mul(k).ok_or(PredictError::Overflow)?);
        }
        Ok(out)
    }

    /// Total with every parameter at zero.
    pub fn lower_bound(&self) -> u64 {
        self.constant_ms
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, param: &str) -> u64 {
        self.coeffs
            .iter()
            .find(|(p, _)| p.as_str() == param)
            .map_or(0, |(_, c)| *c)
    }

    pub fn parameters(&self) -> impl Iterator<Item = &Ident> {
        self.coeffs.keys()
    }

    /// Resolves to a concrete total. Every parameter must be bound; extra
    /// bindings are ignored.
    pub fn bind(&self, bindings: &Bindings) -> Result<u64, PredictError> {
        let mut total = self.constant_ms;
        for (p, c) in &self.coeffs {
            let v = bindings
                .get(p.as_str())
                .ok_or_else(|| PredictError::UnboundParameter(p.to_string()))?;
            let term = c.checked_mul(*v).ok_or(PredictError::Overflow)?;
            total = total.checked_add(term).ok_or(PredictError::Overflow)?;
        }
        Ok(total)
    }
}

impl fmt::Display for AffineTime {
    /// `7809 + A`, `7809 + 2*A`, `120`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant_ms)?;
        for (p, c) in &self.coeffs {
            if *c == 1 {
                write!(f, " + {p}")?;
            } else {
                write!(f, " + {c}*{p}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperatorContribution {
    pub symbol: Ident,
    pub category: OperatorCategory,
    /// Occurrences in the prediction (term count × repeat).
    pub count: u64,
    pub unit: Duration,
    pub subtotal: AffineTime,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prediction {
    pub mode: String,
    pub repeat: u32,
    pub total: AffineTime,
    /// One entry per term, in term order.
    pub per_operator: Vec<OperatorContribution>,
    /// All four categories, zero subtotals included.
    pub per_category: BTreeMap<OperatorCategory, AffineTime>,
}

impl Prediction {
    pub fn constant_ms(&self) -> u64 {
        self.total.constant_ms
    }

    pub fn param_coeffs(&self) -> &BTreeMap<Ident, u64> {
        &self.total.coeffs
    }

    pub fn lower_bound(&self) -> u64 {
        self.total.lower_bound()
    }

    pub fn bind(&self, bindings: &Bindings) -> Result<u64, PredictError> {
        self.total.bind(bindings)
    }
}

pub fn predict(mode: &Mode, catalog: &Catalog, repeat: u32) -> Result<Prediction, PredictError> {
    if repeat == 0 {
        return Err(PredictError::ZeroRepeat);
    }
    let mut per_category: BTreeMap<_, _> = OperatorCategory::ALL
        .into_iter()
        .map(|c| (c, AffineTime::default()))
        .collect();
    let mut total = AffineTime::default();
    let mut per_operator = Vec::with_capacity(mode.terms().len());
    for term in mode.terms() {
        let op = catalog.lookup(term.symbol.as_str())?;
        let count = u64::from(term.count)
            .checked_mul(u64::from(repeat))
            .ok_or(PredictError::Overflow)?;
        let subtotal = AffineTime::of_duration(&op.duration).checked_scale(count)?;
        total = total.checked_add(&subtotal)?;
        let cat = per_category.get_mut(&op.category).expect("all categories present");
        *cat = cat.checked_add(&subtotal)?;
        per_operator.push(OperatorContribution {
            symbol: op.symbol.clone(),
            category: op.category,
            count,
            unit: op.duration.clone(),
            subtotal,
        });
    }
    Ok(Prediction {
        mode: mode.name().to_string(),
        repeat,
        total,
        per_operator,
        per_category,
    })
}

pub fn predict_all(models: &ModelSet, catalog: &Catalog, repeat: u32) -> Result<Vec<Prediction>, PredictError> {
    models.modes().iter().map(|m| predict(m, catalog, repeat)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankedMode {
    pub mode: String,
    pub total_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ranking {
    /// Bindings for the parameters that actually occur in the modes.
    pub bindings: Bindings,
    /// Ascending by total; ties keep declaration order.
    pub ordered: Vec<RankedMode>,
}

impl Ranking {
    pub fn names(&self) -> Vec<&str> {
        self.ordered.iter().map(|r| r.mode.as_str()).collect()
    }
}

pub fn compare(models: &ModelSet, catalog: &Catalog, bindings: &Bindings) -> Result<Ranking, PredictError> {
    let predictions = predict_all(models, catalog, 1)?;
    rank(&predictions, bindings)
}

/// Ranks already computed predictions.
pub fn rank(predictions: &[Prediction], bindings: &Bindings) -> Result<Ranking, PredictError> {
    let mut used = Bindings::new();
    let mut ordered = Vec::with_capacity(predictions.len());
    for p in predictions {
        for param in p.total.parameters() {
            if let Some(v) = bindings.get(param.as_str()) {
                used.insert(param.to_string(), *v);
            }
        }
        ordered.push(RankedMode {
            mode: p.mode.clone(),
            total_ms: p.bind(bindings)?,
        });
    }
    ordered.sort_by_key(|r| r.total_ms);
    Ok(Ranking { bindings: used, ordered })
}

/// Exact rational number, serialized as `"p/q"` (or `"p"` when integral).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(pub Ratio<i128>);

impl Rational {
    pub fn new(numer: i128, denom: i128) -> Self {
        Rational(Ratio::new(numer, denom))
    }

    pub fn floor(&self) -> i128 {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> i128 {
        self.0.ceil().to_integer()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepRange {
    pub from: u64,
    pub to: u64,
    pub step: u64,
}

impl SweepRange {
    pub fn new(from: u64, to: u64, step: u64) -> Result<Self, PredictError> {
        if from > to {
            return Err(PredictError::InvalidSweep(format!("from ({from}) is greater than to ({to})")));
        }
        if step == 0 {
            return Err(PredictError::InvalidSweep("step must be at least 1".into()));
        }
        if (to - from) / step >= MAX_SWEEP_POINTS {
            return Err(PredictError::InvalidSweep(format!(
                "more than {MAX_SWEEP_POINTS} points; use a larger step"
            )));
        }
        Ok(SweepRange { from, to, step })
    }

    /// `from, from + step, ...` up to and including `to` when aligned.
    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        (0..=(self.to - self.from) / self.step).map(move |i| self.from + i * self.step)
    }

    fn contains(&self, x: &Rational) -> bool {
        let from = Rational::new(self.from as i128, 1);
        let to = Rational::new(self.to as i128, 1);
        from <= *x && *x <= to
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Crossover {
    pub mode_a: String,
    pub mode_b: String,
    /// Parameter value at which both modes take the same time.
    pub value: Rational,
    pub floor: i128,
    pub ceil: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepPoint {
    pub value: u64,
    /// Resolved totals, one per mode in declaration order.
    pub totals_ms: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossoverReport {
    pub parameter: String,
    pub range: SweepRange,
    pub modes: Vec<String>,
    pub points: Vec<SweepPoint>,
    /// Crossovers with `from <= value <= to`.
    pub crossovers: Vec<Crossover>,
    pub out_of_range: Vec<Crossover>,
}

/// Evaluates every mode across `range` for one parameter, with any other
/// parameters taken from `bindings`, and locates the exact pairwise
/// crossover points of the resulting lines.
pub fn sweep(
    models: &ModelSet,
    catalog: &Catalog,
    parameter: &str,
    range: SweepRange,
    bindings: &Bindings,
) -> Result<CrossoverReport, PredictError> {
    let predictions = predict_all(models, catalog, 1)?;
    sweep_predictions(&predictions, parameter, range, bindings)
}

pub fn sweep_predictions(
    predictions: &[Prediction],
    parameter: &str,
    range: SweepRange,
    bindings: &Bindings,
) -> Result<CrossoverReport, PredictError> {
    let mut others = bindings.clone();
    others.remove(parameter);
    // Each mode reduces to intercept + slope · x.
    let mut lines = Vec::with_capacity(predictions.len());
    for p in predictions {
        let slope = p.total.coeff(parameter);
        let mut rest = p.total.clone();
        rest.coeffs.retain(|k, _| k.as_str() != parameter);
        lines.push((rest.bind(&others)?, slope));
    }

    let mut points = Vec::new();
    for x in range.values() {
        let totals_ms = lines
            .iter()
            .map(|&(c, a)| {
                a.checked_mul(x)
                    .and_then(|ax| ax.checked_add(c))
                    .ok_or(PredictError::Overflow)
            })
            .collect::<Result<Vec<_>, _>>()?;
        points.push(SweepPoint { value: x, totals_ms });
    }

    let mut crossovers = Vec::new();
    let mut out_of_range = Vec::new();
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            let (ci, ai) = lines[i];
            let (cj, aj) = lines[j];
            if ai == aj {
                continue;
            }
            let value = Rational::new(cj as i128 - ci as i128, ai as i128 - aj as i128);
            let x = Crossover {
                mode_a: predictions[i].mode.clone(),
                mode_b: predictions[j].mode.clone(),
                value,
                floor: value.floor(),
                ceil: value.ceil(),
            };
            if range.contains(&value) {
                crossovers.push(x);
            } else {
                out_of_range.push(x);
            }
        }
    }

    Ok(CrossoverReport {
        parameter: parameter.to_string(),
        range,
        modes: predictions.iter().map(|p| p.mode.clone()).collect(),
        points,
        crossovers,
        out_of_range,
    })
}
