//! Piecewise-linear operating envelopes.
//!
//! A characteristic carries an optional lower and upper polyline over a
//! driving quantity x. Bounds exist exactly on the closed x-span of their
//! polyline; outside it (or with no polyline at all) the bound is undefined.

use crate::lang::CharacteristicDef;
use crate::timeseries::{LogicSample, NumericSample};

#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    lower: Vec<(f64, f64)>,
    upper: Vec<(f64, f64)>,
}

/// Interpolated y at `x`, `None` outside the polyline's x-span. Breakpoints
/// must be strictly increasing in x (the validator enforces this for
/// characteristic definitions).
fn polyline_at(points: &[(f64, f64)], x: f64) -> Option<f64> {
    let (first, last) = (points.first()?, points.last()?);
    if x < first.0 || x > last.0 {
        return None;
    }
    let right = points.partition_point(|p| p.0 < x);
    if right == 0 {
        return Some(first.1); // x is exactly the first breakpoint
    }
    let (x1, y1) = points[right];
    if x == x1 {
        return Some(y1);
    }
    let (x0, y0) = points[right - 1];
    Some(y0 + (x - x0) / (x1 - x0) * (y1 - y0))
}

impl Envelope {
    pub fn new(lower: Vec<(f64, f64)>, upper: Vec<(f64, f64)>) -> Self {
        Envelope { lower, upper }
    }

    pub fn from_def(def: &CharacteristicDef) -> Self {
        Envelope::new(def.lower.clone(), def.upper.clone())
    }

    pub fn lower_at(&self, x: f64) -> NumericSample {
        match polyline_at(&self.lower, x) {
            Some(y) => NumericSample::from_value(y),
            None => NumericSample::Undefined,
        }
    }

    pub fn upper_at(&self, x: f64) -> NumericSample {
        match polyline_at(&self.upper, x) {
            Some(y) => NumericSample::from_value(y),
            None => NumericSample::Undefined,
        }
    }

    pub fn bounds_at(&self, x: f64) -> (NumericSample, NumericSample) {
        (self.lower_at(x), self.upper_at(x))
    }

    /// Is the point (x, y) inside the envelope?
    ///
    /// A missing coordinate makes the verdict missing, an undefined one makes
    /// it undefined. With both present, any defined bound that is violated
    /// decides `false`; if every defined bound holds and at least one bound
    /// was defined, the verdict is `true`; with no defined bound at this x
    /// there is nothing to check and the verdict is undefined.
    pub fn check(&self, x: NumericSample, y: NumericSample) -> LogicSample {
        if x.is_missing() || y.is_missing() {
            return LogicSample::Missing;
        }
        let (Some(xv), Some(yv)) = (x.value(), y.value()) else {
            return LogicSample::Undefined;
        };
        let mut any_defined = false;
        if let Some(lo) = self.lower_at(xv).value() {
            any_defined = true;
            if yv < lo {
                return LogicSample::False;
            }
        }
        if let Some(hi) = self.upper_at(xv).value() {
            any_defined = true;
            if yv > hi {
                return LogicSample::False;
            }
        }
        if any_defined {
            LogicSample::True
        } else {
            LogicSample::Undefined
        }
    }
}
