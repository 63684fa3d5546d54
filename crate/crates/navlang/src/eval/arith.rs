//! Arithmetic and comparisons over numeric samples.
//!
//! Absence propagates through every operation: an undefined operand makes
//! the result undefined, otherwise a missing operand makes it missing.
//! Division by zero and any non-finite outcome (overflow) are undefined.
//! Comparisons follow the same propagation but land in the logic domain.

use std::ops::{Add, Div, Mul, Sub};

use crate::timeseries::{LogicSample, NumericSample};

fn lift2(
    a: NumericSample,
    b: NumericSample,
    f: impl FnOnce(f64, f64) -> NumericSample,
) -> NumericSample {
    use NumericSample::*;
    match (a, b) {
        (Undefined, _) | (_, Undefined) => Undefined,
        (Missing, _) | (_, Missing) => Missing,
        (Value(x), Value(y)) => f(x, y),
    }
}

impl Add for NumericSample {
    type Output = NumericSample;

    fn add(self, rhs: NumericSample) -> NumericSample {
        lift2(self, rhs, |x, y| NumericSample::from_value(x + y))
    }
}

impl Sub for NumericSample {
    type Output = NumericSample;

    fn sub(self, rhs: NumericSample) -> NumericSample {
        lift2(self, rhs, |x, y| NumericSample::from_value(x - y))
    }
}

impl Mul for NumericSample {
    type Output = NumericSample;

    fn mul(self, rhs: NumericSample) -> NumericSample {
        lift2(self, rhs, |x, y| NumericSample::from_value(x * y))
    }
}

impl Div for NumericSample {
    type Output = NumericSample;

    fn div(self, rhs: NumericSample) -> NumericSample {
        lift2(self, rhs, |x, y| {
            if y == 0.0 {
                NumericSample::Undefined
            } else {
                NumericSample::from_value(x / y)
            }
        })
    }
}

fn lift_cmp(a: NumericSample, b: NumericSample, f: impl FnOnce(f64, f64) -> bool) -> LogicSample {
    use NumericSample::*;
    match (a, b) {
        (Undefined, _) | (_, Undefined) => LogicSample::Undefined,
        (Missing, _) | (_, Missing) => LogicSample::Missing,
        (Value(x), Value(y)) => LogicSample::from_bool(f(x, y)),
    }
}

pub fn lt(a: NumericSample, b: NumericSample) -> LogicSample {
    lift_cmp(a, b, |x, y| x < y)
}

pub fn le(a: NumericSample, b: NumericSample) -> LogicSample {
    lift_cmp(a, b, |x, y| x <= y)
}

pub fn gt(a: NumericSample, b: NumericSample) -> LogicSample {
    lift_cmp(a, b, |x, y| x > y)
}

pub fn ge(a: NumericSample, b: NumericSample) -> LogicSample {
    lift_cmp(a, b, |x, y| x >= y)
}

pub fn eq(a: NumericSample, b: NumericSample) -> LogicSample {
    lift_cmp(a, b, |x, y| x == y)
}

pub fn ne(a: NumericSample, b: NumericSample) -> LogicSample {
    lift_cmp(a, b, |x, y| x != y)
}

/// Conditional selection in the numeric domain: an undecided condition
/// carries over as the matching absent state.
pub fn ite(cond: LogicSample, then: NumericSample, otherwise: NumericSample) -> NumericSample {
    match cond {
        LogicSample::True => then,
        LogicSample::False => otherwise,
        LogicSample::Missing => NumericSample::Missing,
        LogicSample::Undefined => NumericSample::Undefined,
    }
}
