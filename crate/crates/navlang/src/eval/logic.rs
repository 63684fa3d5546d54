//! Connectives over the four truth states.
//!
//! A decided operand wins outright (`false` for AND, `true` for OR);
//! among the undecided states, undefined outranks missing. NOT swaps the
//! decided states and leaves the undecided ones alone. These tables keep
//! the classical identities: De Morgan holds exactly, AND/OR stay
//! commutative and associative, and IMPLIES(a, b) is OR(NOT a, b).

use std::ops::{BitAnd, BitOr, Not};

use crate::timeseries::LogicSample;

impl Not for LogicSample {
    type Output = LogicSample;

    fn not(self) -> LogicSample {
        match self {
            LogicSample::True => LogicSample::False,
            LogicSample::False => LogicSample::True,
            LogicSample::Missing => LogicSample::Missing,
            LogicSample::Undefined => LogicSample::Undefined,
        }
    }
}

impl BitAnd for LogicSample {
    type Output = LogicSample;

    fn bitand(self, rhs: LogicSample) -> LogicSample {
        use LogicSample::*;
        match (self, rhs) {
            (False, _) | (_, False) => False,
            (Undefined, _) | (_, Undefined) => Undefined,
            (Missing, _) | (_, Missing) => Missing,
            (True, True) => True,
        }
    }
}

impl BitOr for LogicSample {
    type Output = LogicSample;

    fn bitor(self, rhs: LogicSample) -> LogicSample {
        use LogicSample::*;
        match (self, rhs) {
            (True, _) | (_, True) => True,
            (Undefined, _) | (_, Undefined) => Undefined,
            (Missing, _) | (_, Missing) => Missing,
            (False, False) => False,
        }
    }
}

pub fn implies(a: LogicSample, b: LogicSample) -> LogicSample {
    !a | b
}

/// Conditional selection: an undecided condition is its own answer.
pub fn ite(cond: LogicSample, then: LogicSample, otherwise: LogicSample) -> LogicSample {
    match cond {
        LogicSample::True => then,
        LogicSample::False => otherwise,
        LogicSample::Missing => LogicSample::Missing,
        LogicSample::Undefined => LogicSample::Undefined,
    }
}
