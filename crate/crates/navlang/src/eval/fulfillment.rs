//! Fulfillment scoring: how often a rule held when it was decidable.
//!
//! The ratio deliberately ignores missing and undefined samples — it is
//! true / (true + false), and it is absent (`None`) when nothing was
//! decided, rather than defaulting to 0 or 1.

use serde::{Deserialize, Serialize};

use crate::timeseries::LogicSample;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FulfillmentScore {
    pub name: String,
    pub true_count: usize,
    pub false_count: usize,
    pub missing_count: usize,
    pub undefined_count: usize,
    /// true / (true + false); `None` when no sample was decided.
    pub ratio: Option<f64>,
}

impl FulfillmentScore {
    pub fn decided(&self) -> usize {
        self.true_count + self.false_count
    }
}

/// Score a whole logic column.
pub fn fulfillment(name: &str, samples: &[LogicSample]) -> FulfillmentScore {
    score(name, samples.iter().copied())
}

/// Score only the positions where `active` is true — typically a time
/// routine restricting the assessment to operating hours. Both slices must
/// be the same length.
pub fn fulfillment_within(
    name: &str,
    samples: &[LogicSample],
    active: &[LogicSample],
) -> FulfillmentScore {
    debug_assert_eq!(samples.len(), active.len());
    let filtered = samples
        .iter()
        .zip(active)
        .filter(|(_, a)| **a == LogicSample::True)
        .map(|(s, _)| *s);
    score(name, filtered)
}

fn score(name: &str, samples: impl Iterator<Item = LogicSample>) -> FulfillmentScore {
    let (mut t, mut f, mut m, mut u) = (0usize, 0usize, 0usize, 0usize);
    for s in samples {
        match s {
            LogicSample::True => t += 1,
            LogicSample::False => f += 1,
            LogicSample::Missing => m += 1,
            LogicSample::Undefined => u += 1,
        }
    }
    let ratio = (t + f > 0).then(|| t as f64 / (t + f) as f64);
    FulfillmentScore {
        name: name.to_string(),
        true_count: t,
        false_count: f,
        missing_count: m,
        undefined_count: u,
        ratio,
    }
}
