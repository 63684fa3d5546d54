use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// One numeric sample: a finite value, or one of the two absent states.
///
/// `Missing` means no context information was available; `Undefined` means an
/// evaluation was attempted but impossible (division by zero, out-of-span
/// envelope lookup, non-finite arithmetic).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NumericSample {
    Value(f64),
    Missing,
    Undefined,
}

impl NumericSample {
    /// Wrap a raw number; NaN and infinities become `Undefined` so a stored
    /// value is always finite.
    pub fn from_value(v: f64) -> Self {
        if v.is_finite() {
            NumericSample::Value(v)
        } else {
            NumericSample::Undefined
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            NumericSample::Value(v) => Some(v),
            _ => None,
        }
    }

    /// Present means an actual value, not `Missing` or `Undefined`.
    pub fn is_present(self) -> bool {
        matches!(self, NumericSample::Value(_))
    }

    pub fn is_missing(self) -> bool {
        matches!(self, NumericSample::Missing)
    }
}

impl fmt::Display for NumericSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericSample::Value(v) => write!(f, "{v}"),
            NumericSample::Missing => f.write_str("missing"),
            NumericSample::Undefined => f.write_str("undefined"),
        }
    }
}

impl FromStr for NumericSample {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "missing" => Ok(NumericSample::Missing),
            "undefined" => Ok(NumericSample::Undefined),
            other => other
                .parse::<f64>()
                .map(NumericSample::from_value)
                .map_err(|_| format!("'{other}' is not a number, 'missing' or 'undefined'")),
        }
    }
}

impl Serialize for NumericSample {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            NumericSample::Value(v) => serializer.serialize_f64(*v),
            NumericSample::Missing => serializer.serialize_str("missing"),
            NumericSample::Undefined => serializer.serialize_str("undefined"),
        }
    }
}

impl<'de> Deserialize<'de> for NumericSample {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(v) => Ok(NumericSample::from_value(v)),
            Raw::Text(s) => s.parse().map_err(de::Error::custom),
        }
    }
}

/// One four-valued logic sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LogicSample {
    True,
    False,
    Missing,
    Undefined,
}

impl LogicSample {
    /// All four states, handy for exhaustive table checks.
    pub const ALL: [LogicSample; 4] = [
        LogicSample::True,
        LogicSample::False,
        LogicSample::Missing,
        LogicSample::Undefined,
    ];

    pub fn from_bool(b: bool) -> Self {
        if b {
            LogicSample::True
        } else {
            LogicSample::False
        }
    }

    /// Present means a definite truth value, not `Missing` or `Undefined`.
    pub fn is_present(self) -> bool {
        matches!(self, LogicSample::True | LogicSample::False)
    }

    pub fn is_missing(self) -> bool {
        matches!(self, LogicSample::Missing)
    }
}

impl From<bool> for LogicSample {
    fn from(b: bool) -> Self {
        LogicSample::from_bool(b)
    }
}

impl fmt::Display for LogicSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogicSample::True => "true",
            LogicSample::False => "false",
            LogicSample::Missing => "missing",
            LogicSample::Undefined => "undefined",
        })
    }
}

impl FromStr for LogicSample {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "true" => Ok(LogicSample::True),
            "false" => Ok(LogicSample::False),
            "missing" => Ok(LogicSample::Missing),
            "undefined" => Ok(LogicSample::Undefined),
            other => Err(format!("'{other}' is not a logic state")),
        }
    }
}

impl Serialize for LogicSample {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LogicSample {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_values_become_undefined() {
        assert_eq!(NumericSample::from_value(f64::NAN), NumericSample::Undefined);
        assert_eq!(NumericSample::from_value(f64::INFINITY), NumericSample::Undefined);
        assert_eq!(NumericSample::from_value(f64::NEG_INFINITY), NumericSample::Undefined);
        assert_eq!(NumericSample::from_value(1.5), NumericSample::Value(1.5));
    }

    #[test]
    fn numeric_display_parse_round_trip() {
        for s in [NumericSample::Value(0.352), NumericSample::Missing, NumericSample::Undefined] {
            assert_eq!(s.to_string().parse::<NumericSample>().unwrap(), s);
        }
    }

    #[test]
    fn logic_display_parse_round_trip() {
        for s in LogicSample::ALL {
            assert_eq!(s.to_string().parse::<LogicSample>().unwrap(), s);
        }
        assert!("TRUE".parse::<LogicSample>().is_err());
    }

    #[test]
    fn presence() {
        assert!(NumericSample::Value(0.0).is_present());
        assert!(!NumericSample::Missing.is_present());
        assert!(!NumericSample::Undefined.is_present());
        assert!(LogicSample::False.is_present());
        assert!(!LogicSample::Undefined.is_present());
    }

    #[test]
    fn serde_forms() {
        assert_eq!(serde_json::to_string(&NumericSample::Value(2.5)).unwrap(), "2.5");
        assert_eq!(serde_json::to_string(&NumericSample::Missing).unwrap(), "\"missing\"");
        assert_eq!(serde_json::to_string(&LogicSample::Undefined).unwrap(), "\"undefined\"");
        assert_eq!(
            serde_json::from_str::<NumericSample>("\"undefined\"").unwrap(),
            NumericSample::Undefined
        );
        assert_eq!(serde_json::from_str::<LogicSample>("\"true\"").unwrap(), LogicSample::True);
    }
}
