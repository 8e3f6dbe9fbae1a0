//! Metric results and the warnings attached to them.
//!
//! A metric produces one of three shapes: a scalar (which may be `+inf`), a
//! per-class map keyed by integer label, or an integer matrix. JSON cannot
//! carry infinities, so scalars that are not finite serialize as the strings
//! `"inf"`, `"-inf"` or `"nan"`. Per-class keys serialize as decimal strings.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, MapAccess, SeqAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

/// Sentinel used for `+inf` in JSON output.
pub const INF_SENTINEL: &str = "inf";

#[derive(Debug, Clone, PartialEq)]
pub enum MetricValue {
    Scalar(f64),
    /// Ascending label order is guaranteed by the map.
    PerClass(BTreeMap<i64, f64>),
    Matrix(Vec<Vec<u64>>),
}

impl MetricValue {
    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            Self::Scalar(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_per_class(&self) -> Option<&BTreeMap<i64, f64>> {
        match self {
            Self::PerClass(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&[Vec<u64>]> {
        match self {
            Self::Matrix(m) => Some(m),
            _ => None,
        }
    }

    /// JSON rendering following the output schema.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("metric values always serialize")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, serde_json::Error> {
        Self::deserialize(value)
    }
}

impl fmt::Display for MetricValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Scalar(v) => write!(f, "{}", format_scalar(*v)),
            Self::PerClass(map) => {
                let parts: Vec<String> = map
                    .iter()
                    .map(|(k, v)| format!("{k}: {}", format_scalar(*v)))
                    .collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
            Self::Matrix(rows) => {
                let parts: Vec<String> = rows
                    .iter()
                    .map(|r| {
                        let cells: Vec<String> = r.iter().map(u64::to_string).collect();
                        format!("[{}]", cells.join(", "))
                    })
                    .collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

fn format_scalar(v: f64) -> String {
    if v == f64::INFINITY {
        INF_SENTINEL.to_string()
    } else {
        v.to_string()
    }
}

fn serialize_f64<S: Serializer>(v: f64, serializer: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        serializer.serialize_f64(v)
    } else if v.is_nan() {
        serializer.serialize_str("nan")
    } else if v > 0.0 {
        serializer.serialize_str(INF_SENTINEL)
    } else {
        serializer.serialize_str("-inf")
    }
}

fn parse_sentinel<E: de::Error>(s: &str) -> Result<f64, E> {
    match s {
        INF_SENTINEL => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        "nan" => Ok(f64::NAN),
        other => Err(E::custom(format!("unexpected string value {other:?}"))),
    }
}

struct Finite(f64);

impl Serialize for Finite {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serialize_f64(self.0, serializer)
    }
}

impl Serialize for MetricValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Scalar(v) => serialize_f64(*v, serializer),
            Self::PerClass(map) => {
                let mut out = serializer.serialize_map(Some(map.len()))?;
                for (k, v) in map {
                    out.serialize_entry(&k.to_string(), &Finite(*v))?;
                }
                out.end()
            }
            Self::Matrix(rows) => rows.serialize(serializer),
        }
    }
}

struct ScalarOrString(f64);

impl<'de> Deserialize<'de> for ScalarOrString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ScalarOrString;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or an infinity sentinel")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Ok(ScalarOrString(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(ScalarOrString(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(ScalarOrString(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                parse_sentinel(v).map(ScalarOrString)
            }
        }
        deserializer.deserialize_any(V)
    }
}

impl<'de> Deserialize<'de> for MetricValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = MetricValue;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number, \"inf\", a label map, or an integer matrix")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Ok(MetricValue::Scalar(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(MetricValue::Scalar(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(MetricValue::Scalar(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                parse_sentinel(v).map(MetricValue::Scalar)
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut out = BTreeMap::new();
                while let Some((key, value)) = access.next_entry::<String, ScalarOrString>()? {
                    let label: i64 = key
                        .parse()
                        .map_err(|_| de::Error::custom(format!("label key {key:?} is not an integer")))?;
                    out.insert(label, value.0);
                }
                Ok(MetricValue::PerClass(out))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut rows = Vec::new();
                while let Some(row) = access.next_element::<Vec<u64>>()? {
                    rows.push(row);
                }
                Ok(MetricValue::Matrix(rows))
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// Fixed set of warning codes a metric may attach to its result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WarningCode {
    /// A rate had an empty denominator and the zero-division value was used.
    ZeroDivision,
    /// Exactly one of the two masks has no foreground.
    EmptyMask,
    /// Both masks have no foreground.
    BothMasksEmpty,
    /// A correlation-style coefficient had a zero denominator and was set to 0.
    UndefinedCorrelation,
}

impl WarningCode {
    pub const ALL: [WarningCode; 4] = [
        WarningCode::ZeroDivision,
        WarningCode::EmptyMask,
        WarningCode::BothMasksEmpty,
        WarningCode::UndefinedCorrelation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::ZeroDivision => "zero_division",
            Self::EmptyMask => "empty_mask",
            Self::BothMasksEmpty => "both_masks_empty",
            Self::UndefinedCorrelation => "undefined_correlation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WarningRecord {
    pub code: String,
    pub message: String,
}

impl WarningRecord {
    pub fn new(code: WarningCode, message: impl Into<String>) -> Self {
        Self {
            code: code.as_str().to_string(),
            message: message.into(),
        }
    }
}

/// A metric value together with the warnings raised while computing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: MetricValue,
    pub warnings: Vec<WarningRecord>,
}

impl Evaluation {
    pub fn scalar(value: f64) -> Self {
        Self {
            value: MetricValue::Scalar(value),
            warnings: Vec::new(),
        }
    }

    pub fn with_warnings(value: MetricValue, warnings: Vec<WarningRecord>) -> Self {
        Self { value, warnings }
    }

    pub fn has_warning(&self, code: WarningCode) -> bool {
        self.warnings.iter().any(|w| w.code == code.as_str())
    }

    /// Scalar view, panicking on other shapes. Meant for tests and examples.
    pub fn expect_scalar(&self) -> f64 {
        self.value
            .as_scalar()
            .unwrap_or_else(|| panic!("expected a scalar, got {}", self.value))
    }

    /// Per-class view, panicking on other shapes. Meant for tests and examples.
    pub fn expect_per_class(&self) -> &BTreeMap<i64, f64> {
        self.value
            .as_per_class()
            .unwrap_or_else(|| panic!("expected a per-class map, got {}", self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn infinity_uses_sentinel() {
        let json = MetricValue::Scalar(f64::INFINITY).to_json();
        assert_eq!(json, serde_json::json!("inf"));
        assert_eq!(
            MetricValue::from_json(&json).unwrap(),
            MetricValue::Scalar(f64::INFINITY)
        );
    }

    #[test]
    fn per_class_keys_are_decimal_strings_in_ascending_order() {
        let mut map = BTreeMap::new();
        map.insert(10, 0.5);
        map.insert(-1, 0.25);
        map.insert(2, 1.0);
        let value = MetricValue::PerClass(map);
        let text = serde_json::to_string(&value).unwrap();
        assert_eq!(text, r#"{"-1":0.25,"2":1.0,"10":0.5}"#);
        let nested = serde_json::json!({ "value": value.to_json() });
        assert_eq!(nested.to_string(), r#"{"value":{"-1":0.25,"2":1.0,"10":0.5}}"#);
    }

    #[test]
    fn matrix_is_nested_integer_array() {
        let m = MetricValue::Matrix(vec![vec![2, 0], vec![1, 3]]);
        assert_eq!(m.to_json(), serde_json::json!([[2, 0], [1, 3]]));
        assert_eq!(m.to_string(), "[[2, 0], [1, 3]]");
    }

    fn arb_value() -> impl Strategy<Value = MetricValue> {
        prop_oneof![
            prop_oneof![any::<f64>().prop_filter("finite", |v| v.is_finite()), Just(f64::INFINITY)]
                .prop_map(MetricValue::Scalar),
            prop::collection::btree_map(any::<i64>(), -1e6f64..1e6, 0..8).prop_map(MetricValue::PerClass),
            prop::collection::vec(prop::collection::vec(any::<u64>(), 3), 0..4).prop_map(MetricValue::Matrix),
        ]
    }

    proptest! {
        #[test]
        fn json_round_trip_is_identity(value in arb_value()) {
            let text = serde_json::to_string(&value).unwrap();
            let back: MetricValue = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, value);
        }
    }
}
