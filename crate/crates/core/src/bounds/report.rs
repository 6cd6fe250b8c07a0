//! Named bound values with their inputs and diagnostics.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Upper,
    Lower,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMethod {
    Fekete,
    WeightedCapacity,
    Robin,
    RationalPoint,
    Lemniscate,
    Trigub,
    Exhaustive,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Upper => "upper",
            BoundKind::Lower => "lower",
            BoundKind::Exact => "exact",
        })
    }
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMethod::Fekete => "fekete",
            BoundMethod::WeightedCapacity => "weighted-capacity",
            BoundMethod::Robin => "robin",
            BoundMethod::RationalPoint => "rational-point",
            BoundMethod::Lemniscate => "lemniscate",
            BoundMethod::Trigub => "trigub",
            BoundMethod::Exhaustive => "exhaustive",
        })
    }
}

/// A bound on the integer Chebyshev constant of some set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub value: f64,
    pub method: BoundMethod,
    pub parameters: serde_json::Value,
    pub diagnostics: BTreeMap<String, f64>,
}

impl BoundReport {
    pub fn new(kind: BoundKind, method: BoundMethod, value: f64, parameters: serde_json::Value) -> Self {
        BoundReport { kind, value, method, parameters, diagnostics: BTreeMap::new() }
    }

    pub fn with_diagnostic(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }

    /// Adds `unit_interval_value = sqrt(value)`: a bound `B` for `[0, 1/4]`
    /// is a bound `sqrt(B)` for `[0, 1]`.
    pub fn with_unit_interval_image(self) -> Self {
        let v = self.value.sqrt();
        self.with_diagnostic("unit_interval_value", v)
    }

    pub fn is_consistent_with(&self, other: &BoundReport) -> bool {
        use BoundKind::*;
        let tol = 1e-12 * self.value.abs().max(other.value.abs()).max(1.0);
        match (self.kind, other.kind) {
            (Lower, Upper) | (Lower, Exact) | (Exact, Upper) => self.value <= other.value + tol,
            (Upper, Lower) | (Exact, Lower) | (Upper, Exact) => other.value <= self.value + tol,
            (Exact, Exact) => (self.value - other.value).abs() <= tol,
            _ => true,
        }
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bound ({}): {}", self.kind, self.method, crate::fmt::sig(self.value, 9))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let r = BoundReport::new(BoundKind::Upper, BoundMethod::WeightedCapacity, 0.18, serde_json::json!({"x": 1}))
            .with_diagnostic("spread", 1e-4);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["kind"], "upper");
        assert_eq!(v["method"], "weighted-capacity");
        assert_eq!(v["diagnostics"]["spread"], 1e-4);
        let back: BoundReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn sandwich_check() {
        let lo = BoundReport::new(BoundKind::Lower, BoundMethod::Robin, 0.17, serde_json::Value::Null);
        let hi = BoundReport::new(BoundKind::Upper, BoundMethod::Fekete, 0.25, serde_json::Value::Null);
        assert!(lo.is_consistent_with(&hi));
        assert!(hi.is_consistent_with(&lo));
        assert!(!hi.is_consistent_with(&BoundReport { value: 0.3, ..lo }));
    }
}
