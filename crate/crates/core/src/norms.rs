//! Unitarily invariant norms as symmetric gauge functions of singular values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{range_error, Error, Result};
use crate::linalg::{singular_values_of, Matrix};

/// Selector for `|||·|||`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormKind {
    /// Largest singular value.
    Operator,
    /// `(Σ sⱼᵖ)^{1/p}`, `p ≥ 1`.
    Schatten(f64),
    /// Sum of the `k` largest singular values.
    KyFan(usize),
    /// Sum of all singular values.
    Trace,
}

impl NormKind {
    /// The fixed set the randomized suites sweep.
    pub const TEST_SET: [NormKind; 6] = [
        NormKind::Operator,
        NormKind::Schatten(1.0),
        NormKind::Schatten(2.0),
        NormKind::Schatten(3.0),
        NormKind::KyFan(2),
        NormKind::Trace,
    ];

    pub fn validate(self) -> Result<Self> {
        match self {
            NormKind::Schatten(p) if !(p >= 1.0) => Err(range_error(format!(
                "Schatten exponent must be >= 1, got {p}"
            ))),
            NormKind::KyFan(0) => Err(range_error("Ky Fan index must be >= 1")),
            other => Ok(other),
        }
    }

    /// Ky Fan `k` evaluated on a space where fewer than `k` singular values
    /// exist coincides with the zero-padded gauge, i.e. Ky Fan `min(k, dim)`.
    pub fn restricted_to(self, dim: usize) -> Self {
        match self {
            NormKind::KyFan(k) if k > dim => NormKind::KyFan(dim),
            other => other,
        }
    }

    /// Hashable identity (Schatten exponents compared bitwise).
    pub fn key(self) -> (u8, u64) {
        match self {
            NormKind::Operator => (0, 0),
            NormKind::Schatten(p) => (1, p.to_bits()),
            NormKind::KyFan(k) => (2, k as u64),
            NormKind::Trace => (3, 0),
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::Operator => write!(f, "operator"),
            NormKind::Schatten(p) => write!(f, "schatten:{p}"),
            NormKind::KyFan(k) => write!(f, "kyfan:{k}"),
            NormKind::Trace => write!(f, "trace"),
        }
    }
}

impl FromStr for NormKind {
    type Err = Error;

    /// Accepts `operator`, `trace`, `schatten:<p>`, `kyfan:<k>`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (head, arg) = match lower.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (lower.as_str(), None),
        };
        let kind = match (head, arg) {
            ("operator" | "spectral", None) => NormKind::Operator,
            ("trace" | "nuclear", None) => NormKind::Trace,
            ("schatten", Some(p)) => NormKind::Schatten(
                p.parse()
                    .map_err(|_| range_error(format!("bad Schatten exponent in '{s}'")))?,
            ),
            ("kyfan", Some(k)) => NormKind::KyFan(
                k.parse()
                    .map_err(|_| range_error(format!("bad Ky Fan index in '{s}'")))?,
            ),
            _ => return Err(range_error(format!("unknown norm '{s}'"))),
        };
        kind.validate()
    }
}

impl Serialize for NormKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NormKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Singular values of `x`, descending, length `min(rows, cols)`.
pub fn singular_values(x: &Matrix) -> Result<Vec<f64>> {
    singular_values_of(x)
}

/// Applies the gauge of `kind` to a descending nonnegative sequence.
pub fn gauge(values: &[f64], kind: NormKind) -> Result<f64> {
    match kind.validate()? {
        NormKind::Operator => Ok(values.first().copied().unwrap_or(0.0)),
        NormKind::Trace | NormKind::Schatten(1.0) => Ok(values.iter().sum()),
        NormKind::Schatten(2.0) => Ok(values.iter().map(|s| s * s).sum::<f64>().sqrt()),
        NormKind::Schatten(p) => {
            // Scale by s₁ to keep sⱼᵖ in range for large p.
            let top = values.first().copied().unwrap_or(0.0);
            if top == 0.0 {
                return Ok(0.0);
            }
            let sum: f64 = values.iter().map(|s| (s / top).powf(p)).sum();
            Ok(top * sum.powf(1.0 / p))
        }
        NormKind::KyFan(k) => {
            if k > values.len() {
                return Err(range_error(format!(
                    "Ky Fan index {k} exceeds the {} available singular values",
                    values.len()
                )));
            }
            Ok(values[..k].iter().sum())
        }
    }
}

pub fn ui_norm(x: &Matrix, kind: NormKind) -> Result<f64> {
    gauge(&singular_values(x)?, kind)
}

/// `||| |M|^r |||`: the gauge applied to `sⱼ(M)^r`.
pub fn ui_norm_abs_power(m: &Matrix, r: f64, kind: NormKind) -> Result<f64> {
    if !(r > 0.0) {
        return Err(range_error(format!("power r must be > 0, got {r}")));
    }
    gauge_of_power(&singular_values(m)?, r, kind)
}

pub fn gauge_of_power(values: &[f64], r: f64, kind: NormKind) -> Result<f64> {
    if r == 1.0 {
        return gauge(values, kind);
    }
    let powered: Vec<f64> = values.iter().map(|s| s.powf(r)).collect();
    gauge(&powered, kind)
}
