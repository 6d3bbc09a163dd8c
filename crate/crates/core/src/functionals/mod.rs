//! The functionals `F`, `G`, `K`, `φ` over a [`MeanTriple`] and the
//! inequality-chain checkers built on them.
//!
//! With `A`, `B` positive definite and `X` arbitrary:
//!
//! ```text
//! F(ν) = ½ |||A^ν X B^{1−ν} + A^{1−ν} X B^ν|||
//! G(α) = |||(1−α) A^{1/2} X B^{1/2} + α (AX + XB)/2|||
//! K(ν) = |||A^ν X B^{1−ν} − A^{1−ν} X B^ν|||
//! φ(s) = ||| |A^s X B^{1−s}|^r ||| · ||| |A^{1−s} X B^s|^r |||
//! ```
//!
//! Every checker returns a [`CheckResult`] holding the chain of values in
//! left-to-right order, so `chain[i] ≤ chain[i + 1]` is what is claimed.

mod checks;
mod eval;
mod jensen;
mod zou;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::norms::NormKind;

pub use checks::*;
pub use eval::{f_of, g_of, k_of, phi_of, Evaluator, Functional, QUADRATURE_TOL};
pub use jensen::{check_hermite_hadamard_gap, check_jensen_bounds, ConvexFn, JensenParams};
pub use zou::{zou_counterexample, zou_kernel, ZouCounterexample, ZOU_NU, ZOU_POINTS};

/// Relative slack allowed on each margin: `τ = 1e-8·max(1, max |chain|)`.
pub const MARGIN_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainTerm {
    pub label: &'static str,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ParamValue {
    Real(f64),
    Int(u64),
    Norm(NormKind),
    Text(String),
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Real(v)
    }
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Int(v as u64)
    }
}

impl From<u64> for ParamValue {
    fn from(v: u64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<NormKind> for ParamValue {
    fn from(v: NormKind) -> Self {
        ParamValue::Norm(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_owned())
    }
}

pub type Params = BTreeMap<&'static str, ParamValue>;

/// One evaluated inequality chain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub chain: Vec<ChainTerm>,
    /// `chain[i + 1] − chain[i]`.
    pub margins: Vec<f64>,
    pub passed: bool,
    /// `τ` used for `passed`.
    pub tolerance: f64,
    pub params: Params,
}

impl CheckResult {
    pub fn new(name: &'static str, chain: Vec<ChainTerm>, params: Params) -> Self {
        let margins: Vec<f64> = chain.windows(2).map(|w| w[1].value - w[0].value).collect();
        let tolerance = tolerance_for(chain.iter().map(|t| t.value));
        let passed = margins.iter().all(|&m| m >= -tolerance);
        Self {
            name,
            chain,
            margins,
            passed,
            tolerance,
            params,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.chain.iter().map(|t| t.value).collect()
    }

    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `min margin / τ`; the check passes at scale `c` iff this is `≥ −c`.
    pub fn relative_margin(&self) -> f64 {
        self.min_margin() / self.tolerance
    }

    pub fn passes_with_scale(&self, scale: f64) -> bool {
        self.margins.iter().all(|&m| m >= -scale * self.tolerance)
    }

    pub fn with_param(mut self, key: &'static str, value: impl Into<ParamValue>) -> Self {
        self.params.insert(key, value.into());
        self
    }
}

pub fn tolerance_for(values: impl IntoIterator<Item = f64>) -> f64 {
    let scale = values.into_iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    MARGIN_TOLERANCE * scale
}

pub(crate) fn term(label: &'static str, value: f64) -> ChainTerm {
    ChainTerm { label, value }
}

/// `r₀(ν) = min{ν, 1 − ν}`.
pub fn r0(nu: f64) -> f64 {
    nu.min(1.0 - nu)
}

/// `r₂(ν) = min{2ν − ½, |1 − 2ν|, 3/2 − 2ν}`.
pub fn r2(nu: f64) -> f64 {
    (2.0 * nu - 0.5)
        .min((1.0 - 2.0 * nu).abs())
        .min(1.5 - 2.0 * nu)
}

/// `t₀(t) = min{t, 1 − t}`.
pub fn t0(t: f64) -> f64 {
    t.min(1.0 - t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_functions() {
        assert_eq!(r0(0.3), 0.3);
        assert_eq!(r0(0.75), 0.25);
        assert_eq!(t0(0.0), 0.0);
        assert_eq!(r2(0.5), 0.0);
        assert_eq!(r2(0.25), 0.0);
        assert_eq!(r2(0.375), 0.25);
        for i in 0..=64 {
            let nu = 0.25 + 0.5 * i as f64 / 64.0;
            assert!(r2(nu) >= 0.0);
            assert!((0.25..=0.5).contains(&r0(nu)));
        }
    }

    #[test]
    fn result_margins_and_tolerance() {
        let r = CheckResult::new(
            "demo",
            vec![term("a", 1.0), term("b", 3.0), term("c", 2.0)],
            Params::new(),
        );
        assert_eq!(r.margins, vec![2.0, -1.0]);
        assert!(!r.passed);
        assert!((r.tolerance - 3e-8).abs() < 1e-22);

        let tight = CheckResult::new(
            "demo",
            vec![term("a", 0.0), term("b", -5e-9)],
            Params::new(),
        );
        assert!(tight.passed);
        assert!(!tight.passes_with_scale(0.1));
        assert_eq!(tight.relative_margin(), -0.5);
    }

    #[test]
    fn params_builder() {
        let r = CheckResult::new("demo", vec![term("a", 0.0)], Params::new())
            .with_param("nu", 0.25)
            .with_param("dim", 3usize)
            .with_param("norm", NormKind::KyFan(2));
        assert_eq!(r.params["nu"], ParamValue::Real(0.25));
        assert_eq!(r.params["dim"], ParamValue::Int(3));
        assert_eq!(r.params["norm"], ParamValue::Norm(NormKind::KyFan(2)));
        assert_eq!(r.min_margin(), f64::INFINITY);
    }
}
