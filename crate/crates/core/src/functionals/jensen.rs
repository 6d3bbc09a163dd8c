use crate::error::{range_error, Result};
use crate::norms::NormKind;
use crate::quadrature::integrate;

use super::{term, CheckResult, Evaluator, Functional, Params, QUADRATURE_TOL};

/// The convex functions the Jensen checkers accept: a few scalar shapes and
/// the functionals of a triple.
#[derive(Clone, Copy)]
pub enum ConvexFn<'e, 'a> {
    Square,
    Abs,
    Exp,
    Functional {
        evaluator: &'e Evaluator<'a>,
        functional: Functional,
        kind: NormKind,
    },
}

impl ConvexFn<'_, '_> {
    pub fn eval(&self, x: f64) -> Result<f64> {
        match *self {
            ConvexFn::Square => Ok(x * x),
            ConvexFn::Abs => Ok(x.abs()),
            ConvexFn::Exp => Ok(x.exp()),
            ConvexFn::Functional {
                evaluator,
                functional,
                kind,
            } => evaluator.value(functional, kind, x),
        }
    }

    /// `∫_a^b f`; functionals reuse the evaluator's integral cache.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        match *self {
            ConvexFn::Functional {
                evaluator,
                functional,
                kind,
            } => evaluator.integral(functional, kind, a, b),
            _ => Ok(integrate(|x| self.eval(x), a, b, QUADRATURE_TOL)?.value),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ConvexFn::Square => "x^2".into(),
            ConvexFn::Abs => "|x|".into(),
            ConvexFn::Exp => "exp".into(),
            ConvexFn::Functional {
                functional, kind, ..
            } => format!("{functional}[{kind}]"),
        }
    }
}

/// Weight `λ ∈ [0, 1]` and the two nodes of a two-point Jensen gap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JensenParams {
    pub lambda: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub x1: f64,
    pub x2: f64,
}

impl JensenParams {
    pub fn new(lambda: f64, x1: f64, x2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(range_error(format!(
                "lambda must lie in [0, 1], got {lambda}"
            )));
        }
        if !x1.is_finite() || !x2.is_finite() {
            return Err(range_error(format!(
                "nodes must be finite, got ({x1}, {x2})"
            )));
        }
        Ok(Self {
            lambda,
            lambda_min: lambda.min(1.0 - lambda),
            lambda_max: lambda.max(1.0 - lambda),
            x1,
            x2,
        })
    }
}

fn midpoint_gap(f: &ConvexFn, x1: f64, x2: f64) -> Result<(f64, f64, f64)> {
    let (f1, f2) = (f.eval(x1)?, f.eval(x2)?);
    let delta = 0.5 * (f1 + f2) - f.eval(0.5 * (x1 + x2))?;
    Ok((f1, f2, delta))
}

/// `2λ_min Δ ≤ λf(x₁) + (1−λ)f(x₂) − f(λx₁ + (1−λ)x₂) ≤ 2λ_max Δ` with
/// `Δ = (f(x₁) + f(x₂))/2 − f((x₁ + x₂)/2)`.
pub fn check_jensen_bounds(f: &ConvexFn, p: &JensenParams) -> Result<CheckResult> {
    let (f1, f2, delta) = midpoint_gap(f, p.x1, p.x2)?;
    let l = p.lambda;
    let middle = l * f1 + (1.0 - l) * f2 - f.eval(l * p.x1 + (1.0 - l) * p.x2)?;
    let chain = vec![
        term("2 lmin delta", 2.0 * p.lambda_min * delta),
        term("jensen gap", middle),
        term("2 lmax delta", 2.0 * p.lambda_max * delta),
    ];
    let params: Params = [
        ("lambda", l.into()),
        ("x1", p.x1.into()),
        ("x2", p.x2.into()),
        ("f", f.name().as_str().into()),
    ]
    .into_iter()
    .collect();
    Ok(CheckResult::new("check_jensen_bounds", chain, params))
}

/// `½Δ ≤ (f(x₁) + f(x₂))/2 − (x₂ − x₁)⁻¹∫f ≤ (3/2)Δ`.
pub fn check_hermite_hadamard_gap(f: &ConvexFn, x1: f64, x2: f64) -> Result<CheckResult> {
    if !(x1 < x2) || !x1.is_finite() || !x2.is_finite() {
        return Err(range_error(format!(
            "need finite x1 < x2, got ({x1}, {x2})"
        )));
    }
    let (f1, f2, delta) = midpoint_gap(f, x1, x2)?;
    let mean = f.integral(x1, x2)? / (x2 - x1);
    let chain = vec![
        term("delta/2", 0.5 * delta),
        term("(f(x1)+f(x2))/2 - mean", 0.5 * (f1 + f2) - mean),
        term("3 delta/2", 1.5 * delta),
    ];
    let params: Params = [
        ("x1", x1.into()),
        ("x2", x2.into()),
        ("f", f.name().as_str().into()),
    ]
    .into_iter()
    .collect();
    Ok(CheckResult::new(
        "check_hermite_hadamard_gap",
        chain,
        params,
    ))
}
