//! Adaptive Simpson quadrature with recursive bisection.

use crate::error::{range_error, Error, Result};

/// Hard cap on integrand evaluations per call.
pub const MAX_EVALUATIONS: usize = 1_000_000;
/// Every integral is split at least this many times before accepting.
const MIN_DEPTH: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    depth: u32,
}

/// `∫_a^b f` to absolute tolerance `tol`.
///
/// A panel is accepted when its Richardson estimate `|S₂ − S₁|/15` is at
/// most `tol·(panel width)/(b − a)`, so the accepted estimates sum to at
/// most `tol`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(range_error(format!(
            "integrate: need finite a < b, got [{a}, {b}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(range_error(format!(
            "integrate: tolerance must be positive, got {tol}"
        )));
    }

    let mut evaluations = 0usize;
    let mut f = f;
    let mut eval = |x: f64| -> Result<f64> {
        evaluations += 1;
        if evaluations > MAX_EVALUATIONS {
            return Err(Error::Convergence {
                algorithm: "adaptive simpson",
                limit: MAX_EVALUATIONS,
            });
        }
        let v = f(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain { at: x })
        }
    };

    let width = b - a;
    let fa = eval(a)?;
    let fm = eval(0.5 * (a + b))?;
    let fb = eval(b)?;
    let mut stack = vec![Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole: simpson(a, b, fa, fm, fb),
        depth: 0,
    }];

    let mut value = 0.0;
    let mut error_estimate = 0.0;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let flm = eval(lm)?;
        let frm = eval(rm)?;
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let delta = left + right - p.whole;
        let allowed = tol * (p.b - p.a) / width;
        if p.depth >= MIN_DEPTH && delta.abs() <= 15.0 * allowed {
            value += left + right + delta / 15.0;
            error_estimate += delta.abs() / 15.0;
            continue;
        }
        if lm <= p.a || rm >= p.b {
            // Panel no longer splits in floating point.
            return Err(Error::Convergence {
                algorithm: "adaptive simpson",
                limit: evaluations,
            });
        }
        // Right first so the left half is processed next (stable order).
        stack.push(Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
            depth: p.depth + 1,
        });
        stack.push(Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
            depth: p.depth + 1,
        });
    }

    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations,
    })
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}
