use std::cell::{OnceCell, RefCell};
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use crate::error::{range_error, Error, Result};
use crate::linalg::{singular_values_of, Matrix};
use crate::means::MeanTriple;
use crate::norms::{gauge, gauge_of_power, NormKind};
use crate::quadrature::integrate;

/// Absolute tolerance for `∫F`, `∫K` and the integral means.
pub const QUADRATURE_TOL: f64 = 1e-9;

/// One of the four scalar functionals of a triple.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Functional {
    F,
    G,
    K,
    /// `φ` with its exponent `r > 0`.
    Phi {
        r: f64,
    },
}

impl Functional {
    fn key(self) -> (u8, u64) {
        match self {
            Functional::F => (0, 0),
            Functional::G => (1, 0),
            Functional::K => (2, 0),
            Functional::Phi { r } => (3, r.to_bits()),
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functional::F => write!(f, "F"),
            Functional::G => write!(f, "G"),
            Functional::K => write!(f, "K"),
            Functional::Phi { r } => write!(f, "phi:{r}"),
        }
    }
}

impl FromStr for Functional {
    type Err = Error;

    /// `F`, `G`, `K`, or `phi:<r>` (bare `phi` means `r = 1`).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "f" => Ok(Functional::F),
            "g" => Ok(Functional::G),
            "k" => Ok(Functional::K),
            "phi" => Ok(Functional::Phi { r: 1.0 }),
            other => {
                let r = other
                    .strip_prefix("phi:")
                    .and_then(|r| r.parse::<f64>().ok())
                    .ok_or_else(|| range_error(format!("unknown functional '{s}'")))?;
                if !(r > 0.0 && r.is_finite()) {
                    return Err(range_error(format!("phi exponent must be > 0, got {r}")));
                }
                Ok(Functional::Phi { r })
            }
        }
    }
}

/// Matrix expressions whose singular values are memoized. Parameters are
/// stored bitwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Expr {
    /// `A^ν X B^{1−ν} + A^{1−ν} X B^ν`
    Sum(u64),
    /// `A^ν X B^{1−ν} − A^{1−ν} X B^ν`
    Diff(u64),
    /// `(1−α) A^{1/2} X B^{1/2} + α (AX + XB)/2`
    Heron(u64),
    /// `A^s X B^{1−s}`
    Sandwich(u64),
    /// `A^α X − X B^α`
    Commutator(u64),
    /// `C^r X̃ − X̃ C^r` with `C = A ⊕ B`, `X̃ = [[0, X], [0, 0]]`
    Dilated(u64),
}

type IntegralKey = ((u8, u64), (u8, u64), u64, u64);

/// The block dilation `C = A ⊕ B` in its eigenbasis `Q = U ⊕ V`, with
/// `Qᵀ X̃ Q`.
struct Dilation {
    eigenvalues: Vec<f64>,
    core: Matrix,
}

/// Evaluates the functionals of one [`MeanTriple`], sharing singular values
/// across norms and checkers.
///
/// Every expression is formed as `[w(λᵢ, μⱼ) yᵢⱼ]` in the eigenbases of
/// `A` and `B`; it is orthogonally equivalent to the product form, so the
/// singular values agree.
pub struct Evaluator<'a> {
    triple: &'a MeanTriple,
    spectra: RefCell<HashMap<Expr, Rc<[f64]>>>,
    integrals: RefCell<HashMap<IntegralKey, f64>>,
    dilation: OnceCell<Dilation>,
}

impl<'a> Evaluator<'a> {
    pub fn new(triple: &'a MeanTriple) -> Self {
        Self {
            triple,
            spectra: RefCell::new(HashMap::new()),
            integrals: RefCell::new(HashMap::new()),
            dilation: OnceCell::new(),
        }
    }

    pub fn triple(&self) -> &'a MeanTriple {
        self.triple
    }

    pub fn dim(&self) -> usize {
        self.triple.dim()
    }

    fn spectrum(&self, expr: Expr) -> Result<Rc<[f64]>> {
        if let Some(s) = self.spectra.borrow().get(&expr) {
            return Ok(Rc::clone(s));
        }
        let m = match expr {
            Expr::Sum(bits) => {
                let nu = f64::from_bits(bits);
                self.triple.in_eigenbasis(|l, m| {
                    l.powf(nu) * m.powf(1.0 - nu) + l.powf(1.0 - nu) * m.powf(nu)
                })
            }
            Expr::Diff(bits) => {
                let nu = f64::from_bits(bits);
                self.triple.in_eigenbasis(|l, m| {
                    l.powf(nu) * m.powf(1.0 - nu) - l.powf(1.0 - nu) * m.powf(nu)
                })
            }
            Expr::Heron(bits) => {
                let alpha = f64::from_bits(bits);
                self.triple
                    .in_eigenbasis(|l, m| (1.0 - alpha) * (l * m).sqrt() + alpha * (l + m) / 2.0)
            }
            Expr::Sandwich(bits) => {
                let s = f64::from_bits(bits);
                self.triple
                    .in_eigenbasis(|l, m| l.powf(s) * m.powf(1.0 - s))
            }
            Expr::Commutator(bits) => {
                let alpha = f64::from_bits(bits);
                self.triple
                    .in_eigenbasis(|l, m| l.powf(alpha) - m.powf(alpha))
            }
            Expr::Dilated(bits) => {
                let r = f64::from_bits(bits);
                let d = self.dilation()?;
                let c = &d.eigenvalues;
                Matrix::from_fn(c.len(), c.len(), |i, j| {
                    (c[i].powf(r) - c[j].powf(r)) * d.core[(i, j)]
                })
            }
        };
        let values: Rc<[f64]> = singular_values_of(&m)?.into();
        self.spectra.borrow_mut().insert(expr, Rc::clone(&values));
        Ok(values)
    }

    fn dilation(&self) -> Result<&Dilation> {
        if let Some(d) = self.dilation.get() {
            return Ok(d);
        }
        let t = self.triple;
        let n = t.dim();
        let q = t.eig_a().vectors.direct_sum(&t.eig_b().vectors);
        let x_tilde = t.x().corner_embed(n, n);
        let core = q.transpose().matmul(&x_tilde)?.matmul(&q)?;
        let mut eigenvalues = t.eig_a().eigenvalues.clone();
        eigenvalues.extend_from_slice(&t.eig_b().eigenvalues);
        Ok(self.dilation.get_or_init(|| Dilation { eigenvalues, core }))
    }

    fn norm(&self, expr: Expr, kind: NormKind) -> Result<f64> {
        gauge(&self.spectrum(expr)?, kind)
    }

    /// `F(ν)`.
    pub fn f(&self, kind: NormKind, nu: f64) -> Result<f64> {
        Ok(0.5 * self.norm(Expr::Sum(nu.to_bits()), kind)?)
    }

    /// `G(α)`.
    pub fn g(&self, kind: NormKind, alpha: f64) -> Result<f64> {
        self.norm(Expr::Heron(alpha.to_bits()), kind)
    }

    /// `K(ν)`, any real `ν`.
    pub fn k(&self, kind: NormKind, nu: f64) -> Result<f64> {
        self.norm(Expr::Diff(nu.to_bits()), kind)
    }

    /// `||| |A^s X B^{1−s}|^r |||`.
    pub fn sandwich_power(&self, kind: NormKind, s: f64, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(range_error(format!("power r must be > 0, got {r}")));
        }
        gauge_of_power(&self.spectrum(Expr::Sandwich(s.to_bits()))?, r, kind)
    }

    /// `φ(s)` for `s ∈ [0, 1]`.
    pub fn phi(&self, kind: NormKind, s: f64, r: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) {
            return Err(range_error(format!("phi: s must lie in [0, 1], got {s}")));
        }
        Ok(self.sandwich_power(kind, s, r)? * self.sandwich_power(kind, 1.0 - s, r)?)
    }

    /// `|||A^α X − X B^α|||`; `α = 1` gives `|||AX − XB|||`.
    pub fn commutator(&self, kind: NormKind, alpha: f64) -> Result<f64> {
        self.norm(Expr::Commutator(alpha.to_bits()), kind)
    }

    /// `|||C^r X̃ − X̃ C^r|||` on the dilation `C = A ⊕ B`,
    /// `X̃ = [[0, X], [0, 0]]`. Its singular values are those of
    /// `A^r X − X B^r` padded with zeros.
    pub fn dilated_commutator(&self, kind: NormKind, r: f64) -> Result<f64> {
        self.norm(Expr::Dilated(r.to_bits()), kind)
    }

    /// `max(‖A^p‖, ‖B^p‖)` in the operator norm.
    pub fn max_power_norm(&self, p: f64) -> f64 {
        self.triple
            .eig_a()
            .eigenvalues
            .iter()
            .chain(&self.triple.eig_b().eigenvalues)
            .map(|l| l.powf(p))
            .fold(0.0, f64::max)
    }

    pub fn value(&self, functional: Functional, kind: NormKind, x: f64) -> Result<f64> {
        match functional {
            Functional::F => self.f(kind, x),
            Functional::G => self.g(kind, x),
            Functional::K => self.k(kind, x),
            Functional::Phi { r } => self.phi(kind, x, r),
        }
    }

    /// `∫_a^b` of a functional, to [`QUADRATURE_TOL`].
    pub fn integral(&self, functional: Functional, kind: NormKind, a: f64, b: f64) -> Result<f64> {
        let key = (functional.key(), kind.key(), a.to_bits(), b.to_bits());
        if let Some(&v) = self.integrals.borrow().get(&key) {
            return Ok(v);
        }
        let v = integrate(|x| self.value(functional, kind, x), a, b, QUADRATURE_TOL)?.value;
        self.integrals.borrow_mut().insert(key, v);
        Ok(v)
    }

    /// `∫_{1/4}^{3/4} F`.
    pub fn integral_f(&self, kind: NormKind) -> Result<f64> {
        self.integral(Functional::F, kind, 0.25, 0.75)
    }

    /// `∫_{1/4}^{3/4} K`.
    pub fn integral_k(&self, kind: NormKind) -> Result<f64> {
        self.integral(Functional::K, kind, 0.25, 0.75)
    }
}

/// `F(ν)` of a triple.
pub fn f_of(t: &MeanTriple, k: NormKind, nu: f64) -> Result<f64> {
    Evaluator::new(t).f(k, nu)
}

/// `G(α)` of a triple.
pub fn g_of(t: &MeanTriple, k: NormKind, alpha: f64) -> Result<f64> {
    Evaluator::new(t).g(k, alpha)
}

/// `K(ν)` of a triple.
pub fn k_of(t: &MeanTriple, k: NormKind, nu: f64) -> Result<f64> {
    Evaluator::new(t).k(k, nu)
}

/// `φ(s)` of a triple with exponent `r`.
pub fn phi_of(t: &MeanTriple, k: NormKind, s: f64, r: f64) -> Result<f64> {
    Evaluator::new(t).phi(k, s, r)
}
