//! Scalar Heron/Heinz means and the matrix mean expressions built from
//! positive definite `A`, `B` and an arbitrary `X`.

use crate::error::{range_error, Error, Result};
use crate::linalg::{ensure_symmetric, power_from_eig, sym_eig, Matrix, SeededRng, SymEig};

fn check_positive(name: &str, a: f64, b: f64) -> Result<()> {
    if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(range_error(format!(
            "{name}: arguments must be positive, got ({a}, {b})"
        )))
    }
}

/// `F_ν(a, b) = (1 − ν)√(ab) + ν(a + b)/2`.
pub fn heron_scalar(a: f64, b: f64, nu: f64) -> Result<f64> {
    check_positive("heron_scalar", a, b)?;
    Ok((1.0 - nu) * (a * b).sqrt() + nu * (a + b) / 2.0)
}

/// `H_ν(a, b) = (a^{1−ν}b^ν + a^ν b^{1−ν}) / 2`.
pub fn heinz_scalar(a: f64, b: f64, nu: f64) -> Result<f64> {
    check_positive("heinz_scalar", a, b)?;
    Ok((a.powf(1.0 - nu) * b.powf(nu) + a.powf(nu) * b.powf(1.0 - nu)) / 2.0)
}

/// `(a + b) / (2√(ab))`; its square is the Kantorovich constant.
pub fn kantorovich_factor(a: f64, b: f64) -> Result<f64> {
    check_positive("kantorovich_factor", a, b)?;
    Ok((a + b) / (2.0 * (a * b).sqrt()))
}

/// `(A, X, B)` with `A`, `B` symmetric positive definite of a common size.
///
/// The spectral decompositions `A = U diag(λ) Uᵀ`, `B = V diag(μ) Vᵀ` and
/// the core `Y = Uᵀ X V` are computed once; every mean expression of the
/// form `Σ f(A) X g(B)` equals `U [w(λᵢ, μⱼ) yᵢⱼ] Vᵀ` for a suitable weight
/// `w`, which has the same singular values.
#[derive(Clone, Debug)]
pub struct MeanTriple {
    a: Matrix,
    b: Matrix,
    x: Matrix,
    eig_a: SymEig,
    eig_b: SymEig,
    core: Matrix,
}

impl MeanTriple {
    pub fn new(a: Matrix, b: Matrix, x: Matrix) -> Result<Self> {
        let n = a.rows();
        for (name, m) in [("B", &b), ("X", &x)] {
            if m.shape() != (n, n) {
                return Err(Error::Dimension {
                    op: if name == "B" {
                        "mean triple (A, B)"
                    } else {
                        "mean triple (A, X)"
                    },
                    left: a.shape(),
                    right: m.shape(),
                });
            }
        }
        ensure_symmetric(&a)?;
        ensure_symmetric(&b)?;
        let eig_a = sym_eig(&a)?;
        let eig_b = sym_eig(&b)?;
        for eig in [&eig_a, &eig_b] {
            if !(eig.min() > 0.0) {
                return Err(Error::NotPsd {
                    min_eigenvalue: eig.min(),
                });
            }
        }
        let core = eig_a
            .vectors
            .transpose()
            .matmul(&x)?
            .matmul(&eig_b.vectors)?;
        Ok(Self {
            a,
            b,
            x,
            eig_a,
            eig_b,
            core,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(
            Matrix::identity(n),
            Matrix::identity(n),
            Matrix::identity(n),
        )
        .expect("identity triple is valid")
    }

    /// `A`, `B` from `random_spd(n, m, M, ·)` and `X` standard Gaussian, all
    /// seeded from sub-seeds of `seed`.
    pub fn random(n: usize, m: f64, big_m: f64, seed: u64) -> Result<Self> {
        let mut rng = SeededRng::new(seed);
        let (sa, sb, sx) = (rng.next_u64(), rng.next_u64(), rng.next_u64());
        let a = crate::linalg::random_spd(n, m, big_m, sa)?;
        let b = crate::linalg::random_spd(n, m, big_m, sb)?;
        let x = crate::linalg::random_gaussian(n, n, sx);
        Self::new(a, b, x)
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn eig_a(&self) -> &SymEig {
        &self.eig_a
    }

    pub fn eig_b(&self) -> &SymEig {
        &self.eig_b
    }

    /// `Uᵀ X V`.
    pub fn core(&self) -> &Matrix {
        &self.core
    }

    pub fn power_a(&self, t: f64) -> Result<Matrix> {
        power_from_eig(&self.eig_a, t)
    }

    pub fn power_b(&self, t: f64) -> Result<Matrix> {
        power_from_eig(&self.eig_b, t)
    }

    /// `[w(λᵢ, μⱼ) yᵢⱼ]`: the eigenbasis representative of `Σ f(A) X g(B)`.
    pub fn in_eigenbasis(&self, weight: impl Fn(f64, f64) -> f64) -> Matrix {
        let la = &self.eig_a.eigenvalues;
        let mb = &self.eig_b.eigenvalues;
        Matrix::from_fn(self.dim(), self.dim(), |i, j| {
            weight(la[i], mb[j]) * self.core[(i, j)]
        })
    }

    /// `A^s X B^t`.
    pub fn sandwich(&self, s: f64, t: f64) -> Result<Matrix> {
        self.power_a(s)?.matmul(&self.x)?.matmul(&self.power_b(t)?)
    }
}

/// `A^ν X B^{1−ν} + A^{1−ν} X B^ν`.
pub fn heinz_matrix_sum(t: &MeanTriple, nu: f64) -> Result<Matrix> {
    t.sandwich(nu, 1.0 - nu)?.add(&t.sandwich(1.0 - nu, nu)?)
}

/// `A^ν X B^{1−ν} − A^{1−ν} X B^ν`.
pub fn heinz_matrix_diff(t: &MeanTriple, nu: f64) -> Result<Matrix> {
    t.sandwich(nu, 1.0 - nu)?.sub(&t.sandwich(1.0 - nu, nu)?)
}

/// `(1 − α) A^{1/2} X B^{1/2} + α (AX + XB)/2`.
pub fn heron_matrix(t: &MeanTriple, alpha: f64) -> Result<Matrix> {
    let geometric = t.sandwich(0.5, 0.5)?;
    let arithmetic = t.a.matmul(&t.x)?.add(&t.x.matmul(&t.b)?)?.scale(0.5);
    geometric.scale(1.0 - alpha).add(&arithmetic.scale(alpha))
}

/// Löwner matrix of `x ↦ x^r`: `[(μᵢ^r − μⱼ^r)/(μᵢ − μⱼ)]` with diagonal
/// (and near-equal pairs, `|μᵢ − μⱼ| ≤ 1e-12·max μ`) `r μᵢ^{r−1}`.
pub fn loewner_matrix(mu: &[f64], r: f64) -> Result<Matrix> {
    if mu.is_empty() {
        return Err(range_error("loewner_matrix: empty sequence"));
    }
    if let Some(bad) = mu.iter().find(|&&m| !(m > 0.0 && m.is_finite())) {
        return Err(range_error(format!(
            "loewner_matrix: entries must be positive, got {bad}"
        )));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(range_error(format!(
            "loewner_matrix: r must lie in [0, 1], got {r}"
        )));
    }
    let top = mu.iter().copied().fold(0.0, f64::max);
    let n = mu.len();
    let mut y = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = divided_power_difference(mu[i], mu[j], r, top);
            y[(i, j)] = v;
            y[(j, i)] = v;
        }
    }
    Ok(y)
}

/// `(a^r − b^r)/(a − b)`, written as `b^{r−1} expm1(rL)/expm1(L)` with
/// `L = ln(a/b)` to avoid cancellation for close arguments.
fn divided_power_difference(a: f64, b: f64, r: f64, scale: f64) -> f64 {
    if (a - b).abs() <= 1e-12 * scale {
        let m = 0.5 * (a + b);
        return r * m.powf(r - 1.0);
    }
    let l = ((a - b) / b).ln_1p();
    b.powf(r - 1.0) * (r * l).exp_m1() / l.exp_m1()
}
