use crate::error::{Error, Result};
use crate::linalg::Matrix;

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-13;
const SYMMETRY_TOL: f64 = 1e-10;

/// Spectral decomposition `A = V diag(λ) Vᵀ` of a real symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the unit eigenvector for `eigenvalues[j]`.
    pub vectors: Matrix,
}

impl SymEig {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `V diag(f(λ)) Vᵀ`, symmetrized.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let n = self.dim();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let s: f64 = (0..n).map(|k| v[(i, k)] * fl[k] * v[(j, k)]).sum();
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix {
        self.apply(|l| l)
    }
}

/// Checks `‖A − Aᵀ‖_F ≤ 1e-10·max(1, ‖A‖_F)` for square `A`.
pub fn ensure_symmetric(a: &Matrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension {
            op: "symmetric",
            left: a.shape(),
            right: (a.cols(), a.rows()),
        });
    }
    let allowed = SYMMETRY_TOL * a.frobenius_norm().max(1.0);
    let defect = a.symmetry_defect();
    if defect > allowed {
        return Err(Error::Symmetry { defect, allowed });
    }
    Ok(())
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps over all `(p, q)` pairs until the off-diagonal Frobenius mass
/// drops below `1e-13·‖A‖_F`, giving up after 100 sweeps.
pub fn sym_eig(a: &Matrix) -> Result<SymEig> {
    ensure_symmetric(a)?;
    let n = a.rows();
    let mut w = a.symmetrized();
    let mut v = Matrix::identity(n);
    let target = OFF_DIAGONAL_TOL * w.frobenius_norm();

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        if off_diagonal_norm(&w) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = w[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (w[(q, q)] - w[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;

                w[(p, p)] -= t * apq;
                w[(q, q)] += t * apq;
                w[(p, q)] = 0.0;
                w[(q, p)] = 0.0;
                for r in 0..n {
                    if r != p && r != q {
                        let arp = w[(r, p)];
                        let arq = w[(r, q)];
                        let np = c * arp - s * arq;
                        let nq = s * arp + c * arq;
                        w[(r, p)] = np;
                        w[(p, r)] = np;
                        w[(r, q)] = nq;
                        w[(q, r)] = nq;
                    }
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = c * vrp - s * vrq;
                    v[(r, q)] = s * vrp + c * vrq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::Convergence {
            algorithm: "jacobi eigenvalue",
            limit: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[(i, i)].total_cmp(&w[(j, j)]));
    let eigenvalues = order.iter().map(|&i| w[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymEig {
        eigenvalues,
        vectors,
    })
}

fn off_diagonal_norm(w: &Matrix) -> f64 {
    let n = w.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += w[(i, j)] * w[(i, j)];
            }
        }
    }
    acc.sqrt()
}

/// `true` iff `λ_min(Y) ≥ −tol·max(1, λ_max(Y))`.
pub fn is_psd(y: &Matrix, tol: f64) -> Result<bool> {
    let eig = sym_eig(y)?;
    Ok(eig.min() >= -tol * eig.max().max(1.0))
}
