//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.

use crate::error::{Error, Result};
use crate::linalg::Matrix;

const MAX_SWEEPS: usize = 80;
const ORTHOGONALITY_TOL: f64 = 1e-15;
/// Columns whose squared norm falls below this fraction of `‖X‖_F²` are
/// rounding noise; rotating them against others never settles.
const NEGLIGIBLE_COLUMN: f64 = 1e-30;
const SMALL_VALUE_RATIO: f64 = 1e-13;

/// `X = left · diag(values) · rightᵀ` with `values` descending and
/// `left`, `right` having orthonormal columns. Thin form: `k = min(rows, cols)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSpectrum {
    pub values: Vec<f64>,
    pub left: Matrix,
    pub right: Matrix,
}

impl SingularSpectrum {
    pub fn reconstruct(&self) -> Matrix {
        let scaled = Matrix::from_fn(self.left.rows(), self.left.cols(), |i, j| {
            self.left[(i, j)] * self.values[j]
        });
        scaled
            .matmul(&self.right.transpose())
            .expect("thin factors have conforming shapes")
    }
}

pub fn svd(x: &Matrix) -> Result<SingularSpectrum> {
    if x.rows() >= x.cols() {
        let (values, left, right) = one_sided_jacobi(x, true)?;
        Ok(SingularSpectrum {
            values,
            left,
            right: right.expect("requested"),
        })
    } else {
        let (values, left, right) = one_sided_jacobi(&x.transpose(), true)?;
        Ok(SingularSpectrum {
            values,
            left: right.expect("requested"),
            right: left,
        })
    }
}

/// Singular values only, descending, length `min(rows, cols)`.
pub fn singular_values_of(x: &Matrix) -> Result<Vec<f64>> {
    let (values, _, _) = if x.rows() >= x.cols() {
        one_sided_jacobi(x, false)?
    } else {
        one_sided_jacobi(&x.transpose(), false)?
    };
    Ok(values)
}

/// Works on a tall (`m ≥ n`) matrix. Returns values, normalised left
/// vectors (m×n) and, if requested, the accumulated right rotations (n×n).
fn one_sided_jacobi(x: &Matrix, want_right: bool) -> Result<(Vec<f64>, Matrix, Option<Matrix>)> {
    let m = x.rows();
    let n = x.cols();
    // Columns stored contiguously: cols[j * m + i] = U[i, j].
    let mut cols: Vec<f64> = (0..n)
        .flat_map(|j| (0..m).map(move |i| (i, j)))
        .map(|(i, j)| x[(i, j)])
        .collect();
    let mut right: Option<Vec<f64>> = want_right.then(|| {
        let mut v = vec![0.0; n * n];
        for j in 0..n {
            v[j * n + j] = 1.0;
        }
        v
    });

    let total: f64 = cols.iter().map(|v| v * v).sum();
    let pair_tol = ORTHOGONALITY_TOL.max(m as f64 * f64::EPSILON);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let up = &cols[p * m..(p + 1) * m];
                    let uq = &cols[q * m..(q + 1) * m];
                    let mut a = 0.0;
                    let mut b = 0.0;
                    let mut g = 0.0;
                    for (&s, &t) in up.iter().zip(uq) {
                        a += s * s;
                        b += t * t;
                        g += s * t;
                    }
                    (a, b, g)
                };
                if gamma == 0.0
                    || gamma.abs() <= pair_tol * (alpha * beta).sqrt()
                    || alpha.min(beta) <= NEGLIGIBLE_COLUMN * total
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                rotate_columns(&mut cols, m, p, q, c, s);
                if let Some(v) = right.as_mut() {
                    rotate_columns(v, n, p, q, c, s);
                }
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::Convergence {
            algorithm: "one-sided jacobi svd",
            limit: MAX_SWEEPS,
        });
    }

    let norms: Vec<f64> = (0..n)
        .map(|j| {
            cols[j * m..(j + 1) * m]
                .iter()
                .map(|v| v * v)
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();

    if !want_right {
        return Ok((values, Matrix::zeros(1, 1), None));
    }

    let largest = values.first().copied().unwrap_or(0.0);
    let mut left = Matrix::zeros(m, n);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let sigma = norms[j];
        let raw: Vec<f64> = if sigma > 0.0 {
            cols[j * m..(j + 1) * m].iter().map(|v| v / sigma).collect()
        } else {
            vec![0.0; m]
        };
        let vector = if sigma > SMALL_VALUE_RATIO * largest && sigma > 0.0 {
            raw
        } else {
            complete_basis(raw, &basis, m)
        };
        for i in 0..m {
            left[(i, k)] = vector[i];
        }
        basis.push(vector);
    }
    let v = right.expect("requested");
    let right = Matrix::from_fn(n, n, |i, k| v[order[k] * n + i]);
    Ok((values, left, Some(right)))
}

fn rotate_columns(cols: &mut [f64], len: usize, p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q * len);
    let up = &mut head[p * len..(p + 1) * len];
    let uq = &mut tail[..len];
    for (a, b) in up.iter_mut().zip(uq.iter_mut()) {
        let x = *a;
        let y = *b;
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}

/// Orthonormalises `candidate` against `basis`, falling back to standard
/// basis vectors when the candidate is degenerate.
fn complete_basis(candidate: Vec<f64>, basis: &[Vec<f64>], m: usize) -> Vec<f64> {
    let project_out = |mut v: Vec<f64>| {
        for _ in 0..2 {
            for b in basis {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= d * y;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        (v, norm)
    };
    let (v, norm) = project_out(candidate);
    if norm > 0.5 {
        return v.into_iter().map(|x| x / norm).collect();
    }
    for e in 0..m {
        let mut unit = vec![0.0; m];
        unit[e] = 1.0;
        let (v, norm) = project_out(unit);
        if norm > 0.5 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
    unreachable!("fewer than m basis vectors always leave a standard direction")
}
