//! Seeded instance generation.
//!
//! All randomness comes from `ChaCha8Rng` seeded with a 64-bit integer.
//! Uniform draws take the top 53 bits of `next_u64`; Gaussian draws use
//! the Box–Muller transform on pairs of uniforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{range_error, Result};
use crate::linalg::Matrix;

pub struct SeededRng {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.gen::<u64>() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 - u lies in (0, 1], so the log is finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| self.gaussian())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.gen()
    }
}

/// Standard-Gaussian `rows × cols` matrix from `seed`.
pub fn random_gaussian(rows: usize, cols: usize, seed: u64) -> Matrix {
    SeededRng::new(seed).gaussian_matrix(rows, cols)
}

/// Orthogonal factor of the QR decomposition of a seeded Gaussian matrix,
/// with column signs fixed so that `R` has a positive diagonal.
pub fn random_orthogonal(n: usize, seed: u64) -> Matrix {
    let mut rng = SeededRng::new(seed);
    loop {
        let g = rng.gaussian_matrix(n, n);
        if let Some(q) = gram_schmidt(&g) {
            return q;
        }
    }
}

/// Modified Gram–Schmidt with one re-orthogonalisation pass. `None` if the
/// columns are numerically dependent.
fn gram_schmidt(g: &Matrix) -> Option<Matrix> {
    let n = g.rows();
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(g.cols());
    for j in 0..g.cols() {
        let mut v = g.column(j);
        let original = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for _ in 0..2 {
            for b in &q {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= d * y;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 1e-8 * original) {
            return None;
        }
        q.push(v.into_iter().map(|x| x / norm).collect());
    }
    Some(Matrix::from_fn(n, q.len(), |i, j| q[j][i]))
}

/// `Q diag(λ) Qᵀ` with `λᵢ ~ U[m, M]` and `Q` a seeded random orthogonal
/// matrix. Deterministic in `(n, m, M, seed)`.
pub fn random_spd(n: usize, m: f64, big_m: f64, seed: u64) -> Result<Matrix> {
    if n == 0 {
        return Err(range_error("random_spd: dimension must be positive"));
    }
    if !(m > 0.0 && m <= big_m && big_m.is_finite()) {
        return Err(range_error(format!(
            "random_spd: need 0 < m <= M, got m = {m}, M = {big_m}"
        )));
    }
    let mut rng = SeededRng::new(seed);
    let spectrum: Vec<f64> = (0..n).map(|_| rng.uniform_in(m, big_m)).collect();
    let q = random_orthogonal(n, rng.next_u64());
    let scaled = Matrix::from_fn(n, n, |i, j| q[(i, j)] * spectrum[j]);
    Ok(scaled
        .matmul(&q.transpose())
        .expect("square factors")
        .symmetrized())
}
