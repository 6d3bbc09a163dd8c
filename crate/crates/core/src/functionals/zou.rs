use serde::Serialize;

use crate::linalg::{is_psd, sym_eig, Matrix};

use super::{term, CheckResult, Params};

pub const ZOU_NU: f64 = 0.42;
pub const ZOU_POINTS: [f64; 3] = [1.7006, 0.0, 0.8047];

const PSD_TOL: f64 = 1e-10;

/// Kernel matrix `cosh((1−2ν)(xᵢ−xⱼ)) / (2ν + (1−2ν)cosh(xᵢ−xⱼ))`.
pub fn zou_kernel(nu: f64, xs: &[f64]) -> Matrix {
    let beta = 1.0 - 2.0 * nu;
    Matrix::from_fn(xs.len(), xs.len(), |i, j| {
        let d = xs[i] - xs[j];
        (beta * d).cosh() / (2.0 * nu + beta * d.cosh())
    })
}

/// The 3×3 kernel matrix at `ν = 0.42` whose determinant is negative.
#[derive(Clone, Debug, Serialize)]
pub struct ZouCounterexample {
    pub matrix: Vec<Vec<f64>>,
    pub determinant: f64,
    pub psd: bool,
    pub min_eigenvalue: f64,
}

impl ZouCounterexample {
    pub fn as_matrix(&self) -> Matrix {
        Matrix::from_rows(&self.matrix).expect("stored rows are square")
    }

    /// As a chain `0 ≤ λ_min`; it is expected to fail.
    pub fn as_check(&self) -> CheckResult {
        let params: Params = [
            ("nu", ZOU_NU.into()),
            ("determinant", self.determinant.into()),
        ]
        .into_iter()
        .collect();
        CheckResult::new(
            "zou",
            vec![term("0", 0.0), term("min eigenvalue", self.min_eigenvalue)],
            params,
        )
    }
}

pub fn zou_counterexample() -> ZouCounterexample {
    let m = zou_kernel(ZOU_NU, &ZOU_POINTS);
    let determinant = m.determinant().expect("kernel matrix is square");
    let min_eigenvalue = sym_eig(&m).expect("kernel matrix is symmetric").min();
    let psd = is_psd(&m, PSD_TOL).expect("kernel matrix is symmetric");
    ZouCounterexample {
        matrix: (0..m.rows()).map(|i| m.row(i).to_vec()).collect(),
        determinant,
        psd,
        min_eigenvalue,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_the_negative_determinant() {
        let z = zou_counterexample();
        let m = z.as_matrix();
        for (i, j, want) in [(0, 1, 0.8023), (0, 2, 0.9454), (1, 2, 0.9560)] {
            assert!((m[(i, j)] - want).abs() < 5e-5, "({i},{j}) = {}", m[(i, j)]);
            assert_eq!(m[(i, j)], m[(j, i)]);
        }
        assert!(m.diagonal().iter().all(|&d| d == 1.0));
        assert!((z.determinant + 0.0012).abs() < 5e-4);
        assert!(z.determinant < 0.0);
        assert!(!z.psd);
        assert!(z.min_eigenvalue < 0.0);
        assert!(!z.as_check().passed);
    }

    #[test]
    fn kernel_at_half_is_all_ones() {
        let m = zou_kernel(0.5, &[0.3, -1.0, 2.0]);
        assert!(m.as_slice().iter().all(|&v| v == 1.0));
    }
}
