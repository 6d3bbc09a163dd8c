use crate::error::{Error, Result};
use crate::linalg::{sym_eig, Matrix, SymEig};

/// Relative eigenvalue floor below which a PSD matrix counts as singular.
pub const PSD_CLAMP_RATIO: f64 = 1e-12;

/// Real power `A^t` of a symmetric positive semidefinite matrix.
///
/// Eigenvalues down to `−1e-12·λ_max` are clamped to zero for `t ≥ 0`;
/// negative powers need `λ_min > 1e-12·λ_max`.
pub fn matrix_power(a: &Matrix, t: f64) -> Result<Matrix> {
    let eig = sym_eig(a)?;
    power_from_eig(&eig, t)
}

pub fn power_from_eig(eig: &SymEig, t: f64) -> Result<Matrix> {
    let lmax = eig.max().max(0.0);
    let lmin = eig.min();
    if lmin < -PSD_CLAMP_RATIO * lmax || (lmax == 0.0 && lmin < 0.0) {
        return Err(Error::NotPsd {
            min_eigenvalue: lmin,
        });
    }
    if t < 0.0 && lmin <= PSD_CLAMP_RATIO * lmax {
        return Err(Error::Singular {
            min_eigenvalue: lmin,
            power: t,
        });
    }
    if t == 0.0 {
        return Ok(Matrix::identity(eig.dim()));
    }
    Ok(eig.apply(|l| l.max(0.0).powf(t)))
}
