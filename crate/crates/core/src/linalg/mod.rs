//! Dense real linear algebra: arithmetic, symmetric eigendecomposition,
//! SVD, fractional powers, Schur products, determinants and seeded SPD
//! generation.

mod eig;
mod matrix;
mod power;
mod random;
mod svd;

pub use eig::{ensure_symmetric, is_psd, sym_eig, SymEig};
pub use matrix::{add, determinant, matmul, scale, schur_product, transpose, Matrix};
pub use power::{matrix_power, power_from_eig, PSD_CLAMP_RATIO};
pub use random::{random_gaussian, random_orthogonal, random_spd, SeededRng};
pub use svd::{singular_values_of, svd, SingularSpectrum};
