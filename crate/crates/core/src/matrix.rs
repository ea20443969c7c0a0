//! Small dense-matrix helpers on top of `nalgebra`.

use nalgebra::DMatrix;

use crate::error::{CoreError, Result};

/// Dense column-major `f64` matrix used throughout the crate.
pub type Mat = DMatrix<f64>;

/// Boolean support mask with the same shape as the matrix it refers to.
pub type Mask = DMatrix<bool>;

/// Sum of absolute entries (vectorized l1 norm).
pub fn l1_norm(a: &Mat) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}

/// Largest absolute entry (vectorized l-infinity norm). Zero for empty input.
pub fn linf_norm(a: &Mat) -> f64 {
    a.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Elementwise sign with `sign(0) = 0`.
pub fn sign(a: &Mat) -> Mat {
    a.map(|x| {
        if x > 0.0 {
            1.0
        } else if x < 0.0 {
            -1.0
        } else {
            0.0
        }
    })
}

/// Entries restricted to the mask; everything else zeroed.
pub fn restrict(a: &Mat, mask: &Mask) -> Mat {
    a.zip_map(mask, |x, keep| if keep { x } else { 0.0 })
}

/// Entries off the mask; masked entries zeroed.
pub fn restrict_complement(a: &Mat, mask: &Mask) -> Mat {
    a.zip_map(mask, |x, drop| if drop { 0.0 } else { x })
}

/// l1 norm of the masked entries only.
pub fn l1_norm_on(a: &Mat, mask: &Mask) -> f64 {
    a.iter()
        .zip(mask.iter())
        .filter(|(_, keep)| **keep)
        .map(|(x, _)| x.abs())
        .sum()
}

pub(crate) fn check_same_shape(a: &Mat, b: &Mat, what: &str) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(CoreError::invalid(format!(
            "{what}: shape mismatch {}x{} vs {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(())
}

/// Largest deviation of `U^T U` from the identity.
pub fn orthonormality_defect(u: &Mat) -> f64 {
    let gram = u.transpose() * u;
    let mut defect = 0.0f64;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((gram[(i, j)] - target).abs());
        }
    }
    defect
}

pub(crate) fn check_orthonormal(u: &Mat, tol: f64, what: &str) -> Result<()> {
    let defect = orthonormality_defect(u);
    if defect > tol {
        return Err(CoreError::precondition(format!(
            "{what} does not have orthonormal columns: deviation {defect:.3e} > {tol:.1e}"
        )));
    }
    Ok(())
}
