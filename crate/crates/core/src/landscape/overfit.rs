//! The column-zeroing counterexample to global optimality.
//!
//! For any nonzero column `j` of `L`, the corruption `S = -L e_j e_j^T`
//! (supported on that column) leaves `M = L + S` of rank at most `r`, so an
//! exact factorization fits `M` with objective zero — strictly below the
//! objective `|S|_1` attained at the ground truth. True factorizations are
//! therefore not global minimizers for adversarial sparse corruptions.

use crate::error::{CoreError, Result};
use crate::matrix::{self, Mask, Mat};
use crate::model::FactorPair;
use crate::subgrad::objective;

/// Outcome of the construction.
#[derive(Debug, Clone)]
pub struct OverfitReport {
    /// Objective value at the ground truth, `|S|_1 = |L e_j|_1`.
    pub s_l1: f64,
    /// Objective of the exact-fit witness on `M` (zero up to roundoff).
    pub witness_objective: f64,
    /// Numerical rank of the corrupted observation.
    pub rank_m: usize,
    pub column: usize,
    /// Exact-fit factors of `M`, zero-padded to width `k`.
    pub witness: FactorPair,
    /// The corrupted observation `M = L + S`.
    pub observed: Mat,
    /// The adversarial sparse part.
    pub s: Mat,
    /// Its support (the nonzero entries of column `j`).
    pub omega: Mask,
}

/// Build the counterexample for column `column` of `l` and factor the
/// corrupted observation exactly with rank at most `r` and width `k >= r`.
pub fn overfit_demo(l: &Mat, r: usize, k: usize, column: usize) -> Result<OverfitReport> {
    let (m, n) = (l.nrows(), l.ncols());
    if column >= n {
        return Err(CoreError::invalid(format!(
            "overfit_demo: column {column} outside 0..{n}"
        )));
    }
    if k < r || k > m.min(n) {
        return Err(CoreError::invalid(format!(
            "overfit_demo: k = {k} must lie in [{r}, {}]",
            m.min(n)
        )));
    }
    let col = l.column(column);
    if col.iter().all(|x| *x == 0.0) {
        return Err(CoreError::invalid(format!(
            "overfit_demo: column {column} of L is zero"
        )));
    }

    let mut s = Mat::zeros(m, n);
    let mut omega = Mask::from_element(m, n, false);
    for i in 0..m {
        let v = col[i];
        if v != 0.0 {
            s[(i, column)] = -v;
            omega[(i, column)] = true;
        }
    }
    // Column `column` cancels exactly: L_ij + (-L_ij) = 0 in floating point.
    let observed = l + &s;
    let s_l1 = matrix::l1_norm(&s);

    let svd = observed
        .clone()
        .try_svd(true, true, f64::EPSILON, 10_000)
        .ok_or(CoreError::SvdFailure { rows: m, cols: n })?;
    let values = &svd.singular_values;
    let rank_m = values
        .iter()
        .filter(|sv| **sv > 1e-12 * values[0])
        .count();
    if rank_m > r {
        return Err(CoreError::Numeric(format!(
            "overfit_demo: corrupted observation has rank {rank_m} > r = {r}"
        )));
    }
    let u = svd.u.as_ref().expect("compute_u");
    let vt = svd.v_t.as_ref().expect("compute_v");
    let mut x = Mat::zeros(m, k);
    let mut y = Mat::zeros(n, k);
    for c in 0..rank_m {
        let root = values[c].sqrt();
        x.column_mut(c).copy_from(&(u.column(c) * root));
        y.column_mut(c).copy_from(&(vt.row(c).transpose() * root));
    }
    let witness = FactorPair::new(x, y)?;
    let witness_objective = objective(&witness, &observed)?;

    Ok(OverfitReport {
        s_l1,
        witness_objective,
        rank_m,
        column,
        witness,
        observed,
        s,
        omega,
    })
}
