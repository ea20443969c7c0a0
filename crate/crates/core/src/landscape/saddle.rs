//! Explicit strict-saddle descent directions at true factorizations in the
//! overparameterized regime `k > r`.
//!
//! The construction works in reduced coordinates that expose the kernels of
//! the factors: with orthogonal `U_X`, `U_Y` aligning `X* U_X = [X1 0]` and
//! `Y* U_Y = [Y1 0]`, the overlap `R22` of the kernel blocks of
//! `R = U_Y^T U_X` is nonzero, and a rank-one perturbation built from its
//! top singular pair decreases the objective exactly quadratically:
//! `f(X* + tH, Y* + tK) = f(X*, Y*) - gamma t^2` for `t` up to
//! `t0 = sqrt(|S_ij| / gamma)`, where `gamma` is half the operator norm of
//! `P_X P_Y` (the kernel projectors) and `(i, j)` is any corrupted entry.

use nalgebra::DVector;

use crate::error::{CoreError, Result};
use crate::matrix::{self, Mat};
use crate::model::FactorPair;

/// A unit-norm direction of exact quadratic descent.
#[derive(Debug, Clone)]
pub struct SaddleDirection {
    /// Perturbation of `X*`, `m x k`.
    pub h: Mat,
    /// Perturbation of `Y*`, `n x k`.
    pub k: Mat,
    /// Quadratic decrease coefficient, `gamma = |P_X P_Y|_op / 2 > 0`.
    pub gamma: f64,
    /// Validity horizon of the exact identity.
    pub t0: f64,
    /// The corrupted entry the construction pivots on.
    pub pivot: (usize, usize),
}

const RANK_DETECT_REL_TOL: f64 = 1e-10;

struct FullRightFactor {
    /// Full k x k right singular matrix.
    q: Mat,
    rank: usize,
    values: DVector<f64>,
}

fn right_factor(a: &Mat) -> Result<FullRightFactor> {
    let svd = a
        .clone()
        .try_svd(false, true, f64::EPSILON, 10_000)
        .ok_or(CoreError::SvdFailure {
            rows: a.nrows(),
            cols: a.ncols(),
        })?;
    let values = svd.singular_values.clone();
    let rank = values
        .iter()
        .filter(|s| **s > RANK_DETECT_REL_TOL * values[0])
        .count();
    Ok(FullRightFactor {
        q: svd.v_t.expect("compute_v").transpose(),
        rank,
        values,
    })
}

/// [`saddle_direction`] with the default pivot: the first corrupted entry in
/// row-major order.
pub fn saddle_direction(x_star: &Mat, y_star: &Mat, s: &Mat) -> Result<SaddleDirection> {
    saddle_direction_with_pivot(x_star, y_star, s, None)
}

/// Construct the descent direction, pivoting on the given corrupted entry
/// (or the first one in row-major order when `None`).
pub fn saddle_direction_with_pivot(
    x_star: &Mat,
    y_star: &Mat,
    s: &Mat,
    pivot: Option<(usize, usize)>,
) -> Result<SaddleDirection> {
    let (m, n) = (x_star.nrows(), y_star.nrows());
    let k = x_star.ncols();
    if y_star.ncols() != k {
        return Err(CoreError::invalid(
            "saddle_direction: factors must share the column count",
        ));
    }
    if s.nrows() != m || s.ncols() != n {
        return Err(CoreError::invalid(format!(
            "saddle_direction: S is {}x{}, expected {m}x{n}",
            s.nrows(),
            s.ncols()
        )));
    }

    let fx = right_factor(x_star)?;
    let fy = right_factor(y_star)?;
    if fx.rank != fy.rank {
        return Err(CoreError::precondition(format!(
            "saddle_direction: factor ranks disagree ({} vs {})",
            fx.rank, fy.rank
        )));
    }
    let r = fx.rank;
    if r >= k {
        return Err(CoreError::precondition(format!(
            "saddle_direction: requires overparameterization k > rank, got k = {k}, rank = {r}"
        )));
    }

    let pivot = match pivot {
        Some((i, j)) => {
            if i >= m || j >= n {
                return Err(CoreError::invalid(format!(
                    "saddle_direction: pivot ({i},{j}) outside {m}x{n}"
                )));
            }
            if s[(i, j)] == 0.0 {
                return Err(CoreError::invalid(format!(
                    "saddle_direction: pivot ({i},{j}) is not a corrupted entry"
                )));
            }
            (i, j)
        }
        None => {
            let mut found = None;
            'outer: for i in 0..m {
                for j in 0..n {
                    if s[(i, j)] != 0.0 {
                        found = Some((i, j));
                        break 'outer;
                    }
                }
            }
            found.ok_or_else(|| CoreError::invalid("saddle_direction: S is identically zero"))?
        }
    };
    let (pi, pj) = pivot;
    let s_sign = s[(pi, pj)].signum();

    // Kernel-block overlap: R = U_Y^T U_X, R22 its lower-right corner.
    let u_x = fx.q;
    let u_y = fy.q;
    let r_mat = u_y.transpose() * &u_x;
    let kr = k - r;
    let r22 = r_mat.view((r, r), (kr, kr)).into_owned();
    let svd22 = r22
        .clone()
        .try_svd(true, true, f64::EPSILON, 10_000)
        .ok_or(CoreError::SvdFailure { rows: kr, cols: kr })?;
    let sigma_max = svd22.singular_values[0];
    if sigma_max <= 1e-12 {
        // The kernel overlap is provably nonzero when k > r; hitting this
        // signals rank misdetection upstream.
        return Err(CoreError::Numeric(format!(
            "saddle_direction: kernel overlap is numerically zero (|R22|_op = {sigma_max:.3e}); \
             sigma tail of X*: {:.3e}, of Y*: {:.3e}",
            fx.values[k - 1],
            fy.values[k - 1]
        )));
    }
    let w = svd22.v_t.as_ref().expect("compute_v").row(0).transpose();
    let z = (&r22 * &w) / (sigma_max * sigma_max);

    let alpha = sigma_max / 2.0f64.sqrt();
    let beta = 1.0 / 2.0f64.sqrt();

    // Reduced coordinates [0 H2], [0 K2] mapped back through U_Y, U_X.
    let mut h_red = Mat::zeros(m, k);
    for c in 0..kr {
        h_red[(pi, r + c)] = alpha * s_sign * z[c];
    }
    let mut k_red = Mat::zeros(n, k);
    for c in 0..kr {
        k_red[(pj, r + c)] = beta * w[c];
    }
    let h = h_red * u_y.transpose();
    let k_dir = k_red * u_x.transpose();

    let gamma = alpha * beta;
    let t0 = (s[(pi, pj)].abs() / gamma).sqrt();

    let dir = SaddleDirection {
        h,
        k: k_dir,
        gamma,
        t0,
        pivot,
    };
    verify_direction(&dir, x_star, y_star, s_sign)?;
    Ok(dir)
}

/// Internal consistency checks on the constructed direction: unit norm,
/// first-order product invariance, and the rank-one second-order form.
fn verify_direction(
    dir: &SaddleDirection,
    x_star: &Mat,
    y_star: &Mat,
    s_sign: f64,
) -> Result<()> {
    let norm_sq = dir.h.norm_squared() + dir.k.norm_squared();
    if (norm_sq - 1.0).abs() > 1e-12 {
        return Err(CoreError::Numeric(format!(
            "saddle_direction: |H|^2 + |K|^2 = {norm_sq}, expected 1"
        )));
    }
    let first_order = &dir.h * y_star.transpose() + x_star * dir.k.transpose();
    if matrix::linf_norm(&first_order) > 1e-10 {
        return Err(CoreError::Numeric(format!(
            "saddle_direction: first-order product change is {:.3e}",
            matrix::linf_norm(&first_order)
        )));
    }
    let mut second_order = &dir.h * dir.k.transpose();
    second_order[dir.pivot] -= dir.gamma * s_sign;
    if matrix::linf_norm(&second_order) > 1e-10 {
        return Err(CoreError::Numeric(format!(
            "saddle_direction: H K^T deviates from the rank-one form by {:.3e}",
            matrix::linf_norm(&second_order)
        )));
    }
    Ok(())
}

/// Half the operator norm of `P_X P_Y` computed directly from orthonormal
/// kernel bases of the factors. Used to cross-check `gamma` by an
/// independent route.
pub fn kernel_overlap_gamma(x_star: &Mat, y_star: &Mat) -> Result<f64> {
    let fx = right_factor(x_star)?;
    let fy = right_factor(y_star)?;
    let k = x_star.ncols();
    if fx.rank >= k || fy.rank >= k {
        return Err(CoreError::precondition(
            "kernel_overlap_gamma: factors have trivial kernels",
        ));
    }
    let n_x = fx.q.columns(fx.rank, k - fx.rank).into_owned();
    let n_y = fy.q.columns(fy.rank, k - fy.rank).into_owned();
    let overlap = n_y.transpose() * &n_x;
    let svd = overlap
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or(CoreError::SvdFailure {
            rows: overlap.nrows(),
            cols: overlap.ncols(),
        })?;
    Ok(0.5 * svd.singular_values[0])
}

impl SaddleDirection {
    /// The perturbed pair `(X* + tH, Y* + tK)`.
    pub fn perturbed(&self, x_star: &Mat, y_star: &Mat, t: f64) -> FactorPair {
        FactorPair {
            x: x_star + t * &self.h,
            y: y_star + t * &self.k,
        }
    }
}
