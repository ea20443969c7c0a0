//! Directional growth probes at exact factorizations when `k = r`.
//!
//! In the exactly parameterized regime true factorizations are sharp local
//! minima: the objective grows at least linearly along directions normal to
//! the solution set, with slope bounded below by
//! `(eps / 8) * min(sigma_r(X*), sigma_r(Y*))`. The probe samples random
//! directions in the normal space (tangent components removed by solving
//! the r x r Sylvester normal equations) and measures the growth ratio
//! `(f(X* + tH, Y* + tK) - f*) / t` on a grid of `t` values.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::matrix::Mat;
use crate::model::FactorPair;
use crate::rng::{gaussian_matrix, mix_seed, rng_from_seed};
use crate::subgrad::objective;

/// Options for [`sharpness_probe`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SharpnessOptions {
    /// Margin estimate from the certificate sweep; only enters the reported
    /// floor, not the measurement.
    pub eps_hat: f64,
    pub n_directions: usize,
    /// Offsets along each direction; ratios are reported at the smallest.
    pub t_grid: Vec<f64>,
    pub seed: u64,
}

/// Measured growth ratios and the theoretical floor they are compared to.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SharpnessReport {
    /// Smallest growth ratio over all sampled directions at the smallest t.
    pub min_ratio: f64,
    /// Mean growth ratio at the smallest t.
    pub mean_ratio: f64,
    /// `(eps_hat / 8) * sigma_min`.
    pub floor: f64,
    /// `min(sigma_r(X*), sigma_r(Y*))`.
    pub sigma_min: f64,
    pub eps_hat: f64,
    pub n_directions: usize,
    pub t_grid: Vec<f64>,
    /// Minimum ratio across directions per grid offset.
    pub min_ratio_per_t: Vec<f64>,
}

fn smallest_singular_value(a: &Mat) -> Result<f64> {
    let svd = a
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or(CoreError::SvdFailure {
            rows: a.nrows(),
            cols: a.ncols(),
        })?;
    Ok(svd.singular_values[svd.singular_values.len() - 1])
}

/// Remove the tangent component of `(H, K)` at `(X*, Y*)`: the tangent
/// space of the solution set is `{(X* A, -Y* A^T)}`, and the best `A` solves
/// `(X*^T X*) A + A (Y*^T Y*) = X*^T H - K^T Y*`.
fn project_normal(h: &Mat, k: &Mat, x_star: &Mat, y_star: &Mat) -> Result<(Mat, Mat)> {
    let r = x_star.ncols();
    let xtx = x_star.transpose() * x_star;
    let yty = y_star.transpose() * y_star;
    let rhs = x_star.transpose() * h - k.transpose() * y_star;
    // Sylvester solve by vectorization (column-major stacking):
    // (I (x) XtX + YtY^T (x) I) vec(A) = vec(rhs).
    let dim = r * r;
    let mut sys = Mat::zeros(dim, dim);
    for col_a in 0..r {
        for row_a in 0..r {
            let row = col_a * r + row_a;
            for i in 0..r {
                // (XtX A)_{row_a, col_a} couples A_{i, col_a}.
                sys[(row, col_a * r + i)] += xtx[(row_a, i)];
                // (A YtY)_{row_a, col_a} couples A_{row_a, i}.
                sys[(row, i * r + row_a)] += yty[(i, col_a)];
            }
        }
    }
    let mut b = DVector::zeros(dim);
    for col_a in 0..r {
        for row_a in 0..r {
            b[col_a * r + row_a] = rhs[(row_a, col_a)];
        }
    }
    let sol = sys
        .lu()
        .solve(&b)
        .ok_or_else(|| CoreError::Numeric("sharpness_probe: singular normal equations".into()))?;
    let mut a = Mat::zeros(r, r);
    for col_a in 0..r {
        for row_a in 0..r {
            a[(row_a, col_a)] = sol[col_a * r + row_a];
        }
    }
    Ok((h - x_star * &a, k + y_star * a.transpose()))
}

/// Probe directional growth of the objective in the normal space at an
/// exact factorization with `k = r`.
pub fn sharpness_probe(
    x_star: &Mat,
    y_star: &Mat,
    observed: &Mat,
    opts: &SharpnessOptions,
) -> Result<SharpnessReport> {
    let k = x_star.ncols();
    if y_star.ncols() != k {
        return Err(CoreError::invalid(
            "sharpness_probe: factors must share the column count",
        ));
    }
    if !(opts.eps_hat > 0.0 && opts.eps_hat < 1.0) {
        return Err(CoreError::invalid(format!(
            "sharpness_probe: eps_hat must lie in (0,1), got {}",
            opts.eps_hat
        )));
    }
    if opts.n_directions == 0 {
        return Err(CoreError::invalid("sharpness_probe: n_directions must be >= 1"));
    }
    if opts.t_grid.is_empty() || opts.t_grid.iter().any(|t| !(*t > 0.0)) {
        return Err(CoreError::invalid(
            "sharpness_probe: t_grid must be nonempty and positive",
        ));
    }
    let sx = smallest_singular_value(x_star)?;
    let sy = smallest_singular_value(y_star)?;
    let sigma_min = sx.min(sy);
    // k = r is required: with k > rank the smallest singular value vanishes
    // and the solution set is not a sharp minimum.
    let sx_max = x_star.norm();
    if sigma_min <= 1e-10 * sx_max {
        return Err(CoreError::invalid(format!(
            "sharpness_probe: factors are rank deficient (sigma_min = {sigma_min:.3e}); requires k = r"
        )));
    }

    let mut t_grid = opts.t_grid.clone();
    t_grid.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let pair_star = FactorPair::new(x_star.clone(), y_star.clone())?;
    let f_star = objective(&pair_star, observed)?;

    let (m, n) = (x_star.nrows(), y_star.nrows());
    let mut rng = rng_from_seed(mix_seed(opts.seed, &[6]));
    let mut min_per_t = vec![f64::INFINITY; t_grid.len()];
    let mut sum_at_smallest = 0.0;
    let mut sampled = 0;
    while sampled < opts.n_directions {
        let h0 = gaussian_matrix(&mut rng, m, k, 1.0);
        let k0 = gaussian_matrix(&mut rng, n, k, 1.0);
        let (h, kk) = project_normal(&h0, &k0, x_star, y_star)?;
        let norm = (h.norm_squared() + kk.norm_squared()).sqrt();
        if norm < 1e-12 {
            continue; // degenerate draw, next one
        }
        let (h, kk) = (h / norm, kk / norm);
        sampled += 1;
        for (ti, &t) in t_grid.iter().enumerate() {
            let pair = FactorPair::new(x_star + t * &h, y_star + t * &kk)?;
            let ratio = (objective(&pair, observed)? - f_star) / t;
            min_per_t[ti] = min_per_t[ti].min(ratio);
            if ti == 0 {
                sum_at_smallest += ratio;
            }
        }
    }

    Ok(SharpnessReport {
        min_ratio: min_per_t[0],
        mean_ratio: sum_at_smallest / opts.n_directions as f64,
        floor: opts.eps_hat / 8.0 * sigma_min,
        sigma_min,
        eps_hat: opts.eps_hat,
        n_directions: opts.n_directions,
        t_grid,
        min_ratio_per_t: min_per_t,
    })
}
