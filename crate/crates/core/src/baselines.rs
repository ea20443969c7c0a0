//! Convex comparator: principal component pursuit solved by inexact ALM.
//!
//! PCP decomposes `M` as `min |L|_* + lambda |S|_1 s.t. L + S = M`. The
//! inexact augmented Lagrangian iteration alternates singular-value
//! thresholding on `L` and entrywise soft thresholding on `S` with a
//! multiplier update, growing the penalty parameter geometrically.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::matrix::{self, Mat};
use crate::trace::SolveTrace;

/// Options for [`solve_pcp_ialm`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IalmOptions {
    /// Sparsity weight; the standard choice is `1/sqrt(max(m, n))`.
    pub lambda: f64,
    /// Stop when `|M - L - S|_F / |M|_F` falls to this value.
    pub tol: f64,
    pub max_iter: usize,
}

impl IalmOptions {
    pub fn standard(m: usize, n: usize) -> Self {
        IalmOptions {
            lambda: default_lambda(m, n),
            tol: 1e-7,
            max_iter: 500,
        }
    }
}

/// The standard PCP sparsity weight `1 / sqrt(max(m, n))`.
pub fn default_lambda(m: usize, n: usize) -> f64 {
    1.0 / (m.max(n) as f64).sqrt()
}

/// Result of a PCP solve.
#[derive(Debug, Clone)]
pub struct PcpResult {
    pub l_hat: Mat,
    pub s_hat: Mat,
    pub iterations: usize,
    pub converged: bool,
    /// `|M - L_hat - S_hat|_F / |M|_F`.
    pub primal_residual: f64,
    /// Per-iteration PCP objective, relative error against the supplied
    /// ground truth (NaN otherwise) and the SVT threshold `1/mu` in the
    /// step column.
    pub trace: SolveTrace,
}

/// Entrywise soft thresholding `sign(a) max(|a| - tau, 0)`.
pub fn soft_threshold(a: &Mat, tau: f64) -> Mat {
    a.map(|x| x.signum() * (x.abs() - tau).max(0.0))
}

/// Singular-value soft thresholding via a full SVD.
pub fn sv_threshold(a: &Mat, tau: f64) -> Result<Mat> {
    let svd = a
        .clone()
        .try_svd(true, true, f64::EPSILON, 10_000)
        .ok_or(CoreError::SvdFailure {
            rows: a.nrows(),
            cols: a.ncols(),
        })?;
    let u = svd.u.expect("compute_u");
    let vt = svd.v_t.expect("compute_v");
    let mut out = Mat::zeros(a.nrows(), a.ncols());
    for c in 0..svd.singular_values.len() {
        let s = svd.singular_values[c] - tau;
        if s > 0.0 {
            out += u.column(c) * (vt.row(c) * s);
        }
    }
    Ok(out)
}

fn nuclear_norm(a: &Mat) -> Result<f64> {
    let svd = a
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or(CoreError::SvdFailure {
            rows: a.nrows(),
            cols: a.ncols(),
        })?;
    Ok(svd.singular_values.iter().sum())
}

/// Inexact ALM for PCP.
///
/// Penalty schedule: `mu_0 = 1.25 / sigma_1(M)`, growth factor 1.5, capped
/// at `1e7 mu_0`. Iterates until the primal residual reaches `tol` or the
/// budget runs out (`converged = false` in that case).
pub fn solve_pcp_ialm(
    observed: &Mat,
    opts: &IalmOptions,
    ground_truth: Option<&Mat>,
) -> Result<PcpResult> {
    if !(opts.lambda > 0.0) || !opts.lambda.is_finite() {
        return Err(CoreError::invalid(format!(
            "solve_pcp_ialm: lambda must be positive and finite, got {}",
            opts.lambda
        )));
    }
    if opts.max_iter == 0 {
        return Err(CoreError::invalid("solve_pcp_ialm: max_iter must be >= 1"));
    }
    if let Some(l) = ground_truth {
        matrix::check_same_shape(observed, l, "solve_pcp_ialm: ground truth")?;
    }
    let norm_m = observed.norm();
    if norm_m == 0.0 {
        return Err(CoreError::invalid("solve_pcp_ialm: observed matrix is zero"));
    }

    let sigma1 = {
        let svd = observed
            .clone()
            .try_svd(false, false, f64::EPSILON, 10_000)
            .ok_or(CoreError::SvdFailure {
                rows: observed.nrows(),
                cols: observed.ncols(),
            })?;
        svd.singular_values[0]
    };
    let mu0 = 1.25 / sigma1;
    let mu_cap = 1e7 * mu0;
    let rho = 1.5;

    // Dual initialization M / max(sigma_1, |M|_inf / lambda) keeps the first
    // thresholding steps informative.
    let dual_scale = sigma1.max(matrix::linf_norm(observed) / opts.lambda);
    let mut dual = observed / dual_scale;

    let mut l_hat = Mat::zeros(observed.nrows(), observed.ncols());
    let mut s_hat = Mat::zeros(observed.nrows(), observed.ncols());
    let mut mu = mu0;
    let norm_l_opt = ground_truth.map(|l| l.norm());

    let mut trace = SolveTrace::with_capacity(opts.max_iter + 1);
    let rel_of = |l_hat: &Mat| match (ground_truth, norm_l_opt) {
        (Some(l), Some(nl)) => (l_hat - l).norm() / nl,
        _ => f64::NAN,
    };
    trace.push(0.0, rel_of(&l_hat), 1.0 / mu);

    let mut primal = 1.0;
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..opts.max_iter {
        iterations += 1;
        l_hat = sv_threshold(&(observed - &s_hat + &dual / mu), 1.0 / mu)?;
        s_hat = soft_threshold(&(observed - &l_hat + &dual / mu), opts.lambda / mu);
        let gap = observed - &l_hat - &s_hat;
        dual += mu * &gap;
        primal = gap.norm() / norm_m;
        let objective = nuclear_norm(&l_hat)? + opts.lambda * matrix::l1_norm(&s_hat);
        mu = (mu * rho).min(mu_cap);
        trace.push(objective, rel_of(&l_hat), 1.0 / mu);
        if primal <= opts.tol {
            converged = true;
            break;
        }
    }

    Ok(PcpResult {
        l_hat,
        s_hat,
        iterations,
        converged,
        primal_residual: primal,
        trace,
    })
}
