//! The l1 objective, its Clarke subgradient selection, and the subgradient
//! descent loop.
//!
//! The objective is `f(X, Y) = |X Y^T - M|_1`. A subgradient is obtained
//! from the chain rule as `(Lambda Y, Lambda^T X)` where `Lambda` is an
//! elementwise sign selection of the residual; at kinks (zero residual
//! entries) this implementation selects zero, the minimum-norm choice.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::matrix::{self, Mat};
use crate::model::{Dims, FactorPair};
use crate::rng::{gaussian_matrix, rng_from_seed};
use crate::trace::SolveTrace;

/// Step-size schedule for the descent loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum StepSchedule {
    /// Fixed step `eta0`.
    Constant { eta0: f64 },
    /// `eta_t = eta0 * decay^t` with `0 < decay < 1`.
    Geometric { eta0: f64, decay: f64 },
    /// Multiply the step by `factor` whenever the objective has not improved
    /// on its running best for `patience` consecutive iterations.
    AdaptiveHalving {
        eta0: f64,
        patience: usize,
        factor: f64,
    },
}

impl StepSchedule {
    /// The adaptive schedule with the halving parameters used throughout:
    /// patience 10, factor 0.5.
    pub fn adaptive(eta0: f64) -> Self {
        StepSchedule::AdaptiveHalving {
            eta0,
            patience: 10,
            factor: 0.5,
        }
    }

    pub fn eta0(&self) -> f64 {
        match self {
            StepSchedule::Constant { eta0 }
            | StepSchedule::Geometric { eta0, .. }
            | StepSchedule::AdaptiveHalving { eta0, .. } => *eta0,
        }
    }

    fn validate(&self) -> Result<()> {
        let eta0 = self.eta0();
        if !(eta0 > 0.0) || !eta0.is_finite() {
            return Err(CoreError::invalid(format!(
                "step schedule: eta0 must be positive and finite, got {eta0}"
            )));
        }
        match *self {
            StepSchedule::Geometric { decay, .. } => {
                if !(decay > 0.0 && decay < 1.0) {
                    return Err(CoreError::invalid(format!(
                        "step schedule: decay must lie in (0,1), got {decay}"
                    )));
                }
            }
            StepSchedule::AdaptiveHalving {
                patience, factor, ..
            } => {
                if patience == 0 {
                    return Err(CoreError::invalid("step schedule: patience must be >= 1"));
                }
                if !(factor > 0.0 && factor < 1.0) {
                    return Err(CoreError::invalid(format!(
                        "step schedule: factor must lie in (0,1), got {factor}"
                    )));
                }
            }
            StepSchedule::Constant { .. } => {}
        }
        Ok(())
    }
}

/// Options for [`solve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub schedule: StepSchedule,
    /// Standard deviation of the Gaussian initialization.
    pub init_scale: f64,
    pub max_iters: usize,
    /// Stop once the relative error against the supplied ground truth falls
    /// to this value. Ignored when no ground truth is given.
    pub target_rel_err: Option<f64>,
    /// Normalize the subgradient to unit Frobenius norm before stepping
    /// (Polyak-style direction). Off by default: raw subgradient steps.
    pub normalized_steps: bool,
    pub seed: u64,
}

impl SolveOptions {
    /// Defaults calibrated for the synthetic model: adaptive halving from
    /// `eta0 = 1e-2 |M|_F / (m n)`, small Gaussian initialization of scale
    /// `1e-3 |M|_F / sqrt(m n k)`.
    pub fn calibrated(observed: &Mat, k: usize, seed: u64) -> Self {
        SolveOptions {
            schedule: StepSchedule::adaptive(default_eta0(observed)),
            init_scale: default_init_scale(observed, k),
            max_iters: 20_000,
            target_rel_err: None,
            normalized_steps: false,
            seed,
        }
    }
}

/// Calibrated default initial step for raw subgradient steps.
pub fn default_eta0(observed: &Mat) -> f64 {
    1e-2 * observed.norm() / (observed.nrows() * observed.ncols()) as f64
}

/// Calibrated default initialization scale ("small initialization").
pub fn default_init_scale(observed: &Mat, k: usize) -> f64 {
    1e-3 * observed.norm() / ((observed.nrows() * observed.ncols() * k) as f64).sqrt()
}

/// How the descent loop terminated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    /// Relative error reached the requested target.
    ReachedTarget,
    /// Iteration budget exhausted.
    MaxIters,
    /// Objective exceeded `1e6` times its initial value; the run was aborted.
    Diverged,
}

/// Result of a descent run.
#[derive(Debug, Clone)]
pub struct Solution {
    pub pair: FactorPair,
    pub trace: SolveTrace,
    pub status: SolveStatus,
}

/// `f(X, Y) = |X Y^T - M|_1`.
pub fn objective(pair: &FactorPair, observed: &Mat) -> Result<f64> {
    pair.check_dims(observed.nrows(), observed.ncols())?;
    Ok(matrix::l1_norm(&(pair.product() - observed)))
}

/// The Clarke subgradient selection `(Lambda Y, Lambda^T X)` with
/// `Lambda = sign(X Y^T - M)` and `sign(0) = 0`.
pub fn subgradient(pair: &FactorPair, observed: &Mat) -> Result<(Mat, Mat)> {
    pair.check_dims(observed.nrows(), observed.ncols())?;
    let lambda = matrix::sign(&(pair.product() - observed));
    Ok((&lambda * &pair.y, lambda.transpose() * &pair.x))
}

/// Subgradient descent on the factorized l1 objective from small random
/// initialization.
///
/// Records the objective, the relative error `|X Y^T - L|_F / |L|_F` when a
/// ground truth `L` is supplied (NaN otherwise) and the step size at every
/// iteration, including the initial state. Aborts with
/// [`SolveStatus::Diverged`] if the objective blows up past `1e6` times its
/// initial value.
pub fn solve(
    observed: &Mat,
    dims: &Dims,
    opts: &SolveOptions,
    ground_truth: Option<&Mat>,
) -> Result<Solution> {
    if observed.nrows() != dims.m || observed.ncols() != dims.n {
        return Err(CoreError::invalid(format!(
            "solve: observed matrix is {}x{}, dims say {}x{}",
            observed.nrows(),
            observed.ncols(),
            dims.m,
            dims.n
        )));
    }
    if opts.max_iters == 0 {
        return Err(CoreError::invalid("solve: max_iters must be >= 1"));
    }
    if !(opts.init_scale > 0.0) || !opts.init_scale.is_finite() {
        return Err(CoreError::invalid(format!(
            "solve: init_scale must be positive and finite, got {}",
            opts.init_scale
        )));
    }
    opts.schedule.validate()?;
    if let Some(l) = ground_truth {
        matrix::check_same_shape(observed, l, "solve: ground truth")?;
    }

    let mut rng = rng_from_seed(opts.seed);
    let mut x = gaussian_matrix(&mut rng, dims.m, dims.k, opts.init_scale);
    let mut y = gaussian_matrix(&mut rng, dims.n, dims.k, opts.init_scale);

    let norm_l = ground_truth.map(|l| l.norm());
    let mut eta = opts.schedule.eta0();
    let mut best_f = f64::INFINITY;
    let mut stall = 0usize;
    let mut initial_f = None;
    let mut trace = SolveTrace::with_capacity(opts.max_iters + 1);
    let mut status = SolveStatus::MaxIters;

    for iter in 0..=opts.max_iters {
        let product = &x * y.transpose();
        let residual = &product - observed;
        let f = matrix::l1_norm(&residual);
        let rel = match (ground_truth, norm_l) {
            (Some(l), Some(nl)) => (&product - l).norm() / nl,
            _ => f64::NAN,
        };
        let f0 = *initial_f.get_or_insert(f);

        // Schedule bookkeeping happens on the objective at the current state
        // so the recorded step is the one used to leave it.
        match opts.schedule {
            StepSchedule::Constant { .. } => {}
            StepSchedule::Geometric { decay, .. } => {
                if iter > 0 {
                    eta *= decay;
                }
            }
            StepSchedule::AdaptiveHalving {
                patience, factor, ..
            } => {
                if f < best_f {
                    best_f = f;
                    stall = 0;
                } else {
                    stall += 1;
                    if stall >= patience {
                        eta *= factor;
                        stall = 0;
                    }
                }
            }
        }

        trace.push(f, rel, eta);

        if f > 1e6 * f0.max(f64::MIN_POSITIVE) {
            status = SolveStatus::Diverged;
            break;
        }
        if let Some(target) = opts.target_rel_err {
            if rel.is_finite() && rel <= target {
                status = SolveStatus::ReachedTarget;
                break;
            }
        }
        if iter == opts.max_iters {
            status = SolveStatus::MaxIters;
            break;
        }

        let lambda = matrix::sign(&residual);
        let mut gx = &lambda * &y;
        let mut gy = lambda.transpose() * &x;
        if opts.normalized_steps {
            let g = (gx.norm_squared() + gy.norm_squared()).sqrt();
            if g > 0.0 {
                gx /= g;
                gy /= g;
            }
        }
        x -= eta * gx;
        y -= eta * gy;
    }

    Ok(Solution {
        pair: FactorPair::new(x, y)?,
        trace,
        status,
    })
}
