//! Heuristic maximization of `|P_Omega(W)|_1` over unit-l1 elements of `T`.

use serde::{Deserialize, Serialize};

use crate::certificate::{project_t, project_tperp};
use crate::error::{CoreError, Result};
use crate::matrix::{self, Mask, Mat};
use crate::rng::{gaussian_matrix, mix_seed, rng_from_seed};

/// Best ratio found and the witness that attains it.
#[derive(Debug, Clone)]
pub struct RatioEstimate {
    /// `|P_Omega(witness)|_1` with `|witness|_1 = 1`; a lower bound on the
    /// supremum over `T`.
    pub value: f64,
    pub witness: Mat,
    pub restarts_used: usize,
}

/// Options for [`restricted_ratio_ascent`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioAscentOptions {
    /// Number of random restarts.
    pub restarts: usize,
    /// Ascent iteration cap per start.
    pub iters: usize,
    pub seed: u64,
    /// Also start from projected support basis images `P_T(E_ij)`,
    /// `(i,j) in Omega` (capped at `restarts` of them). These seed the
    /// spiky optima that random starts tend to miss.
    pub structured_starts: bool,
    /// Extra user-supplied starting points (e.g. a witness from a smaller
    /// support when testing monotonicity under support growth).
    #[serde(skip)]
    pub warm_starts: Vec<Mat>,
}

impl RatioAscentOptions {
    pub fn new(restarts: usize, iters: usize, seed: u64) -> Self {
        RatioAscentOptions {
            restarts,
            iters,
            seed,
            structured_starts: true,
            warm_starts: Vec::new(),
        }
    }
}

const COARSE_GRID: [f64; 4] = [1e-3, 1e-2, 1e-1, 1.0];
const FINE_GRID: [f64; 6] = [1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1];

fn ratio_value(w: &Mat, omega: &Mask) -> f64 {
    matrix::l1_norm_on(w, omega)
}

/// One line-searched ascent pass from `w` (unit l1). The ascent direction is
/// the tangent projection of the ratio's supergradient,
/// `P_T((Omega - value) .* sign(W))`: the support indicator pushes mass onto
/// `Omega` while the `value * sign(W)` term accounts for the l1
/// renormalization. Steps come from a multiplicative grid of the current l1
/// scale; the best improving step is taken, and the pass stops when none
/// improves.
fn ascend(
    mut w: Mat,
    u: &Mat,
    v: &Mat,
    omega: &Mask,
    iters: usize,
    grid: &[f64],
) -> Result<(f64, Mat)> {
    let mut value = ratio_value(&w, omega);
    for _ in 0..iters {
        let graded = w.zip_map(omega, |x, on| {
            let sg = if x > 0.0 {
                1.0
            } else if x < 0.0 {
                -1.0
            } else {
                0.0
            };
            (if on { 1.0 } else { 0.0 } - value) * sg
        });
        let mut direction = project_t(&graded, u, v)?;
        let dir_l1 = matrix::l1_norm(&direction);
        if dir_l1 < 1e-14 {
            break;
        }
        direction /= dir_l1;
        let mut best: Option<(f64, Mat)> = None;
        for &step in grid {
            let candidate = &w + step * &direction;
            let l1 = matrix::l1_norm(&candidate);
            if l1 < 1e-300 {
                continue;
            }
            let candidate = candidate / l1;
            let cand_value = ratio_value(&candidate, omega);
            let best_value = best.as_ref().map_or(value, |(bv, _)| *bv);
            if cand_value > best_value + 1e-15 {
                best = Some((cand_value, candidate));
            }
        }
        match best {
            Some((bv, bw)) => {
                value = bv;
                w = bw;
            }
            None => break,
        }
    }
    Ok((value, w))
}

/// Multi-restart projected ascent estimating
/// `sup { |P_Omega(W)|_1 : W in T, |W|_1 = 1 }` from below.
///
/// Maximizing a convex function over this set is heuristic; each start runs
/// a coarse-grid pass followed by a fine-grid refinement pass, and the best
/// ratio over all starts is returned. The witness is re-projected onto `T`
/// and l1-normalized before the final value is measured.
pub fn restricted_ratio_ascent(
    u: &Mat,
    v: &Mat,
    omega: &Mask,
    opts: &RatioAscentOptions,
) -> Result<RatioEstimate> {
    if opts.restarts == 0 {
        return Err(CoreError::invalid("restricted_ratio_ascent: restarts must be >= 1"));
    }
    let (m, n) = (omega.nrows(), omega.ncols());
    let r = u.ncols();
    if u.nrows() != m || v.nrows() != n || v.ncols() != r {
        return Err(CoreError::invalid(format!(
            "restricted_ratio_ascent: U is {}x{}, V is {}x{}, omega is {m}x{n}",
            u.nrows(),
            u.ncols(),
            v.nrows(),
            v.ncols()
        )));
    }

    let support: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| omega[(i, j)])
        .collect();

    let mut starts: Vec<Mat> = Vec::new();
    for w in &opts.warm_starts {
        matrix::check_same_shape(w, &Mat::zeros(m, n), "warm start")?;
        starts.push(w.clone());
    }
    if opts.structured_starts {
        for &(i, j) in support.iter().take(opts.restarts) {
            let mut e = Mat::zeros(m, n);
            e[(i, j)] = 1.0;
            let w0 = project_t(&e, u, v)?;
            if matrix::l1_norm(&w0) > 1e-12 {
                starts.push(w0);
            }
        }
    }
    let mut rng = rng_from_seed(mix_seed(opts.seed, &[4]));
    let mut drawn = 0;
    while drawn < opts.restarts {
        let h = gaussian_matrix(&mut rng, m, r, 1.0);
        let k = gaussian_matrix(&mut rng, n, r, 1.0);
        let w0 = &h * v.transpose() + u * k.transpose();
        // A zero draw cannot be normalized; redraw it.
        if matrix::l1_norm(&w0) < 1e-12 {
            continue;
        }
        starts.push(w0);
        drawn += 1;
    }

    let mut best_value = -1.0;
    let mut best_witness: Option<Mat> = None;
    for w0 in &starts {
        let w_init = w0 / matrix::l1_norm(w0);
        let (coarse_v, coarse_w) = ascend(w_init, u, v, omega, opts.iters, &COARSE_GRID)?;
        let (fine_v, fine_w) = ascend(coarse_w.clone(), u, v, omega, opts.iters, &FINE_GRID)?;
        let (val, wit) = if fine_v >= coarse_v {
            (fine_v, fine_w)
        } else {
            (coarse_v, coarse_w)
        };
        if val > best_value {
            best_value = val;
            best_witness = Some(wit);
        }
    }

    // Clean the witness: exactly in T up to roundoff, unit l1.
    let witness = best_witness.expect("at least one start");
    let witness = project_t(&witness, u, v)?;
    let witness = &witness / matrix::l1_norm(&witness);
    let value = ratio_value(&witness, omega);
    debug_assert!(matrix::linf_norm(&project_tperp(&witness, u, v)?) <= 1e-10);

    Ok(RatioEstimate {
        value,
        witness,
        restarts_used: starts.len(),
    })
}
