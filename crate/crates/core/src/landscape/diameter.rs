//! Sampled verification of the incoherence-based norm bounds on unit-l1
//! elements of the tangent space `T`.

use serde::{Deserialize, Serialize};

use crate::certificate::project_t;
use crate::error::{CoreError, Result};
use crate::matrix::{self, Mat};
use crate::rng::{gaussian_matrix, mix_seed, rng_from_seed};

/// Outcome of a diameter probe. For every sampled `W in T` with
/// `|W|_1 = 1` the bounds are `|W|_F <= sqrt(mu r (1/m + 1/n))` scaled by
/// one half of the diameter statement, i.e. the per-point sup bounds
/// `|W|_F <= sqrt(mu r/m + mu r/n)` and `|W|_inf <= mu r/m + mu r/n`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiameterReport {
    pub samples: usize,
    /// Includes the projected basis images scanned in addition to the
    /// random samples.
    pub basis_images_scanned: usize,
    pub fro_bound: f64,
    pub inf_bound: f64,
    /// Largest observed `|W|_F / fro_bound`.
    pub max_fro_ratio: f64,
    /// Largest observed `|W|_inf / inf_bound`.
    pub max_inf_ratio: f64,
    pub violations: usize,
}

/// Sample `samples` random unit-l1 elements of `T` (Gaussian `(H, K)`
/// assembled and l1-normalized) plus every normalized basis image
/// `P_T(E_ij)`, and measure their Frobenius and entrywise norms against the
/// incoherence bounds. `mu` must be the measured incoherence of `(U, V)`.
pub fn diameter_check(
    u: &Mat,
    v: &Mat,
    mu: f64,
    r: usize,
    m: usize,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<DiameterReport> {
    if samples == 0 {
        return Err(CoreError::invalid("diameter_check: samples must be >= 1"));
    }
    if u.nrows() != m || u.ncols() != r || v.nrows() != n || v.ncols() != r {
        return Err(CoreError::invalid(format!(
            "diameter_check: U must be {m}x{r} and V {n}x{r}"
        )));
    }
    let inf_bound = mu * r as f64 * (1.0 / m as f64 + 1.0 / n as f64);
    let fro_bound = inf_bound.sqrt();

    let mut max_fro_ratio = 0.0f64;
    let mut max_inf_ratio = 0.0f64;
    let mut violations = 0usize;
    let mut measure = |w: &Mat| {
        let l1 = matrix::l1_norm(w);
        if l1 < 1e-300 {
            return;
        }
        let fro_ratio = (w.norm() / l1) / fro_bound;
        let inf_ratio = (matrix::linf_norm(w) / l1) / inf_bound;
        max_fro_ratio = max_fro_ratio.max(fro_ratio);
        max_inf_ratio = max_inf_ratio.max(inf_ratio);
        if fro_ratio > 1.0 || inf_ratio > 1.0 {
            violations += 1;
        }
    };

    let mut rng = rng_from_seed(mix_seed(seed, &[5]));
    for _ in 0..samples {
        let h = gaussian_matrix(&mut rng, m, r, 1.0);
        let k = gaussian_matrix(&mut rng, n, r, 1.0);
        let w = &h * v.transpose() + u * k.transpose();
        measure(&w);
    }

    // The lemma's proof shows basis images are the extreme case; scan all of
    // them as adversarial samples.
    let mut e = Mat::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            e[(i, j)] = 1.0;
            let w = project_t(&e, u, v)?;
            measure(&w);
            e[(i, j)] = 0.0;
        }
    }

    Ok(DiameterReport {
        samples,
        basis_images_scanned: m * n,
        fro_bound,
        inf_bound,
        max_fro_ratio,
        max_inf_ratio,
        violations,
    })
}
