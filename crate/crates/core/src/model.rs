//! Synthetic low-rank plus sparse instances.
//!
//! An instance is a ground-truth bundle: an incoherent rank-`r` matrix `L`
//! with its thin SVD, a Bernoulli-supported sparse corruption `S`, the
//! observation `M = L + S`, and the measured incoherence of `L`. Generation
//! is a pure function of the configuration and seed.

use nalgebra::DVector;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::matrix::{self, Mask, Mat};
use crate::rng::{gaussian_matrix, mix_seed, rng_from_seed};

/// Orthonormality tolerance required of SVD factors fed into incoherence
/// and projector computations.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// Relative singular-value threshold below which a factor is considered
/// rank-deficient and the draw is retried.
pub const RANK_CHECK_REL_TOL: f64 = 1e-10;

/// Problem dimensions: matrix size, search rank and true rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    /// Row count.
    pub m: usize,
    /// Column count.
    pub n: usize,
    /// Factorization (search) rank; the solver accepts `k != r`.
    pub k: usize,
    /// True rank of the low-rank component.
    pub r: usize,
}

impl Dims {
    pub fn new(m: usize, n: usize, k: usize, r: usize) -> Result<Self> {
        let min_dim = m.min(n);
        if m == 0 || n == 0 {
            return Err(CoreError::invalid("matrix dimensions must be positive"));
        }
        if r == 0 || r > min_dim {
            return Err(CoreError::invalid(format!(
                "true rank r={r} out of range [1, {min_dim}]"
            )));
        }
        if k == 0 || k > min_dim {
            return Err(CoreError::invalid(format!(
                "search rank k={k} out of range [1, {min_dim}]"
            )));
        }
        Ok(Dims { m, n, k, r })
    }
}

/// Distribution of the nonzero entries of the sparse component, with all
/// parameters resolved to concrete numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MagnitudeModel {
    /// Uniform on `[-amplitude, amplitude]` excluding zero.
    Uniform { amplitude: f64 },
    /// Symmetric two-point distribution on `{-magnitude, +magnitude}`.
    Rademacher { magnitude: f64 },
}

impl MagnitudeModel {
    /// Uniform model with amplitude `factor * mean(|L_ij|)`, so corruption
    /// magnitudes are large relative to the low-rank signal.
    pub fn uniform_scaled_to(l: &Mat, factor: f64) -> Self {
        let mean_abs = matrix::l1_norm(l) / (l.nrows() * l.ncols()) as f64;
        MagnitudeModel::Uniform {
            amplitude: factor * mean_abs,
        }
    }

    fn validate(&self) -> Result<()> {
        let value = match self {
            MagnitudeModel::Uniform { amplitude } => *amplitude,
            MagnitudeModel::Rademacher { magnitude } => *magnitude,
        };
        if !(value > 0.0) || !value.is_finite() {
            return Err(CoreError::invalid(format!(
                "magnitude model parameter must be positive and finite, got {value}"
            )));
        }
        Ok(())
    }

    fn draw(&self, rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
        match self {
            MagnitudeModel::Uniform { amplitude } => loop {
                let v: f64 = rng.random_range(-amplitude..=*amplitude);
                if v != 0.0 {
                    return v;
                }
            },
            MagnitudeModel::Rademacher { magnitude } => {
                if rng.random::<bool>() {
                    *magnitude
                } else {
                    -*magnitude
                }
            }
        }
    }
}

/// Iterate of the factorized problem: `X` is `m x k`, `Y` is `n x k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorPair {
    pub x: Mat,
    pub y: Mat,
}

impl FactorPair {
    pub fn new(x: Mat, y: Mat) -> Result<Self> {
        if x.ncols() != y.ncols() {
            return Err(CoreError::invalid(format!(
                "factor rank mismatch: X has {} columns, Y has {}",
                x.ncols(),
                y.ncols()
            )));
        }
        Ok(FactorPair { x, y })
    }

    /// The product `X Y^T`.
    pub fn product(&self) -> Mat {
        &self.x * self.y.transpose()
    }

    pub fn k(&self) -> usize {
        self.x.ncols()
    }

    pub fn check_dims(&self, m: usize, n: usize) -> Result<()> {
        if self.x.nrows() != m || self.y.nrows() != n {
            return Err(CoreError::invalid(format!(
                "factor pair is {}x{} / {}x{}, expected {m}x. / {n}x.",
                self.x.nrows(),
                self.x.ncols(),
                self.y.nrows(),
                self.y.ncols()
            )));
        }
        Ok(())
    }
}

/// Low-rank component together with its thin SVD and measured incoherence.
#[derive(Debug, Clone)]
pub struct LowRankPart {
    pub l: Mat,
    /// `m x r`, orthonormal columns.
    pub u: Mat,
    /// `r` nonincreasing positive singular values.
    pub sigma: DVector<f64>,
    /// `n x r`, orthonormal columns.
    pub v: Mat,
    /// Measured incoherence, `>= 1`.
    pub mu: f64,
}

/// Measured incoherence of orthonormal factors: the largest of
/// `m/r * max_i |U_i|^2` and `n/r * max_j |V_j|^2` over rows `U_i`, `V_j`.
///
/// Always lies in `[1, max(m,n)/r]`. Returns a precondition error (with the
/// measured deviation) if either factor is not orthonormal within `1e-10`.
pub fn incoherence(u: &Mat, v: &Mat, m: usize, n: usize, r: usize) -> Result<f64> {
    if u.nrows() != m || u.ncols() != r || v.nrows() != n || v.ncols() != r {
        return Err(CoreError::invalid(format!(
            "incoherence: U must be {m}x{r} and V {n}x{r}, got {}x{} and {}x{}",
            u.nrows(),
            u.ncols(),
            v.nrows(),
            v.ncols()
        )));
    }
    matrix::check_orthonormal(u, ORTHONORMALITY_TOL, "U")?;
    matrix::check_orthonormal(v, ORTHONORMALITY_TOL, "V")?;
    let max_row_sq = |a: &Mat| -> f64 {
        (0..a.nrows())
            .map(|i| a.row(i).norm_squared())
            .fold(0.0, f64::max)
    };
    let mu_u = m as f64 / r as f64 * max_row_sq(u);
    let mu_v = n as f64 / r as f64 * max_row_sq(v);
    Ok(mu_u.max(mu_v))
}

fn thin_svd_rank(l: &Mat, r: usize) -> Result<(Mat, DVector<f64>, Mat)> {
    let svd = l
        .clone()
        .try_svd(true, true, f64::EPSILON, 10_000)
        .ok_or(CoreError::SvdFailure {
            rows: l.nrows(),
            cols: l.ncols(),
        })?;
    let u_full = svd.u.expect("SVD with compute_u");
    let vt_full = svd.v_t.expect("SVD with compute_v");
    // nalgebra returns singular values in nonincreasing order.
    let u = u_full.columns(0, r).into_owned();
    let sigma = DVector::from_iterator(r, svd.singular_values.iter().take(r).copied());
    let v = vt_full.rows(0, r).transpose();
    Ok((u, sigma, v))
}

/// Low-rank part from explicit factors: `L = A B^T` with the thin SVD and
/// measured incoherence attached. This is the deterministic entry point used
/// when the Gaussian draw of [`gen_low_rank`] is to be bypassed.
pub fn low_rank_from_factors(a: &Mat, b: &Mat) -> Result<LowRankPart> {
    if a.ncols() != b.ncols() {
        return Err(CoreError::invalid(
            "low_rank_from_factors: A and B must have the same column count",
        ));
    }
    let r = a.ncols();
    let (m, n) = (a.nrows(), b.nrows());
    if r == 0 || r > m.min(n) {
        return Err(CoreError::invalid(format!(
            "low_rank_from_factors: rank {r} out of range for a {m}x{n} product"
        )));
    }
    let l = a * b.transpose();
    let (u, sigma, v) = thin_svd_rank(&l, r)?;
    if sigma[r - 1] <= RANK_CHECK_REL_TOL * sigma[0] {
        return Err(CoreError::Numeric(format!(
            "low_rank_from_factors: product is rank deficient (sigma_r/sigma_1 = {:.3e})",
            sigma[r - 1] / sigma[0]
        )));
    }
    let mu = incoherence(&u, &v, m, n, r)?;
    Ok(LowRankPart { l, u, sigma, v, mu })
}

/// Random rank-`r` matrix `L = A B^T` with `A`, `B` i.i.d. Gaussian scaled by
/// `scale / sqrt(r)`, plus its thin SVD and measured incoherence.
///
/// The Gaussian draw is full rank almost surely; if the measured
/// `sigma_r / sigma_1` still falls below `1e-10` the draw is retried with an
/// incremented seed.
pub fn gen_low_rank(m: usize, n: usize, r: usize, scale: f64, seed: u64) -> Result<LowRankPart> {
    if r == 0 || r > m.min(n) {
        return Err(CoreError::invalid(format!(
            "gen_low_rank: rank r={r} out of range [1, {}]",
            m.min(n)
        )));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(CoreError::invalid(format!(
            "gen_low_rank: scale must be positive and finite, got {scale}"
        )));
    }
    let factor_std = scale / (r as f64).sqrt();
    const MAX_ATTEMPTS: u64 = 16;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = rng_from_seed(seed.wrapping_add(attempt));
        let a = gaussian_matrix(&mut rng, m, r, factor_std);
        let b = gaussian_matrix(&mut rng, n, r, factor_std);
        let l = &a * b.transpose();
        let (u, sigma, v) = thin_svd_rank(&l, r)?;
        if sigma[r - 1] > RANK_CHECK_REL_TOL * sigma[0] {
            let mu = incoherence(&u, &v, m, n, r)?;
            return Ok(LowRankPart { l, u, sigma, v, mu });
        }
    }
    Err(CoreError::Numeric(format!(
        "gen_low_rank: no full-rank draw in {MAX_ATTEMPTS} attempts (m={m}, n={n}, r={r})"
    )))
}

/// Bernoulli-supported sparse matrix: each entry is nonzero independently
/// with probability `p`, with magnitudes drawn from `magnitude`. Entries off
/// the support are exactly zero; entries on the support are never zero
/// (zero draws are redrawn).
pub fn gen_sparse(
    m: usize,
    n: usize,
    p: f64,
    magnitude: &MagnitudeModel,
    seed: u64,
) -> Result<(Mat, Mask)> {
    if !(p > 0.0 && p < 1.0) {
        return Err(CoreError::invalid(format!(
            "gen_sparse: corruption probability must lie in (0,1), got {p}"
        )));
    }
    magnitude.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut s = Mat::zeros(m, n);
    let mut omega = Mask::from_element(m, n, false);
    // Row-major traversal fixes the draw order for reproducibility.
    for i in 0..m {
        for j in 0..n {
            if rng.random::<f64>() < p {
                omega[(i, j)] = true;
                s[(i, j)] = magnitude.draw(&mut rng);
            }
        }
    }
    Ok((s, omega))
}

/// Entrywise sum `M = L + S`.
pub fn assemble(l: &Mat, s: &Mat) -> Result<Mat> {
    matrix::check_same_shape(l, s, "assemble")?;
    Ok(l + s)
}

/// Configuration for [`Instance::generate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceConfig {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    /// Corruption probability in (0,1).
    pub p: f64,
    /// Scale of the Gaussian factors of `L`.
    pub scale: f64,
    /// Factor applied to `mean(|L_ij|)` for the uniform magnitude model.
    pub magnitude_factor: f64,
    /// When set, use Rademacher corruption with this magnitude instead of
    /// the uniform model.
    pub rademacher_magnitude: Option<f64>,
    /// Reject draws whose measured incoherence exceeds this cap; generation
    /// retries with derived seeds and fails after a bounded number of tries.
    pub mu_cap: Option<f64>,
    pub seed: u64,
}

impl InstanceConfig {
    pub fn new(m: usize, n: usize, k: usize, r: usize, p: f64, seed: u64) -> Self {
        InstanceConfig {
            m,
            n,
            k,
            r,
            p,
            scale: 1.0,
            magnitude_factor: 10.0,
            rademacher_magnitude: None,
            mu_cap: None,
            seed,
        }
    }
}

/// Ground-truth bundle for one synthetic problem.
#[derive(Debug, Clone)]
pub struct Instance {
    pub dims: Dims,
    pub l: Mat,
    pub u: Mat,
    pub sigma: DVector<f64>,
    pub v: Mat,
    pub s: Mat,
    pub omega: Mask,
    /// The observation `M = L + S`.
    pub observed: Mat,
    /// Measured incoherence of `L`.
    pub mu: f64,
    pub p: f64,
    pub seed: u64,
    pub magnitude: MagnitudeModel,
}

impl Instance {
    /// Generate an instance from the configuration. Deterministic: the same
    /// configuration always produces bit-identical matrices.
    pub fn generate(cfg: &InstanceConfig) -> Result<Instance> {
        let dims = Dims::new(cfg.m, cfg.n, cfg.k, cfg.r)?;
        const MU_CAP_ATTEMPTS: u64 = 64;
        let attempts = if cfg.mu_cap.is_some() {
            MU_CAP_ATTEMPTS
        } else {
            1
        };
        let mut last_mu = f64::NAN;
        for attempt in 0..attempts {
            let lr_seed = mix_seed(cfg.seed, &[1, attempt]);
            let lr = gen_low_rank(cfg.m, cfg.n, cfg.r, cfg.scale, lr_seed)?;
            if let Some(cap) = cfg.mu_cap {
                if lr.mu > cap {
                    last_mu = lr.mu;
                    continue;
                }
            }
            let magnitude = match cfg.rademacher_magnitude {
                Some(c) => MagnitudeModel::Rademacher { magnitude: c },
                None => MagnitudeModel::uniform_scaled_to(&lr.l, cfg.magnitude_factor),
            };
            let sp_seed = mix_seed(cfg.seed, &[2, attempt]);
            let (s, omega) = gen_sparse(cfg.m, cfg.n, cfg.p, &magnitude, sp_seed)?;
            let observed = assemble(&lr.l, &s)?;
            return Ok(Instance {
                dims,
                l: lr.l,
                u: lr.u,
                sigma: lr.sigma,
                v: lr.v,
                s,
                omega,
                observed,
                mu: lr.mu,
                p: cfg.p,
                seed: cfg.seed,
                magnitude,
            });
        }
        Err(CoreError::Numeric(format!(
            "Instance::generate: incoherence cap {} not met in {MU_CAP_ATTEMPTS} attempts (last mu = {last_mu:.3})",
            cfg.mu_cap.unwrap_or(f64::NAN)
        )))
    }

    /// The canonical true factorization `X* = U diag(sigma)`, `Y* = V`,
    /// zero-padded to `k` columns when `k > r`.
    pub fn canonical_factor_pair(&self, k: usize) -> Result<FactorPair> {
        let Dims { m, n, r, .. } = self.dims;
        if k < r || k > m.min(n) {
            return Err(CoreError::invalid(format!(
                "canonical_factor_pair: k={k} out of range [{r}, {}]",
                m.min(n)
            )));
        }
        let mut x = Mat::zeros(m, k);
        let mut y = Mat::zeros(n, k);
        for c in 0..r {
            let sc = self.sigma[c];
            x.column_mut(c).copy_from(&(self.u.column(c) * sc));
            y.column_mut(c).copy_from(&self.v.column(c));
        }
        FactorPair::new(x, y)
    }

    /// A random true factorization with rank-`r` factors of width `k`:
    /// `X* = [U sqrt(S) | 0] G`, `Y* = [V sqrt(S) | 0] G^{-T}` for a random
    /// well-conditioned `G`, so `X* Y*^T = L` while the kernel geometry of the
    /// factors is generic.
    pub fn true_factor_pair(&self, k: usize, seed: u64) -> Result<FactorPair> {
        let Dims { m, n, r, .. } = self.dims;
        if k < r || k > m.min(n) {
            return Err(CoreError::invalid(format!(
                "true_factor_pair: k={k} out of range [{r}, {}]",
                m.min(n)
            )));
        }
        let mut x0 = Mat::zeros(m, k);
        let mut y0 = Mat::zeros(n, k);
        for c in 0..r {
            let sq = self.sigma[c].sqrt();
            x0.column_mut(c).copy_from(&(self.u.column(c) * sq));
            y0.column_mut(c).copy_from(&(self.v.column(c) * sq));
        }
        const MAX_ATTEMPTS: u64 = 16;
        for attempt in 0..MAX_ATTEMPTS {
            let mut rng = rng_from_seed(mix_seed(seed, &[3, attempt]));
            let g = gaussian_matrix(&mut rng, k, k, 1.0);
            // Reject ill-conditioned mixing so both factors stay well scaled.
            let svd = g
                .clone()
                .try_svd(false, false, f64::EPSILON, 10_000)
                .ok_or(CoreError::SvdFailure { rows: k, cols: k })?;
            let smin = svd.singular_values[k - 1];
            let smax = svd.singular_values[0];
            if smin <= 1e-6 * smax {
                continue;
            }
            let g_inv_t = g
                .clone()
                .lu()
                .try_inverse()
                .ok_or_else(|| CoreError::Numeric("true_factor_pair: singular mixing".into()))?
                .transpose();
            return FactorPair::new(&x0 * &g, &y0 * &g_inv_t);
        }
        Err(CoreError::Numeric(
            "true_factor_pair: no well-conditioned mixing matrix found".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{l1_norm, linf_norm, restrict, restrict_complement};

    #[test]
    fn dims_validation() {
        assert!(Dims::new(10, 8, 3, 2).is_ok());
        assert!(Dims::new(10, 8, 3, 0).is_err());
        assert!(Dims::new(10, 8, 0, 2).is_err());
        assert!(Dims::new(10, 8, 9, 2).is_err());
        assert!(Dims::new(10, 8, 3, 9).is_err());
        // k != r is allowed in both directions.
        assert!(Dims::new(10, 8, 6, 2).is_ok());
        assert!(Dims::new(10, 8, 2, 6).is_ok());
    }

    #[test]
    fn incoherence_identity_columns() {
        // U = first r columns of the identity: one row per column carries
        // all the mass, so mu = m/r.
        let m = 6;
        let r = 2;
        let u = Mat::identity(m, r);
        let v = Mat::identity(6, r);
        let mu = incoherence(&u, &v, m, 6, r).unwrap();
        assert_eq!(mu, m as f64 / r as f64);
    }

    #[test]
    fn incoherence_flat_vectors_is_one() {
        let m = 9;
        let n = 4;
        let u = Mat::from_element(m, 1, 1.0 / (m as f64).sqrt());
        let v = Mat::from_element(n, 1, 1.0 / (n as f64).sqrt());
        let mu = incoherence(&u, &v, m, n, 1).unwrap();
        assert!((mu - 1.0).abs() < 1e-12, "mu = {mu}");
    }

    #[test]
    fn incoherence_rejects_non_orthonormal() {
        let u = Mat::identity(4, 2) * 2.0;
        let err = incoherence(&u, &Mat::identity(4, 2), 4, 4, 2).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("orthonormal"), "{msg}");
        assert!(msg.contains("3.0"), "deviation missing from: {msg}");
    }

    #[test]
    fn forced_rank_one_factors_give_mu_equal_m() {
        // A = B = (1, 0)^T makes L = e1 e1^T, so U has a single nonzero row.
        let a = Mat::from_column_slice(2, 1, &[1.0, 0.0]);
        let lr = low_rank_from_factors(&a, &a).unwrap();
        assert!((lr.mu - 2.0).abs() < 1e-12);
    }

    #[test]
    fn full_rank_square_orthogonal_mu_is_one() {
        // r = m = n: U, V are square orthogonal, every row has unit norm.
        for seed in 0..5 {
            let lr = gen_low_rank(3, 3, 3, 1.0, seed).unwrap();
            assert!((lr.mu - 1.0).abs() < 1e-9, "mu = {}", lr.mu);
        }
    }

    #[test]
    fn gen_low_rank_factors_are_valid() {
        let lr = gen_low_rank(20, 15, 4, 1.0, 7).unwrap();
        assert!(crate::matrix::orthonormality_defect(&lr.u) <= 1e-12);
        assert!(crate::matrix::orthonormality_defect(&lr.v) <= 1e-12);
        assert_eq!(lr.sigma.len(), 4);
        assert!(lr.sigma[3] > 1e-10 * lr.sigma[0]);
        for i in 1..4 {
            assert!(lr.sigma[i] <= lr.sigma[i - 1]);
        }
        // The SVD reconstructs L.
        let recon = &lr.u * Mat::from_diagonal(&lr.sigma) * lr.v.transpose();
        assert!((recon - &lr.l).norm() <= 1e-12 * lr.l.norm());
        assert!(lr.mu >= 1.0 && lr.mu <= 20.0 / 4.0 + 1e-12);
    }

    #[test]
    fn gen_low_rank_is_deterministic() {
        let a = gen_low_rank(12, 9, 3, 2.0, 99).unwrap();
        let b = gen_low_rank(12, 9, 3, 2.0, 99).unwrap();
        assert_eq!(a.l, b.l);
        assert_eq!(a.mu, b.mu);
    }

    #[test]
    fn incoherence_is_scale_invariant() {
        // Scaling L leaves U, V unchanged, so mu is unchanged by construction;
        // verify via the SVD of the scaled matrix.
        let lr = gen_low_rank(14, 11, 3, 1.0, 5).unwrap();
        let scaled = low_rank_from_factors(&(&lr.u * Mat::from_diagonal(&lr.sigma) * 17.5), &lr.v)
            .unwrap();
        assert!((scaled.mu - lr.mu).abs() <= 1e-9 * lr.mu);
    }

    #[test]
    fn gen_sparse_support_is_exact() {
        let model = MagnitudeModel::Uniform { amplitude: 3.0 };
        let (s, omega) = gen_sparse(30, 25, 0.15, &model, 11).unwrap();
        assert_eq!(linf_norm(&restrict_complement(&s, &omega)), 0.0);
        assert_eq!(l1_norm(&(&restrict(&s, &omega) - &s)), 0.0);
        for i in 0..30 {
            for j in 0..25 {
                if omega[(i, j)] {
                    assert!(s[(i, j)] != 0.0);
                    assert!(s[(i, j)].abs() <= 3.0);
                }
            }
        }
    }

    #[test]
    fn gen_sparse_support_size_concentrates() {
        // |Omega| must lie within 5 sigma of its binomial mean.
        let (m, n, p) = (100, 100, 0.1);
        let model = MagnitudeModel::Rademacher { magnitude: 1.0 };
        for seed in 0..5 {
            let (_, omega) = gen_sparse(m, n, p, &model, seed).unwrap();
            let count = omega.iter().filter(|b| **b).count() as f64;
            let mean = (m * n) as f64 * p;
            let sd = ((m * n) as f64 * p * (1.0 - p)).sqrt();
            assert!(
                (count - mean).abs() <= 5.0 * sd,
                "seed {seed}: |Omega| = {count}, mean {mean}, sd {sd}"
            );
        }
    }

    #[test]
    fn gen_sparse_rademacher_values() {
        let model = MagnitudeModel::Rademacher { magnitude: 2.5 };
        let (s, omega) = gen_sparse(20, 20, 0.2, &model, 3).unwrap();
        for (v, on) in s.iter().zip(omega.iter()) {
            if *on {
                assert!(*v == 2.5 || *v == -2.5);
            }
        }
    }

    #[test]
    fn gen_sparse_vanishing_p_gives_empty_support() {
        let model = MagnitudeModel::Uniform { amplitude: 1.0 };
        let (s, omega) = gen_sparse(10, 10, 1e-9, &model, 0).unwrap();
        assert_eq!(omega.iter().filter(|b| **b).count(), 0);
        assert_eq!(l1_norm(&s), 0.0);
    }

    #[test]
    fn gen_sparse_rejects_bad_p() {
        let model = MagnitudeModel::Uniform { amplitude: 1.0 };
        assert!(gen_sparse(4, 4, 0.0, &model, 0).is_err());
        assert!(gen_sparse(4, 4, 1.0, &model, 0).is_err());
        assert!(gen_sparse(4, 4, 1.5, &model, 0).is_err());
    }

    #[test]
    fn assemble_trivial_cases() {
        let lr = gen_low_rank(6, 5, 2, 1.0, 1).unwrap();
        let zero = Mat::zeros(6, 5);
        assert_eq!(assemble(&lr.l, &zero).unwrap(), lr.l);
        assert_eq!(assemble(&zero, &lr.l).unwrap(), lr.l);
        assert_eq!(assemble(&lr.l, &(-&lr.l)).unwrap(), zero);
        assert!(assemble(&lr.l, &Mat::zeros(5, 6)).is_err());
    }

    #[test]
    fn instance_invariants() {
        let cfg = InstanceConfig::new(40, 30, 5, 5, 0.1, 123);
        let inst = Instance::generate(&cfg).unwrap();
        // M = L + S exactly, entry by entry.
        assert_eq!(inst.observed, &inst.l + &inst.s);
        // S vanishes exactly off Omega and is nonzero on it.
        assert_eq!(linf_norm(&restrict_complement(&inst.s, &inst.omega)), 0.0);
        assert!(inst
            .s
            .iter()
            .zip(inst.omega.iter())
            .all(|(v, on)| !*on || *v != 0.0));
        assert!(inst.mu >= 1.0);
        // Same seed reproduces bit-identical data.
        let again = Instance::generate(&cfg).unwrap();
        assert_eq!(inst.l, again.l);
        assert_eq!(inst.s, again.s);
        assert_eq!(inst.observed, again.observed);
    }

    #[test]
    fn instance_mu_cap_retries() {
        let mut cfg = InstanceConfig::new(30, 30, 3, 3, 0.05, 17);
        cfg.mu_cap = Some(1000.0); // always satisfied
        let inst = Instance::generate(&cfg).unwrap();
        assert!(inst.mu <= 1000.0);
        cfg.mu_cap = Some(1.0 + 1e-9); // essentially never satisfied
        assert!(Instance::generate(&cfg).is_err());
    }

    #[test]
    fn true_factor_pair_lies_in_solution_set() {
        let cfg = InstanceConfig::new(20, 18, 7, 3, 0.1, 5);
        let inst = Instance::generate(&cfg).unwrap();
        for seed in 0..4 {
            let pair = inst.true_factor_pair(7, seed).unwrap();
            assert!((pair.product() - &inst.l).norm() <= 1e-10 * inst.l.norm());
            let rank = |a: &Mat| {
                let sv = a.clone().svd(false, false).singular_values;
                sv.iter().filter(|s| **s > 1e-10 * sv[0]).count()
            };
            assert_eq!(rank(&pair.x), 3);
            assert_eq!(rank(&pair.y), 3);
        }
        let canon = inst.canonical_factor_pair(7).unwrap();
        assert!((canon.product() - &inst.l).norm() <= 1e-12 * inst.l.norm());
    }
}
