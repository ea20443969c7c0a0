//! Numerical toolkit for the factorized l1 formulation of robust PCA.
//!
//! An observed matrix `M = L + S` (low-rank plus sparse corruption) is fit by
//! minimizing the entrywise l1 residual `|X Y^T - M|_1` over low-dimensional
//! factors. This crate provides:
//!
//! * synthetic instance generation under the incoherent low-rank plus
//!   Bernoulli-sparse model ([`model`]),
//! * the subgradient descent solver with adaptive step schedules ([`subgrad`]),
//! * dual-certificate construction certifying that true factorizations are
//!   Clarke critical points ([`certificate`]),
//! * numerical probes of the local geometry around true factorizations:
//!   restricted support ratios, sharpness floors, explicit descent directions
//!   in the overparameterized regime, and the overfitting counterexample
//!   ([`landscape`]),
//! * principal component pursuit via inexact ALM as the convex comparator
//!   ([`baselines`]).
//!
//! Everything is deterministic given explicit seeds; matrices are dense
//! `f64` throughout (desk scale).

pub mod baselines;
pub mod certificate;
pub mod error;
pub mod io;
pub mod landscape;
pub mod matrix;
pub mod model;
pub mod rng;
pub mod subgrad;
pub mod trace;

pub use error::{CoreError, Result};
pub use matrix::Mat;
pub use model::{Dims, FactorPair, Instance, InstanceConfig, MagnitudeModel};
pub use trace::SolveTrace;
