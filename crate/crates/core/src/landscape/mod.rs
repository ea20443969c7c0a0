//! Numerical probes of the objective landscape around true factorizations.
//!
//! * [`restricted_ratio_ascent`] estimates (from below) how much l1 mass a
//!   unit-l1 element of the tangent space `T` can concentrate on the
//!   corruption support — the quantity that controls criticality.
//! * [`diameter_check`] samples unit-l1 elements of `T` and verifies the
//!   incoherence-based Frobenius and entrywise bounds.
//! * [`saddle_direction`] constructs the explicit descent direction that
//!   makes true factorizations strict saddle points when `k > r`, with the
//!   exact quadratic decrease identity.
//! * [`sharpness_probe`] measures directional growth ratios in the normal
//!   space at an exact factorization when `k = r` and compares them to the
//!   sharpness floor.
//! * [`overfit_demo`] builds the column-zeroing corruption for which exact
//!   fitting beats the ground truth, showing global optimality fails.

mod diameter;
mod overfit;
mod ratio;
mod saddle;
mod sharpness;

pub use diameter::{diameter_check, DiameterReport};
pub use overfit::{overfit_demo, OverfitReport};
pub use ratio::{restricted_ratio_ascent, RatioAscentOptions, RatioEstimate};
pub use saddle::{
    kernel_overlap_gamma, saddle_direction, saddle_direction_with_pivot, SaddleDirection,
};
pub use sharpness::{sharpness_probe, SharpnessOptions, SharpnessReport};
