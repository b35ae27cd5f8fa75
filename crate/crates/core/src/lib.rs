//! Regular simplexes and simplex gradients.
//!
//! The aligned regular simplex has a closed-form basis, which lets the
//! simplex gradient be computed in `O(n)` time and memory. Two gradients at
//! radii `h1` and `h2` combine by Richardson extrapolation into a
//! second-order estimate.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod extrapolation;
pub mod gradient;
pub mod simplex;
pub mod testbed;
pub mod textio;

pub use error::{Error, Result};
pub use extrapolation::{extrapolated_gradient, richardson, Extrapolation, ExtrapolationPlan};
pub use gradient::{
    aligned_gradient, general_gradient, sample_aligned, GradientEstimate, Order, SampleSet,
};
pub use simplex::{
    AlignedRegularSimplex, GeneralRegularSimplex, IntegerSimplex, Orientation, SimplexConstants,
};
