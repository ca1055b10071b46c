//! Directional tight framelet filter banks with two-tap high-pass filters.
//!
//! The crate builds the `d`-dimensional Haar bank whose high-pass filters are
//! all edge differences of the unit cube, projects it along integer direction
//! matrices to obtain box-spline banks, checks the tight framelet identities
//! in exact arithmetic, and runs the associated periodic framelet transform
//! and subdivision sampling.

pub mod boxspline;
pub mod cascade;
pub mod census;
pub mod coeff;
pub mod error;
pub mod filter;
pub mod format;
pub mod haar;
pub mod lattice;
pub mod projector;
pub mod transform;
pub mod verify;

pub use boxspline::{build_boxspline_bank, reduce_bank, BankMode, ReduceMode};
pub use census::{direction_census, Census, DirectionVector};
pub use coeff::RadCoeff;
pub use error::{Error, Result};
pub use filter::{Filter, FilterBank, TwoTap};
pub use haar::build_haar_bank;
pub use lattice::IntVec;
pub use projector::{
    boxspline_mask, preimage_vertices, project_filter, sum_rules_order_one, DirectionMatrix,
};
pub use transform::{analyze, pyramid_energy, synthesize, CoefficientPyramid, Tensor};
pub use verify::{verify_frequency, verify_tight_bank, VerifyReport};
