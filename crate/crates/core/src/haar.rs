//! The directional Haar tight framelet filter bank in any dimension.
//!
//! The low-pass filter is `2^-d` on the cube vertices `{0,1}^d`; there is one
//! high-pass filter `2^-d (delta_g1 - delta_g2)` for every edge of the
//! complete graph on those vertices.

use crate::coeff::RadCoeff;
use crate::error::{Error, Result};
use crate::filter::{Filter, FilterBank};
use crate::lattice::cube_vertices;

/// Default cap on the dimension; the bank has `C(2^d, 2)` high-pass filters.
pub const DEFAULT_MAX_DIM: usize = 6;

pub fn build_haar_bank(dim: usize) -> Result<FilterBank> {
    build_haar_bank_capped(dim, DEFAULT_MAX_DIM)
}

/// Pairs are taken in lexicographic order of `(g1, g2)` with `g1 < g2`, and
/// the positive tap sits on `g1`.
pub fn build_haar_bank_capped(dim: usize, max_dim: usize) -> Result<FilterBank> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if dim > max_dim {
        return Err(Error::DimensionTooLarge { dim, max: max_dim });
    }
    let weight = RadCoeff::pow2_inv(dim as u32);
    let vertices: Vec<_> = cube_vertices(dim).collect();
    let mut highpass = Vec::with_capacity(haar_highpass_count(dim));
    for (i, g1) in vertices.iter().enumerate() {
        for g2 in &vertices[i + 1..] {
            highpass.push(Filter::two_tap(g1.clone(), g2.clone(), weight.clone())?);
        }
    }
    FilterBank::new(Filter::haar_lowpass(dim), highpass)
}

/// `C(2^d, 2) = 2^(d-1) (2^d - 1)`.
pub fn haar_highpass_count(dim: usize) -> usize {
    (1usize << (dim - 1)) * ((1usize << dim) - 1)
}

/// `(3^d - 1) / 2`.
pub fn haar_direction_count(dim: usize) -> usize {
    (3usize.pow(dim as u32) - 1) / 2
}
