//! Negativity, `(||rho^T||_1 - 1) / (d1 - 1)` with `d1` the smaller factor.

use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{partial_transpose, trace_norm};
use crate::states::DensityMatrix;

/// Floating-point noise below zero of at most this size is clamped to 0.
pub const CLAMP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct NegativityValue(f64);

impl NegativityValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for NegativityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Trace norm of the partial transpose over `factor`.
pub fn partial_transpose_norm(rho: &DensityMatrix, factor: usize) -> Result<f64> {
    trace_norm(&partial_transpose(rho.matrix(), rho.dims(), factor)?)
}

pub fn negativity(rho: &DensityMatrix) -> Result<NegativityValue> {
    let dims = rho.dims().as_slice();
    if dims.len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "negativity needs a bipartite state, got dims {}",
            rho.dims()
        )));
    }
    let smaller = dims[0].min(dims[1]);
    if smaller < 2 {
        return Err(Error::DimensionMismatch(format!(
            "negativity needs both factors to have at least 2 levels, got dims {}",
            rho.dims()
        )));
    }
    // Transpose the larger factor; on ties, the second.
    let larger_factor = if dims[0] > dims[1] { 0 } else { 1 };
    let norm = partial_transpose_norm(rho, larger_factor)?;
    let mut value = (norm - 1.0) / (smaller as f64 - 1.0);
    if (-CLAMP_TOL..0.0).contains(&value) {
        value = 0.0;
    }
    Ok(NegativityValue(value))
}
