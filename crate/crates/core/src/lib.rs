//! Entanglement of a uniformly accelerated qubit-qutrit pair under local
//! filtering.
//!
//! The library builds the one-parameter qubit-qutrit family, accelerates one
//! party through its Unruh mode dictionary, applies a local diagonal filter
//! to either party and measures negativity. [`sweep`] runs parameter grids
//! and writes CSV/SVG, and [`pipeline`] implements the small stage language
//! used by the `unruh-filter-lab eval` command.

pub mod check;
pub mod error;
pub mod filters;
pub mod format;
pub mod measures;
pub mod numerics;
pub mod pipeline;
pub mod rindler;
pub mod states;
pub mod sweep;

pub use error::{Error, Result};
pub use filters::{apply_filter, FilterMode, FilterSpec, PairPolicy};
pub use measures::{negativity, NegativityValue};
pub use numerics::{ComplexMatrix, Dims};
pub use rindler::{accelerate, RindlerParameter};
pub use states::{one_param_state, DensityMatrix, FamilyParameter, Party};

/// Version string stamped into every CSV header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
