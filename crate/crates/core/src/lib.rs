//! Coherent catalysis in collective-spin quantum annealing.
//!
//! Exact diagonalization of driven p-spin and LMG Hamiltonians, the
//! variable-mass continuum map, scale-free piecewise double wells,
//! control-landscape saddles with scaling fits, and shortest-path schedules.

// `!(x > 0.0)` is how NaN gets rejected; index loops mirror the band formulas
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod banded;
pub mod catalysis;
pub mod cli;
pub mod continuum;
pub mod doublewell;
pub mod error;
pub mod exec;
pub mod fit;
pub mod optimize;
pub mod pathfinder;
pub mod spectrum;
pub mod spinspace;

pub use banded::BandedSymmetricMatrix;
pub use error::{Error, Result};
pub use exec::Exec;
