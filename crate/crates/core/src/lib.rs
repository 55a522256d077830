//! Row reduction of triangular resistor grids in exact and high-precision
//! arithmetic, with edge-factor checks, a Laplacian cross-check and a
//! rational-function identity verifier.

pub mod edge_factors;
pub mod error;
pub mod evidence;
pub mod grid;
pub mod oracle;
pub mod reduction;
pub mod scalar;
pub mod symbolic;
pub mod transforms;

pub use error::{Error, Result};
pub use grid::{factor_grid, uniform_grid, Edge, TriGrid};
pub use scalar::{BigFloat, Mode, Real, Scalar};
