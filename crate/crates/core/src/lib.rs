//! Structured-grid finite-volume solver for the compressible Navier-Stokes
//! equations, built so that the face-reconstruction scheme (PPM, WENO-Z 3/5/7)
//! and the face-flux quadrature rule (midpoint vs. 2-point Gauss) can be
//! chosen independently, together with the benchmark problems and analysis
//! tools needed to study how those two choices interact.

pub mod analysis;
pub mod cases;
pub mod field;
pub mod flux;
pub mod gas;
pub mod grid;
pub mod integrator;
pub mod reconstruct;
pub mod spectral;

pub use field::{ConservedField, FieldScalar};
pub use gas::{ConservedState, GasModel, PrimitiveState, StateError, TransportCoeffs};
pub use grid::{Boundary, CartesianGrid};
