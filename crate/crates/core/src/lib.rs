//! Spectral computations for off-diagonally dominant self-adjoint block
//! operator matrices and for the angular part of the Dirac equation in the
//! Kerr-Newman geometry.
//!
//! The crate is organised in four layers:
//!
//! * [`blockmat`]: finite-dimensional block matrices `[[T11, T12], [T12*, T22]]`,
//!   their Schur complements, the quadratic numerical range functional and the
//!   variational (min-max) characterisation of the eigenvalues to the right of
//!   `max σ(T22)`, checked against a dense eigendecomposition.
//! * [`angular`]: closed-form two-sided eigenvalue bounds for the angular
//!   operator in terms of the physical parameters `(am, aω, k)`.
//! * [`solver`]: numerical eigenvalues and eigenfunctions of the angular
//!   operator (shooting with Frobenius starts, and a Jacobi-Galerkin cross-check),
//!   with enumeration by continuation from `a = 0`.
//! * [`fixtures`] and [`report`]: reference tables and the row/report builders
//!   used by the command line tool and the browser demo.

pub mod angular;
pub mod blockmat;
pub mod fixtures;
pub mod report;
pub mod solver;

pub use blockmat::HermitianBlockMatrix;
