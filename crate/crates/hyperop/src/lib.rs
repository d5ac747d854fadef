//! Numerical operator theory over the quaternions `H` and octonions `O`.
//!
//! The crate implements, at finite dimension, the pieces that make the
//! noncommutative (and for `O` nonassociative) theory computable:
//!
//! * exact Cayley-Dickson arithmetic and the coordinate-extraction
//!   identities ([`algebra`]);
//! * modules `K^n` with the `K`-valued scalar product, orthogonalization and
//!   norm-preserving functional extension ([`kmodule`]);
//! * quasilinear operators as real matrices on flattened coordinates, with
//!   adjoints, norms and linearity classification ([`operator`]);
//! * spectra, resolvents, Neumann series, the spectral radius and the
//!   spectral decomposition of selfadjoint right-linear operators
//!   ([`spectral`]);
//! * polynomial, continuous and contour functional calculi, square roots,
//!   polar decompositions, Cayley transforms and one-parameter unitary
//!   groups ([`calculus`]);
//! * graded projections and the lattice of closed `K`-subspaces
//!   ([`projections`]);
//! * states, the GNS construction, discrete `K`-valued measures and
//!   norm-bounded interpolation ([`states`]);
//! * seeded property-verification suites for all of the above ([`verify`]).
//!
//! A companion guide with worked examples lives in the `book/` directory of
//! the repository; its code snippets are compiled as doc-tests.

pub mod algebra;
pub mod calculus;
pub mod error;
pub mod json;
pub mod kmodule;
pub mod linalg;
pub mod operator;
pub mod projections;
pub mod sample;
pub mod spectral;
pub mod states;
pub mod verify;

pub use algebra::{Algebra, Hypercomplex};
pub use error::{Error, Result};
pub use kmodule::{KFunctional, KVector};
pub use operator::QuasilinearOp;
pub use projections::GradedProjection;
pub use spectral::{SpectralDecomposition, SpectrumEstimate};
pub use states::{GnsResult, KMeasure, StateFunctional, WeightFunctional};

#[cfg(doctest)]
mod book_tests;
