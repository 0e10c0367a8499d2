//! Canonical metrics on maximal nilpotent subalgebras of Kac–Moody algebras.
//!
//! [`construct::build`] produces `N(A)` degree by degree from a symmetrizable
//! generalized Cartan matrix, with the Euclidean structure that makes the
//! Laplace operator of its chain complex act on each multidegree `k` as the
//! scalar `E(k)`. The remaining modules verify that property, compare with
//! explicit reference algebras, and compute spectra and cohomology.

pub mod cartan;
pub mod cli;
pub mod cohomology;
pub mod construct;
pub mod error;
pub mod grading;
pub mod liealg;
pub mod oracles;
pub mod par;
pub mod spectrum;

pub use cartan::{CartanMatrix, MultiDegree};
pub use construct::{build, BuildOptions, Construction};
pub use error::{Error, Result};
pub use grading::Bound;
pub use liealg::{AlgebraDump, Chain, GradedAlgebra};
