//! z-measures on Young diagrams, the Robinson–Schensted–Knuth correspondences
//! that realize their integer degenerations, and the family of determinantal
//! correlation kernels (hypergeometric, Meixner, Charlier, Laguerre, Hermite,
//! Plancherel, Whittaker, Airy, sine) together with the brute-force oracles
//! and limit-transition harness that tie them together.
//!
//! Exact quantities (dimensions, tableau counts, measures with rational
//! parameters) use arbitrary-precision integers and rationals. Kernels are
//! evaluated in `f64`.

pub mod error;
pub mod kernels;
pub mod measures;
pub mod parse;
pub mod partitions;
pub mod rsk;
pub mod sampling;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;
