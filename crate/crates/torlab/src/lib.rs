//! torlab: a verification laboratory for integer toral dynamics.
//!
//! The crate builds up from exact torus arithmetic to an end-to-end
//! constructor of points that simultaneously equidistribute under one
//! endomorphism and keep a nondense orbit under another:
//!
//! * [`torus`]: fixed-point arithmetic on `T^d` with certified error bounds.
//! * [`poly`] and [`spectral`]: exact eigenstructure screening (ergodicity,
//!   hyperbolic vs quasihyperbolic classification, stable/central/unstable
//!   splittings, complement selection).
//! * [`game`]: the (alpha, beta)-game engine with the avoidance strategy,
//!   the projection combinator, and the round-robin combinator.
//! * [`equidist`]: Weyl sums, exact spectral-Fourier kernels, shadowing gaps.
//! * [`entropy`]: eigenvalue entropy and a spanning-set estimator.
//! * [`dimension`]: box-counting dimension and the slicing lower bound.
//! * [`construct`]: the certified construction pipeline.

pub mod construct;
pub mod dimension;
pub mod entropy;
pub mod equidist;
pub mod game;
pub mod poly;
pub mod spectral;
pub mod torus;
pub mod util;

pub use torus::{IntMatrix, TorusPoint};
