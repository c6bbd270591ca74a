//! A laboratory for learning-with-errors experiments over polynomial
//! rings: instance generation, evaluation-at-a-root distinguishing
//! attacks, the number-field geometry governing error-distribution
//! transfer, and a search for vulnerable parameter sets.
//!
//! The library is organized around five pieces:
//!
//! - [`modarith`]: exact arithmetic (prime fields, integer polynomials,
//!   quotient rings `F_q[x]/(f)`, roots mod `q`, orders, discriminants).
//! - [`sampling`]: discretized-Gaussian error models and sample batches,
//!   both coefficient-wise and through the canonical embedding.
//! - [`attacks`]: the evaluation attacks (guess elimination at a root,
//!   small-order value sets, the interval-counting distinguisher with its
//!   closed-form advantage and success probabilities), plus the smearing
//!   checker.
//! - [`geometry`]: complex roots, the real embedding matrix, spectral
//!   distortion, Mahler measure, and the change of basis for monogenic
//!   rings.
//! - [`paramgen`]: the parameter-construction search and the
//!   vulnerability audit.
//!
//! Every generator takes an explicit 64-bit seed and is bit-reproducible;
//! see the `examples/` directory for end-to-end walkthroughs of each
//! capability.

pub mod attacks;
pub mod error;
pub mod formats;
pub mod geometry;
pub mod modarith;
pub mod paramgen;
pub mod sampling;

pub use error::{Error, Result};
