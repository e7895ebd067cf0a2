//! Numerical toolkit for private communication over classical-input
//! quantum-output (cq) wiretap channels.
//!
//! The crate computes one-shot and second-order achievable rates for private
//! communication and verifies, at desk scale, the structural inequalities the
//! achievability argument rests on: quantum Neyman–Pearson tests, the
//! Hayashi–Nagaoka operator inequality, convex-split smoothing, and
//! position-based decoding.
//!
//! Layout:
//! - [`linalg`]: dense Hermitian linear algebra and state metrics
//! - [`states`]: cq states, wiretap channels, the BPSK/pure-loss model
//! - [`divergences`]: relative entropies, hypothesis-testing and max-relative
//!   entropies
//! - [`bounds`]: one-shot and second-order achievable-rate bounds
//! - [`protocol`]: codebook sampling, square-root decoding, convex splitting
//! - [`verify`]: randomized verification batteries behind the CLI

pub mod bounds;
pub mod divergences;
pub mod error;
pub mod linalg;
pub mod protocol;
pub mod states;
pub mod textfmt;
pub mod verify;

pub use error::{Error, Result};
