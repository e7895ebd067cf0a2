//! Finite-size protocol simulation: random codebooks, square-root decoders,
//! convex splitting, and the operator inequality behind the union bound.
//!
//! These routines exercise, at small dimensions, the same objects the rate
//! bounds reason about abstractly: a codebook is drawn i.i.d. from the input
//! distribution, Bob decodes with the square-root measurement built from a
//! hypothesis test, Eve's correlations are measured against a decoupled
//! reference, and the convex-split fidelity certifies how quickly key
//! randomization hides the input.

mod codebook;
mod convex;
mod decoder;
mod hn;
mod privacy;

pub use codebook::CodebookSample;
pub use convex::{
    convex_split_fidelity, convex_split_state, ConvexSplitState, MAX_SPLIT_STRINGS,
};
pub use decoder::{
    build_decoder, decode_error, mc_average_error, McErrorStats, SrmDecoder,
    DECODER_COMPLETENESS_TOL, DECODER_PSD_TOL,
};
pub use hn::hn_residual;
pub use privacy::{privacy_error, MAX_PRIVACY_WORK};
