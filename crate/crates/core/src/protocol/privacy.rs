//! Privacy test for a wiretap code.
//!
//! After Bob measures his square-root decoder on the joint output of a
//! codebook `{x_{m,k}}`, the post-measurement state on (decoded message,
//! Eve) should look like `|m⟩⟨m| ⊗ σ_E` for a fixed Eve state `σ_E` that
//! carries no information about `m`. The figure of merit is the trace
//! distance between the actual and ideal states, averaged over a uniform
//! message; the local-key index `k` is averaged out on the channel inputs.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{trace_norm, CMatrix, DensityOperator, HermitianOperator};
use crate::states::{reduce_wiretap, WiretapChannel};

use super::codebook::CodebookSample;
use super::decoder::SrmDecoder;

/// Largest admissible work product `M·K·d_B·d_E` for the privacy test.
pub const MAX_PRIVACY_WORK: u64 = 1 << 20;

/// Partial trace over Bob of `(eff ⊗ I_E)·ρ_BE`. Cyclicity inside the traced
/// factor makes this Hermitian whenever `eff` and `ρ_BE` are, so the double
/// sum is symmetrized only to strip rounding noise.
fn keep_e_after_effect(
    eff: &HermitianOperator,
    joint_be: &CMatrix,
    d_b: usize,
    d_e: usize,
) -> HermitianOperator {
    let out = CMatrix::from_fn(d_e, |e, ep| {
        let mut acc = Complex64::new(0.0, 0.0);
        for b in 0..d_b {
            for b2 in 0..d_b {
                acc += eff.matrix().get(b, b2) * joint_be.get(b2 * d_e + e, b * d_e + ep);
            }
        }
        acc
    });
    HermitianOperator::symmetrized_from(out)
}

/// Average trace-distance privacy error of a codebook under a decoder.
///
/// For each message `m` the channel acts on a uniformly random local key
/// `k`, Bob measures, and Eve keeps her register; the result is compared
/// with `|m⟩⟨m| ⊗ σ_E`. When `reference_e` is `None`, `σ_E` is Eve's
/// average output under the channel's default input distribution.
pub fn privacy_error(
    ch: &WiretapChannel,
    codebook: &CodebookSample,
    decoder: &SrmDecoder,
    reference_e: Option<&DensityOperator>,
) -> Result<f64> {
    if codebook.num_symbols() != ch.num_symbols() {
        return Err(Error::DimMismatch {
            expected: ch.num_symbols(),
            actual: codebook.num_symbols(),
        });
    }
    if let Some(sigma) = reference_e {
        if sigma.dim() != ch.d_e() {
            return Err(Error::DimMismatch {
                expected: ch.d_e(),
                actual: sigma.dim(),
            });
        }
    }
    let m_count = codebook.m_count();
    let k_count = codebook.k_count();
    let work = (m_count as u64)
        .saturating_mul(k_count as u64)
        .saturating_mul(ch.d_b() as u64)
        .saturating_mul(ch.d_e() as u64);
    if work > MAX_PRIVACY_WORK {
        return Err(Error::ResourceLimit(format!(
            "privacy test would touch M·K·d_B·d_E = {work} amplitudes \
             (limit {MAX_PRIVACY_WORK})"
        )));
    }
    if decoder.dim() != ch.d_b() {
        return Err(Error::DimMismatch {
            expected: ch.d_b(),
            actual: decoder.dim(),
        });
    }
    if decoder.m_count() != m_count || decoder.k_count() != k_count {
        return Err(Error::InvalidParameter(format!(
            "decoder shape {}x{} does not match codebook shape {m_count}x{k_count}",
            decoder.m_count(),
            decoder.k_count()
        )));
    }

    let sigma = match reference_e {
        Some(s) => s.clone(),
        None => reduce_wiretap(ch, &ch.default_p_x())?.rho_e,
    };
    let d_b = ch.d_b();
    let d_e = ch.d_e();

    let mut total = 0.0;
    for m in 0..m_count {
        // Channel output for message m with the key averaged out.
        let mut joint = CMatrix::zeros(d_b * d_e);
        for k in 0..k_count {
            let x = codebook.codeword(m, k);
            joint.add_scaled_assign(ch.output(x).matrix(), 1.0 / k_count as f64)?;
        }
        // Block-diagonal trace distance: off-target outcomes contribute their
        // full weight, the target outcome is compared against σ_E, and the
        // abort outcome contributes its weight.
        let mut dist = 0.0;
        for m2 in 0..m_count {
            let kept = keep_e_after_effect(&decoder.message_effect(m2)?, &joint, d_b, d_e);
            if m2 == m {
                dist += trace_norm(&kept.sub(sigma.op())?)?;
            } else {
                dist += trace_norm(&kept)?;
            }
        }
        let aborted = keep_e_after_effect(decoder.completion(), &joint, d_b, d_e);
        dist += trace_norm(&aborted)?;
        total += 0.5 * dist;
    }
    Ok((total / m_count as f64).clamp(0.0, 1.0))
}
