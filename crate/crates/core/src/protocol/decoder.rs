//! Square-root-measurement decoding from an optimal blockwise test.
//!
//! A codebook places one test block `Q^{x_{m,k}}` per codeword; the decoder
//! elements are `Ω_{m,k} = (ΣQ)^{−1/2} Q^{x_{m,k}} (ΣQ)^{−1/2}` with the
//! inverse square root on the support of the sum, completed to a POVM by the
//! projector onto the orthogonal complement of that support.
//! `mc_average_error` estimates the codebook-averaged decoding error by
//! sampling codebooks, computing each codebook's average error exactly.

use serde::Serialize;

use crate::divergences::CqNpTestResult;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianOperator, KERNEL_TOL, PSD_TOL, SUPPORT_CUTOFF};
use crate::states::{reduce_wiretap, CqState, WiretapChannel};

use super::codebook::CodebookSample;

/// Largest admissible negative eigenvalue of a decoder element.
pub const DECODER_PSD_TOL: f64 = 1e-9;
/// Largest admissible spectral deviation of the POVM sum from the identity.
pub const DECODER_COMPLETENESS_TOL: f64 = 1e-8;

/// Square-root-measurement POVM: one element per codeword pair `(m, k)` plus
/// a completion element supported off the measurement range.
#[derive(Debug, Clone)]
pub struct SrmDecoder {
    elements: Vec<HermitianOperator>,
    completion: HermitianOperator,
    m_count: usize,
    k_count: usize,
}

impl SrmDecoder {
    fn new(
        elements: Vec<HermitianOperator>,
        completion: HermitianOperator,
        m_count: usize,
        k_count: usize,
    ) -> Result<Self> {
        if elements.len() != m_count * k_count {
            return Err(Error::DimMismatch {
                expected: m_count * k_count,
                actual: elements.len(),
            });
        }
        let dim = completion.dim();
        let mut sum = completion.matrix().clone();
        for el in &elements {
            if el.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    actual: el.dim(),
                });
            }
            let min = el.eig()?.min_eigenvalue();
            if min < -DECODER_PSD_TOL {
                return Err(Error::Decoder(format!(
                    "measurement element has negative eigenvalue {min}"
                )));
            }
            sum.add_scaled_assign(el.matrix(), 1.0)?;
        }
        let defect = HermitianOperator::symmetrized_from(sum)
            .sub(&HermitianOperator::identity(dim))?
            .eig()?
            .max_abs_eigenvalue();
        if defect > DECODER_COMPLETENESS_TOL {
            return Err(Error::Decoder(format!(
                "measurement elements sum to the identity only within {defect:.3e}"
            )));
        }
        Ok(SrmDecoder {
            elements,
            completion,
            m_count,
            k_count,
        })
    }

    pub fn m_count(&self) -> usize {
        self.m_count
    }

    pub fn k_count(&self) -> usize {
        self.k_count
    }

    pub fn dim(&self) -> usize {
        self.completion.dim()
    }

    /// Element for codeword `(m, k)`.
    pub fn element(&self, m: usize, k: usize) -> &HermitianOperator {
        &self.elements[m * self.k_count + k]
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn completion(&self) -> &HermitianOperator {
        &self.completion
    }

    /// Key-summed effect `Σ_k Ω_{m,k}` deciding message `m`.
    pub fn message_effect(&self, m: usize) -> Result<HermitianOperator> {
        if m >= self.m_count {
            return Err(Error::InvalidParameter(format!(
                "message index {m} outside 0..{}",
                self.m_count
            )));
        }
        let mut acc = CMatrix::zeros(self.dim());
        for k in 0..self.k_count {
            acc.add_scaled_assign(self.element(m, k).matrix(), 1.0)?;
        }
        Ok(HermitianOperator::symmetrized_from(acc))
    }
}

/// Build the square-root measurement for `codebook` from the per-symbol
/// blocks of an optimal cq test.
pub fn build_decoder(codebook: &CodebookSample, test: &CqNpTestResult) -> Result<SrmDecoder> {
    if codebook.num_symbols() != test.q_blocks.len() {
        return Err(Error::DimMismatch {
            expected: test.q_blocks.len(),
            actual: codebook.num_symbols(),
        });
    }
    let dim = test.q_blocks[0].dim();
    let mut sum = CMatrix::zeros(dim);
    for row in codebook.rows() {
        for &x in row {
            sum.add_scaled_assign(test.q_blocks[x].matrix(), 1.0)?;
        }
    }
    let sum_op = HermitianOperator::symmetrized_from(sum);
    let eig = sum_op.eig()?;
    let scale = eig.max_abs_eigenvalue();
    if scale <= KERNEL_TOL {
        return Err(Error::Decoder(
            "sum of codeword test blocks is zero; no measurement direction exists".into(),
        ));
    }
    if eig.min_eigenvalue() < -PSD_TOL * scale.max(1.0) {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.min_eigenvalue(),
        });
    }
    let cutoff = SUPPORT_CUTOFF * scale;
    let root = eig.weighted_sum(|l| if l <= cutoff { 0.0 } else { l.sqrt().recip() });
    let mut elements = Vec::with_capacity(codebook.m_count() * codebook.k_count());
    for row in codebook.rows() {
        for &x in row {
            let sandwiched = root.mul(test.q_blocks[x].matrix())?.mul(&root)?;
            elements.push(HermitianOperator::symmetrized_from(sandwiched));
        }
    }
    let completion = HermitianOperator::identity(dim)
        .sub(&HermitianOperator::symmetrized_from(
            eig.projector_where(|l| l > cutoff),
        ))?;
    SrmDecoder::new(elements, completion, codebook.m_count(), codebook.k_count())
}

/// Probability that measuring Bob's output for codeword `(m, k)` does *not*
/// return the outcome `(m, k)`: `1 − Tr{Ω_{m,k} ρ_B^{x_{m,k}}}`.
pub fn decode_error(
    rho_xb: &CqState,
    codebook: &CodebookSample,
    decoder: &SrmDecoder,
    m: usize,
    k: usize,
) -> Result<f64> {
    if codebook.m_count() != decoder.m_count() || codebook.k_count() != decoder.k_count() {
        return Err(Error::Decoder(
            "codebook and decoder shapes disagree".into(),
        ));
    }
    if codebook.num_symbols() != rho_xb.num_symbols() {
        return Err(Error::DimMismatch {
            expected: rho_xb.num_symbols(),
            actual: codebook.num_symbols(),
        });
    }
    if m >= codebook.m_count() || k >= codebook.k_count() {
        return Err(Error::InvalidParameter(format!(
            "codeword index ({m}, {k}) outside {}×{}",
            codebook.m_count(),
            codebook.k_count()
        )));
    }
    let x = codebook.codeword(m, k);
    let p = 1.0 - rho_xb.block(x).expectation(decoder.element(m, k))?;
    if !(-DECODER_PSD_TOL..=1.0 + DECODER_PSD_TOL).contains(&p) {
        return Err(Error::Decoder(format!(
            "decoding error probability {p} outside [0, 1]"
        )));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Monte-Carlo statistics of the codebook-averaged decoding error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct McErrorStats {
    /// Sample mean over codebooks of the exact per-codebook average error.
    pub mean: f64,
    /// Normal-approximation 95% half-width: `1.96·s/√trials`.
    pub ci95: f64,
    pub trials: u64,
    /// `log₂(M·K)` of the simulated codebooks.
    pub log2_mk: f64,
    /// Set when `log₂(MK)` exceeds the hypothesis-testing information of the
    /// pinned test, in which case no small-error guarantee is claimed.
    pub over_info_budget: bool,
}

/// Average the exact per-codebook decoding error over `trials` codebooks
/// drawn i.i.d. from `p_x` with per-trial seeds `seed`, `seed+1`, …
pub fn mc_average_error(
    ch: &WiretapChannel,
    p_x: &[f64],
    m_count: usize,
    k_count: usize,
    test: &CqNpTestResult,
    trials: u64,
    seed: u64,
) -> Result<McErrorStats> {
    if trials < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 trials for a confidence interval, got {trials}"
        )));
    }
    let red = reduce_wiretap(ch, p_x)?;
    let pairs = (m_count * k_count) as f64;
    let mut mean = 0.0;
    let mut sq_dist = 0.0;
    for trial in 0..trials {
        let cb = CodebookSample::draw(p_x, m_count, k_count, seed.wrapping_add(trial))?;
        let dec = build_decoder(&cb, test)?;
        // Compensated sum of the MK per-codeword errors.
        let mut acc = 0.0;
        let mut comp = 0.0;
        for m in 0..m_count {
            for k in 0..k_count {
                let e = decode_error(&red.rho_xb, &cb, &dec, m, k)?;
                let y = e - comp;
                let t = acc + y;
                comp = (t - acc) - y;
                acc = t;
            }
        }
        let avg = acc / pairs;
        let count = (trial + 1) as f64;
        let delta = avg - mean;
        mean += delta / count;
        sq_dist += delta * (avg - mean);
    }
    let variance = (sq_dist / (trials as f64 - 1.0)).max(0.0);
    let ci95 = 1.96 * (variance / trials as f64).sqrt();
    let log2_mk = pairs.log2();
    Ok(McErrorStats {
        mean,
        ci95,
        trials,
        log2_mk,
        over_info_budget: log2_mk > test.value_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergences::d_h_epsilon_cq;
    use crate::linalg::DensityOperator;
    use num_complex::Complex64;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_density(dim: usize, rng: &mut StdRng) -> DensityOperator {
        let g = CMatrix::from_fn(dim, |_, _| {
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let gg = g.mul(&g.adjoint()).unwrap();
        let tr = gg.trace().re;
        DensityOperator::from_matrix(gg.scaled(1.0 / tr)).unwrap()
    }

    fn random_cq(n: usize, d: usize, rng: &mut StdRng) -> CqState {
        let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 0.2).collect();
        let sum: f64 = raw.iter().sum();
        CqState::new(
            (0..n).map(|i| i.to_string()).collect(),
            raw.iter().map(|r| r / sum).collect(),
            (0..n).map(|_| random_density(d, rng)).collect(),
        )
        .unwrap()
    }

    fn basis_state(dim: usize, k: usize) -> DensityOperator {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[k] = Complex64::new(1.0, 0.0);
        DensityOperator::pure(&v).unwrap()
    }

    /// Classical channel |x⟩ → |x⟩ on `n` symbols.
    fn orthogonal_cq(n: usize) -> CqState {
        CqState::new(
            (0..n).map(|i| i.to_string()).collect(),
            vec![1.0 / n as f64; n],
            (0..n).map(|x| basis_state(n, x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_codeword_collapses_to_support_projector() {
        let state = orthogonal_cq(2);
        let test = d_h_epsilon_cq(&state, 0.05).unwrap();
        let cb = CodebookSample::from_codewords(vec![vec![0]], 2, 1).unwrap();
        let dec = build_decoder(&cb, &test).unwrap();
        // The single element is the support projector of Q^{x₁}.
        let q_eig = test.q_blocks[0].eig().unwrap();
        let proj = HermitianOperator::symmetrized_from(
            q_eig.projector_where(|l| l > SUPPORT_CUTOFF * q_eig.max_abs_eigenvalue()),
        );
        let defect = dec.element(0, 0).sub(&proj).unwrap().eig().unwrap().max_abs_eigenvalue();
        assert!(defect < 1e-9, "element differs from support projector by {defect}");
        let e = decode_error(&state, &cb, &dec, 0, 0).unwrap();
        assert!(e <= 0.05 + 1e-9, "single-codeword error {e} above the target");
    }

    #[test]
    fn distinct_orthogonal_codewords_decode_perfectly() {
        let state = orthogonal_cq(3);
        let test = d_h_epsilon_cq(&state, 0.1).unwrap();
        let cb =
            CodebookSample::from_codewords(vec![vec![0], vec![1], vec![2]], 3, 1).unwrap();
        let dec = build_decoder(&cb, &test).unwrap();
        for m in 0..3 {
            let e = decode_error(&state, &cb, &dec, m, 0).unwrap();
            assert!(e < 1e-10, "message {m}: error {e}");
            // Elements are the orthogonal rank-1 projectors.
            let defect = dec
                .element(m, 0)
                .sub(basis_state(3, m).op())
                .unwrap()
                .eig()
                .unwrap()
                .max_abs_eigenvalue();
            assert!(defect < 1e-9, "message {m}: projector defect {defect}");
        }
    }

    #[test]
    fn outcome_probabilities_are_complete() {
        let mut rng = StdRng::seed_from_u64(17);
        let state = random_cq(4, 3, &mut rng);
        let test = d_h_epsilon_cq(&state, 0.2).unwrap();
        let cb = CodebookSample::draw(state.p_x(), 3, 2, 5).unwrap();
        let dec = build_decoder(&cb, &test).unwrap();
        for x in 0..state.num_symbols() {
            let rho = state.block(x);
            let mut total = rho.expectation(dec.completion()).unwrap();
            for el in dec.elements() {
                let p = rho.expectation(el).unwrap();
                assert!(p >= -1e-9, "negative outcome probability {p}");
                total += p;
            }
            assert!(
                (total - 1.0).abs() < 1e-8,
                "input {x}: outcome probabilities sum to {total}"
            );
        }
    }

    #[test]
    fn permuting_messages_permutes_elements_and_errors() {
        let mut rng = StdRng::seed_from_u64(23);
        let state = random_cq(4, 3, &mut rng);
        let test = d_h_epsilon_cq(&state, 0.15).unwrap();
        let cb = CodebookSample::draw(state.p_x(), 3, 2, 11).unwrap();
        let perm = [2, 0, 1];
        let cb_p = cb.permuted_messages(&perm).unwrap();
        let dec = build_decoder(&cb, &test).unwrap();
        let dec_p = build_decoder(&cb_p, &test).unwrap();
        for (m, &pm) in perm.iter().enumerate() {
            for k in 0..2 {
                let defect = dec_p
                    .element(m, k)
                    .sub(dec.element(pm, k))
                    .unwrap()
                    .eig()
                    .unwrap()
                    .max_abs_eigenvalue();
                assert!(defect < 1e-12, "covariance defect {defect} at ({m}, {k})");
                let e = decode_error(&state, &cb, &dec, pm, k).unwrap();
                let e_p = decode_error(&state, &cb_p, &dec_p, m, k).unwrap();
                assert!((e - e_p).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_and_mismatched_inputs_are_rejected() {
        let state = orthogonal_cq(2);
        let mut test = d_h_epsilon_cq(&state, 0.1).unwrap();
        let cb = CodebookSample::from_codewords(vec![vec![0]], 2, 0).unwrap();
        // All-zero blocks: no measurement direction.
        test.q_blocks = vec![HermitianOperator::zero(2), HermitianOperator::zero(2)];
        assert!(matches!(
            build_decoder(&cb, &test),
            Err(Error::Decoder(_))
        ));
        // Alphabet mismatch.
        let test3 = d_h_epsilon_cq(&orthogonal_cq(3), 0.1).unwrap();
        assert!(build_decoder(&cb, &test3).is_err());
    }

    /// Two-symbol wiretap channel with orthogonal Bob states and a constant
    /// maximally mixed Eve state.
    fn orthogonal_bob_channel() -> WiretapChannel {
        let eve = DensityOperator::maximally_mixed(2);
        let outputs = (0..2).map(|x| basis_state(2, x).tensor(&eve)).collect();
        WiretapChannel::new(vec!["0".into(), "1".into()], 2, 2, outputs, None).unwrap()
    }

    /// Channel whose Bob marginal is constant (Eve sees everything).
    fn constant_bob_channel() -> WiretapChannel {
        let bob = DensityOperator::maximally_mixed(2);
        let outputs = (0..2).map(|x| bob.tensor(&basis_state(2, x))).collect();
        WiretapChannel::new(vec!["0".into(), "1".into()], 2, 2, outputs, None).unwrap()
    }

    #[test]
    fn mc_on_non_informative_channel_is_deterministic() {
        let ch = constant_bob_channel();
        let p_x = [0.5, 0.5];
        let red = reduce_wiretap(&ch, &p_x).unwrap();
        let test = d_h_epsilon_cq(&red.rho_xb, 0.2).unwrap();
        let stats = mc_average_error(&ch, &p_x, 1, 1, &test, 50, 3).unwrap();
        // Every trial collapses to 1 − Tr{Π ρ_B} for the same support
        // projector, so the spread is exactly zero.
        let cb = CodebookSample::draw(&p_x, 1, 1, 3).unwrap();
        let dec = build_decoder(&cb, &test).unwrap();
        let single = decode_error(&red.rho_xb, &cb, &dec, 0, 0).unwrap();
        assert_eq!(stats.mean, single);
        assert_eq!(stats.ci95, 0.0);
    }

    #[test]
    fn mc_on_orthogonal_channel_with_single_codeword_is_errorless() {
        let ch = orthogonal_bob_channel();
        let p_x = [0.5, 0.5];
        let red = reduce_wiretap(&ch, &p_x).unwrap();
        let test = d_h_epsilon_cq(&red.rho_xb, 0.05).unwrap();
        let stats = mc_average_error(&ch, &p_x, 1, 1, &test, 40, 9).unwrap();
        assert!(stats.mean < 1e-12, "mean {}", stats.mean);
        assert!(!stats.over_info_budget);
    }

    #[test]
    fn mc_flags_codebooks_beyond_the_information_budget() {
        let ch = orthogonal_bob_channel();
        let p_x = [0.5, 0.5];
        let red = reduce_wiretap(&ch, &p_x).unwrap();
        let test = d_h_epsilon_cq(&red.rho_xb, 0.05).unwrap();
        // log₂(MK) = 3 exceeds I_H ≈ 1.074.
        let stats = mc_average_error(&ch, &p_x, 4, 2, &test, 20, 1).unwrap();
        assert!(stats.over_info_budget);
        assert!(stats.mean >= 0.0 && stats.mean <= 1.0);
    }

    #[test]
    fn mc_is_reproducible() {
        let mut rng = StdRng::seed_from_u64(31);
        let eve = random_density(2, &mut rng);
        let outputs = (0..3)
            .map(|_| random_density(2, &mut rng).tensor(&eve))
            .collect();
        let ch = WiretapChannel::new(
            vec!["0".into(), "1".into(), "2".into()],
            2,
            2,
            outputs,
            None,
        )
        .unwrap();
        let p_x = [0.3, 0.3, 0.4];
        let red = reduce_wiretap(&ch, &p_x).unwrap();
        let test = d_h_epsilon_cq(&red.rho_xb, 0.15).unwrap();
        let a = mc_average_error(&ch, &p_x, 2, 2, &test, 25, 77).unwrap();
        let b = mc_average_error(&ch, &p_x, 2, 2, &test, 25, 77).unwrap();
        assert_eq!(a.mean, b.mean);
        assert_eq!(a.ci95, b.ci95);
        assert!(mc_average_error(&ch, &p_x, 2, 2, &test, 1, 77).is_err());
    }
}
