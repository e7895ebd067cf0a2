//! Achievable-rate bounds.
//!
//! One-shot lower bounds are assembled from the hypothesis-testing and
//! max-information primitives in [`crate::divergences`] and returned as
//! [`BoundReport`]s whose signed terms sum to the rate. Slack-parameter
//! preconditions are reported through the `valid` flag rather than as errors,
//! and negative rates are kept (flagged `vacuous`) instead of clamped.
//!
//! Second-order (normal-approximation) rates drop the `O(log n)` remainder;
//! the binary-phase family uses the closed-form eigenvalues from
//! [`crate::states::BpskParams`] together with the binary entropy `h₂` and
//! entropy variance `v₂`, and is benchmarked against the energy-constrained
//! private capacity `g(ηn̄) − g((1−η)n̄)`.

mod normal;

pub use normal::{normal_cdf, phi_inv};

use serde::Serialize;

use crate::divergences::{d_h_epsilon_cq, entropy, entropy_variance, i_max_upper, mutual_info};
use crate::error::{Error, Result};
use crate::linalg::DensityOperator;
use crate::states::{reduce_wiretap, BpskParams, CqState, WiretapChannel};

/// One signed contribution to a rate bound.
#[derive(Debug, Clone, Serialize)]
pub struct BoundTerm {
    pub name: &'static str,
    pub value_bits: f64,
}

/// Parameters a bound was evaluated at; fields not consumed by the bound stay
/// `None`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundParams {
    pub eps1: f64,
    pub eps2: Option<f64>,
    pub eta1: Option<f64>,
    pub eta2: Option<f64>,
    pub gamma: Option<f64>,
    pub n: Option<u64>,
}

impl BoundParams {
    fn one_shot(eps1: f64) -> Self {
        BoundParams {
            eps1,
            eps2: None,
            eta1: None,
            eta2: None,
            gamma: None,
            n: None,
        }
    }
}

/// An achievable-rate statement: the rate in bits, its itemized terms, the
/// parameters used, and validity/vacuity flags.
///
/// `rate_bits` is the signed sum of `terms` and is meaningful only when
/// `valid` is true; a slack-parameter precondition failure produces a report
/// with `valid = false` and an explanatory reason instead of an error.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub rate_bits: f64,
    pub terms: Vec<BoundTerm>,
    pub params: BoundParams,
    pub valid: bool,
    pub invalid_reason: Option<String>,
    /// True when the (valid) rate is negative: the bound holds but certifies
    /// nothing.
    pub vacuous: bool,
    /// Total decodable size log₂(MK) implied by the private bound.
    pub log2_mk: Option<f64>,
    /// Key size log₂(K) the private bound spends on randomizing the
    /// eavesdropper.
    pub log2_k: Option<f64>,
}

impl BoundReport {
    fn from_terms(
        params: BoundParams,
        terms: Vec<BoundTerm>,
        log2_mk: Option<f64>,
        log2_k: Option<f64>,
    ) -> Self {
        let rate_bits: f64 = terms.iter().map(|t| t.value_bits).sum();
        BoundReport {
            rate_bits,
            vacuous: rate_bits < 0.0,
            terms,
            params,
            valid: true,
            invalid_reason: None,
            log2_mk,
            log2_k,
        }
    }

    fn invalid(params: BoundParams, reason: String) -> Self {
        BoundReport {
            rate_bits: 0.0,
            terms: Vec::new(),
            params,
            valid: false,
            invalid_reason: Some(reason),
            vacuous: false,
            log2_mk: None,
            log2_k: None,
        }
    }
}

/// One-shot lower bound on public (non-private) classical communication:
/// `I_H^{ε−η}(X;B) − log₂(4ε/η²)`, with one further bit removed under the
/// maximal-error criterion (expurgating the worst half of the codewords).
pub fn oneshot_public_lower(
    state: &CqState,
    eps: f64,
    eta: f64,
    maximal_error: bool,
) -> Result<BoundReport> {
    let params = BoundParams {
        eta1: Some(eta),
        ..BoundParams::one_shot(eps)
    };
    if !(eps > 0.0 && eps < 1.0) {
        return Ok(BoundReport::invalid(
            params,
            format!("error tolerance eps = {eps} must lie in (0, 1)"),
        ));
    }
    if !(eta > 0.0 && eta < eps) {
        return Ok(BoundReport::invalid(
            params,
            format!("slack eta = {eta} must lie in (0, eps) = (0, {eps})"),
        ));
    }
    let np = d_h_epsilon_cq(state, eps - eta)?;
    let mut terms = vec![
        BoundTerm {
            name: "hypothesis_testing_info",
            value_bits: np.value_bits,
        },
        BoundTerm {
            name: "decoding_penalty",
            value_bits: -(4.0 * eps / (eta * eta)).log2(),
        },
    ];
    if maximal_error {
        terms.push(BoundTerm {
            name: "maximal_error_halving",
            value_bits: -1.0,
        });
    }
    Ok(BoundReport::from_terms(params, terms, None, None))
}

/// One-shot lower bound on private communication over a wiretap channel:
/// `I_H^{ε₁−η₁}(X;B) − i_max(E;X) − log₂(4ε₁/η₁²) − 2log₂(1/η₂)`,
/// where the eavesdropper's smoothed max-information is replaced by its
/// certified unsmoothed upper bound [`i_max_upper`].
///
/// The report also carries the implied total decodable size `log2_mk` and the
/// key size `log2_k`; the rate is their difference.
pub fn oneshot_private_lower(
    ch: &WiretapChannel,
    p_x: &[f64],
    eps1: f64,
    eps2: f64,
    eta1: f64,
    eta2: f64,
) -> Result<BoundReport> {
    let params = BoundParams {
        eps2: Some(eps2),
        eta1: Some(eta1),
        eta2: Some(eta2),
        ..BoundParams::one_shot(eps1)
    };
    if eps2.is_nan() || eps2 < 0.0 {
        return Ok(BoundReport::invalid(
            params,
            format!("secrecy tolerance eps2 = {eps2} must be ≥ 0"),
        ));
    }
    let root_eps2 = eps2.sqrt();
    if !(eps1 + root_eps2 > 0.0 && eps1 + root_eps2 < 1.0) {
        return Ok(BoundReport::invalid(
            params,
            format!(
                "eps1 + sqrt(eps2) = {} must lie in (0, 1)",
                eps1 + root_eps2
            ),
        ));
    }
    if !(eta1 > 0.0 && eta1 < eps1) {
        return Ok(BoundReport::invalid(
            params,
            format!("slack eta1 = {eta1} must lie in (0, eps1) = (0, {eps1})"),
        ));
    }
    if !(eta2 > 0.0 && eta2 < root_eps2) {
        return Ok(BoundReport::invalid(
            params,
            format!("slack eta2 = {eta2} must lie in (0, sqrt(eps2)) = (0, {root_eps2})"),
        ));
    }
    let red = reduce_wiretap(ch, p_x)?;
    let bob = d_h_epsilon_cq(&red.rho_xb, eps1 - eta1)?.value_bits;
    let eve = i_max_upper(&red.rho_xe)?;
    let decoding_penalty = -(4.0 * eps1 / (eta1 * eta1)).log2();
    let smoothing_penalty = -2.0 * eta2.recip().log2();
    let terms = vec![
        BoundTerm {
            name: "bob_hypothesis_testing_info",
            value_bits: bob,
        },
        BoundTerm {
            name: "eve_max_info",
            value_bits: -eve,
        },
        BoundTerm {
            name: "decoding_penalty",
            value_bits: decoding_penalty,
        },
        BoundTerm {
            name: "key_smoothing_penalty",
            value_bits: smoothing_penalty,
        },
    ];
    let log2_mk = bob + decoding_penalty;
    let log2_k = eve - smoothing_penalty;
    Ok(BoundReport::from_terms(
        params,
        terms,
        Some(log2_mk),
        Some(log2_k),
    ))
}

/// One grid point of a normal approximation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormalApproxPoint {
    pub n: u64,
    pub rate_per_use_bits: f64,
}

/// Normal approximation of the second-order achievable private rate, per
/// channel use:
/// `(I_B − I_E) + √(V_B/n)·Φ⁻¹(ε₁) + √(V_E/n)·Φ⁻¹(ε₂)`,
/// the `O(log n)` remainder being dropped.
pub fn second_order_private(
    i_b: f64,
    v_b: f64,
    i_e: f64,
    v_e: f64,
    n: u64,
    eps1: f64,
    eps2: f64,
) -> Result<NormalApproxPoint> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "block length n must be at least 1".into(),
        ));
    }
    for (who, v) in [("Bob", v_b), ("Eve", v_e)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "{who} information variance {v} must be finite and ≥ 0"
            )));
        }
    }
    let nf = n as f64;
    let rate_per_use_bits =
        (i_b - i_e) + (v_b / nf).sqrt() * phi_inv(eps1)? + (v_e / nf).sqrt() * phi_inv(eps2)?;
    Ok(NormalApproxPoint {
        n,
        rate_per_use_bits,
    })
}

/// Pure-state-ensemble specialization of [`second_order_private`]: the mutual
/// informations and variances collapse to the entropies and entropy variances
/// of the two average states.
pub fn purestate_second_order(
    rho_b: &DensityOperator,
    rho_e: &DensityOperator,
    n: u64,
    eps1: f64,
    eps2: f64,
) -> Result<NormalApproxPoint> {
    second_order_private(
        entropy(rho_b)?,
        entropy_variance(rho_b)?,
        entropy(rho_e)?,
        entropy_variance(rho_e)?,
        n,
        eps1,
        eps2,
    )
}

/// Channel-level second-order report at blocklength `n`: the mutual
/// informations and variances of the Bob and Eve reductions are computed
/// under `p_x` and the three per-use terms are itemized. The rate equals
/// [`second_order_private`] on the same statistics.
pub fn second_order_private_report(
    ch: &WiretapChannel,
    p_x: &[f64],
    n: u64,
    eps1: f64,
    eps2: f64,
) -> Result<BoundReport> {
    let red = reduce_wiretap(ch, p_x)?;
    let (i_b, v_b) = mutual_info(&red.rho_xb)?;
    let (i_e, v_e) = mutual_info(&red.rho_xe)?;
    // Delegate first so parameter validation matches the scalar path.
    second_order_private(i_b, v_b, i_e, v_e, n, eps1, eps2)?;
    let nf = n as f64;
    let params = BoundParams {
        eps2: Some(eps2),
        n: Some(n),
        ..BoundParams::one_shot(eps1)
    };
    let terms = vec![
        BoundTerm {
            name: "mutual_information_difference",
            value_bits: i_b - i_e,
        },
        BoundTerm {
            name: "bob_dispersion",
            value_bits: (v_b / nf).sqrt() * phi_inv(eps1)?,
        },
        BoundTerm {
            name: "eve_dispersion",
            value_bits: (v_e / nf).sqrt() * phi_inv(eps2)?,
        },
    ];
    Ok(BoundReport::from_terms(params, terms, None, None))
}

/// Binary entropy in bits, with the endpoint convention `0·log₂0 = 0`.
pub fn h2(gamma: f64) -> Result<f64> {
    check_unit_interval(gamma)?;
    if gamma == 0.0 || gamma == 1.0 {
        return Ok(0.0);
    }
    Ok(-(gamma * gamma.log2()) - (1.0 - gamma) * (1.0 - gamma).log2())
}

/// Binary entropy variance in bits²: `γ(1−γ)·log₂(γ/(1−γ))²`.
pub fn v2(gamma: f64) -> Result<f64> {
    check_unit_interval(gamma)?;
    if gamma == 0.0 || gamma == 1.0 {
        return Ok(0.0);
    }
    let l = (gamma / (1.0 - gamma)).log2();
    Ok(gamma * (1.0 - gamma) * l * l)
}

fn check_unit_interval(gamma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!(
            "binary distribution parameter {gamma} must lie in [0, 1]"
        )));
    }
    Ok(())
}

/// Thermal-state entropy function `g(x) = (x+1)log₂(x+1) − x·log₂x`, with
/// `g(0) = 0` by continuity.
pub fn g_fn(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "g is defined for finite x ≥ 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok((x + 1.0) * (x + 1.0).log2() - x * x.log2())
}

/// Energy-constrained private capacity of the lossy-beamsplitter channel:
/// `g(ηn̄) − g((1−η)n̄)`.
pub fn ec_private_capacity(p: &BpskParams) -> Result<f64> {
    Ok(g_fn(p.eta() * p.nbar())? - g_fn((1.0 - p.eta()) * p.nbar())?)
}

/// Asymptotic per-use rate of the binary-phase scheme: `h₂(p_B) − h₂(p_E)`.
pub fn bpsk_asymptote(p: &BpskParams) -> Result<f64> {
    Ok(h2(p.p_b())? - h2(p.p_e())?)
}

/// Normal approximation of the binary-phase scheme at block length `n`,
/// per use: `[h₂(p_B) − h₂(p_E)] + √(v₂(p_B)/n)·Φ⁻¹(ε₁) + √(v₂(p_E)/n)·Φ⁻¹(ε₂)`.
pub fn bpsk_normal_approx(p: &BpskParams, n: u64, eps1: f64, eps2: f64) -> Result<NormalApproxPoint> {
    let pb = p.p_b();
    let pe = p.p_e();
    second_order_private(h2(pb)?, v2(pb)?, h2(pe)?, v2(pe)?, n, eps1, eps2)
}

/// Normal-approximation curve of the binary-phase scheme over a grid of block
/// lengths, together with its two constant benchmark lines.
#[derive(Debug, Clone, Serialize)]
pub struct BpskCurve {
    pub eta: f64,
    pub nbar: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub points: Vec<NormalApproxPoint>,
    pub asymptote_bits: f64,
    pub capacity_bits: f64,
}

/// Evaluate [`bpsk_normal_approx`] on a strictly increasing grid of block
/// lengths.
pub fn bpsk_curve(p: &BpskParams, n_grid: &[u64], eps1: f64, eps2: f64) -> Result<BpskCurve> {
    if n_grid.is_empty() {
        return Err(Error::InvalidParameter(
            "block-length grid must not be empty".into(),
        ));
    }
    for w in n_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidParameter(format!(
                "block-length grid must be strictly increasing, got {} after {}",
                w[1], w[0]
            )));
        }
    }
    let points = n_grid
        .iter()
        .map(|&n| bpsk_normal_approx(p, n, eps1, eps2))
        .collect::<Result<Vec<_>>>()?;
    Ok(BpskCurve {
        eta: p.eta(),
        nbar: p.nbar(),
        eps1,
        eps2,
        points,
        asymptote_bits: bpsk_asymptote(p)?,
        capacity_bits: ec_private_capacity(p)?,
    })
}
