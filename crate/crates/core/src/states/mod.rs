//! Classical–quantum states, wiretap channels, pure-state ensembles, and the
//! BPSK/pure-loss channel model.
//!
//! Scope:
//! - `CqState`: block-diagonal cq states Σ_x p(x) |x⟩⟨x| ⊗ ρ^x
//! - `WiretapChannel`: x → ρ_BE^x with separate Bob/Eve dimensions
//! - `PureStateEnsemble` and its cq embedding
//! - binary-phase-shift-keyed coherent states on a pure-loss channel,
//!   represented exactly in the 2-dimensional Gram span of the two arms
//! - channel (de)serialization in the `.wtc.json` format

mod io;

pub use io::{load_channel, save_channel};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    partial_trace, CMatrix, DensityOperator, HermitianOperator, TRACE_TOL,
};

/// Probability-vector validation tolerance before exact renormalization.
pub const PROB_TOL: f64 = 1e-10;

pub(crate) fn validated_distribution(p: &[f64]) -> Result<Vec<f64>> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty probability vector".into()));
    }
    if let Some(bad) = p.iter().find(|&&x| !x.is_finite() || x < 0.0) {
        return Err(Error::InvalidDistribution(format!(
            "entry {bad} is not a probability"
        )));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > PROB_TOL {
        return Err(Error::InvalidDistribution(format!(
            "probabilities sum to {sum}, expected 1 within {PROB_TOL:.0e}"
        )));
    }
    Ok(p.iter().map(|&x| x / sum).collect())
}

/// Block-diagonal classical–quantum state.
#[derive(Debug, Clone)]
pub struct CqState {
    symbols: Vec<String>,
    p_x: Vec<f64>,
    blocks: Vec<DensityOperator>,
}

impl CqState {
    /// Validates matching lengths, a probability vector summing to 1 within
    /// `PROB_TOL` (then renormalized exactly), and normalized blocks of a
    /// common dimension.
    pub fn new(symbols: Vec<String>, p_x: Vec<f64>, blocks: Vec<DensityOperator>) -> Result<Self> {
        if symbols.len() != blocks.len() || symbols.len() != p_x.len() {
            return Err(Error::DimMismatch {
                expected: symbols.len(),
                actual: blocks.len().min(p_x.len()),
            });
        }
        let p_x = validated_distribution(&p_x)?;
        let dim = blocks
            .first()
            .map(DensityOperator::dim)
            .ok_or_else(|| Error::InvalidDistribution("state needs at least one symbol".into()))?;
        for (sym, b) in symbols.iter().zip(&blocks) {
            if b.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    actual: b.dim(),
                });
            }
            if !b.is_normalized() {
                return Err(Error::InvalidTrace { trace: b.trace() });
            }
            let _ = sym;
        }
        Ok(CqState {
            symbols,
            p_x,
            blocks,
        })
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn p_x(&self) -> &[f64] {
        &self.p_x
    }

    pub fn blocks(&self) -> &[DensityOperator] {
        &self.blocks
    }

    pub fn block(&self, x: usize) -> &DensityOperator {
        &self.blocks[x]
    }

    pub fn num_symbols(&self) -> usize {
        self.symbols.len()
    }

    /// Dimension of each quantum block.
    pub fn block_dim(&self) -> usize {
        self.blocks[0].dim()
    }

    /// Dimension of the joint classical ⊗ quantum space.
    pub fn joint_dim(&self) -> usize {
        self.num_symbols() * self.block_dim()
    }

    /// Average output `Σ_x p(x) ρ^x`.
    pub fn average_state(&self) -> DensityOperator {
        let d = self.block_dim();
        let mut acc = CMatrix::zeros(d);
        for (p, b) in self.p_x.iter().zip(&self.blocks) {
            acc.add_scaled_assign(b.matrix(), *p).expect("common dim");
        }
        DensityOperator::from_parts_unchecked(HermitianOperator::symmetrized_from(acc))
    }

    /// Dense joint operator `⊕_x p(x) ρ^x`.
    pub fn joint_operator(&self) -> HermitianOperator {
        self.block_diagonal(|x| self.blocks[x].matrix().clone())
    }

    /// Dense product operator `⊕_x p(x) ρ_B` with `ρ_B` the average state.
    pub fn product_operator(&self) -> HermitianOperator {
        let avg = self.average_state();
        self.block_diagonal(|_| avg.matrix().clone())
    }

    fn block_diagonal(&self, block: impl Fn(usize) -> CMatrix) -> HermitianOperator {
        let d = self.block_dim();
        let n = self.num_symbols();
        let mut m = CMatrix::zeros(n * d);
        for x in 0..n {
            let b = block(x);
            for i in 0..d {
                for j in 0..d {
                    m.set(x * d + i, x * d + j, self.p_x[x] * b.get(i, j));
                }
            }
        }
        HermitianOperator::symmetrized_from(m)
    }
}

/// cq wiretap channel `x → ρ_BE^x`.
#[derive(Debug, Clone)]
pub struct WiretapChannel {
    symbols: Vec<String>,
    d_b: usize,
    d_e: usize,
    outputs: Vec<DensityOperator>,
    /// Input distribution declared in the channel file, if any.
    p_x: Option<Vec<f64>>,
}

impl WiretapChannel {
    pub fn new(
        symbols: Vec<String>,
        d_b: usize,
        d_e: usize,
        outputs: Vec<DensityOperator>,
        p_x: Option<Vec<f64>>,
    ) -> Result<Self> {
        if symbols.is_empty() || symbols.len() != outputs.len() {
            return Err(Error::ChannelValidation(format!(
                "{} symbols but {} output states",
                symbols.len(),
                outputs.len()
            )));
        }
        if d_b == 0 || d_e == 0 {
            return Err(Error::ChannelValidation("d_b and d_e must be ≥ 1".into()));
        }
        for (sym, out) in symbols.iter().zip(&outputs) {
            if out.dim() != d_b * d_e {
                return Err(Error::ChannelValidation(format!(
                    "symbol {sym:?}: output dimension {} differs from d_b·d_e = {}",
                    out.dim(),
                    d_b * d_e
                )));
            }
            if !out.is_normalized() {
                return Err(Error::ChannelValidation(format!(
                    "symbol {sym:?}: output trace {} is not 1 within {TRACE_TOL:.0e}",
                    out.trace()
                )));
            }
        }
        let p_x = match p_x {
            Some(p) => {
                if p.len() != symbols.len() {
                    return Err(Error::ChannelValidation(format!(
                        "p_x has {} entries for {} symbols",
                        p.len(),
                        symbols.len()
                    )));
                }
                Some(validated_distribution(&p)?)
            }
            None => None,
        };
        Ok(WiretapChannel {
            symbols,
            d_b,
            d_e,
            outputs,
            p_x,
        })
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn num_symbols(&self) -> usize {
        self.symbols.len()
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn d_e(&self) -> usize {
        self.d_e
    }

    pub fn outputs(&self) -> &[DensityOperator] {
        &self.outputs
    }

    pub fn output(&self, x: usize) -> &DensityOperator {
        &self.outputs[x]
    }

    /// Distribution declared in the channel file, if any.
    pub fn declared_p_x(&self) -> Option<&[f64]> {
        self.p_x.as_deref()
    }

    /// Declared distribution, or uniform when none was declared.
    pub fn default_p_x(&self) -> Vec<f64> {
        match &self.p_x {
            Some(p) => p.clone(),
            None => vec![1.0 / self.num_symbols() as f64; self.num_symbols()],
        }
    }
}

/// Marginalization of a wiretap channel under an input distribution.
#[derive(Debug, Clone)]
pub struct ReducedChannel {
    pub rho_xb: CqState,
    pub rho_xe: CqState,
    pub rho_b: DensityOperator,
    pub rho_e: DensityOperator,
}

/// Split each `ρ_BE^x` into its Bob and Eve marginals and form the two cq
/// states and two average states the rate bounds consume.
pub fn reduce_wiretap(ch: &WiretapChannel, p_x: &[f64]) -> Result<ReducedChannel> {
    if p_x.len() != ch.num_symbols() {
        return Err(Error::DimMismatch {
            expected: ch.num_symbols(),
            actual: p_x.len(),
        });
    }
    let dims = [ch.d_b(), ch.d_e()];
    let mut b_blocks = Vec::with_capacity(ch.num_symbols());
    let mut e_blocks = Vec::with_capacity(ch.num_symbols());
    for out in ch.outputs() {
        b_blocks.push(DensityOperator::from_parts_unchecked(partial_trace(
            out.op(),
            &dims,
            &[0],
        )?));
        e_blocks.push(DensityOperator::from_parts_unchecked(partial_trace(
            out.op(),
            &dims,
            &[1],
        )?));
    }
    let rho_xb = CqState::new(ch.symbols().to_vec(), p_x.to_vec(), b_blocks)?;
    let rho_xe = CqState::new(ch.symbols().to_vec(), p_x.to_vec(), e_blocks)?;
    let rho_b = rho_xb.average_state();
    let rho_e = rho_xe.average_state();
    Ok(ReducedChannel {
        rho_xb,
        rho_xe,
        rho_b,
        rho_e,
    })
}

/// Ensemble of pure states with a prior.
#[derive(Debug, Clone)]
pub struct PureStateEnsemble {
    p_x: Vec<f64>,
    vectors: Vec<Vec<Complex64>>,
}

impl PureStateEnsemble {
    pub fn new(p_x: Vec<f64>, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        if p_x.len() != vectors.len() {
            return Err(Error::DimMismatch {
                expected: p_x.len(),
                actual: vectors.len(),
            });
        }
        let p_x = validated_distribution(&p_x)?;
        let dim = vectors
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidDistribution("empty ensemble".into()))?;
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    actual: v.len(),
                });
            }
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > PROB_TOL {
                return Err(Error::InvalidParameter(format!(
                    "ensemble vector norm {norm} differs from 1 beyond {PROB_TOL:.0e}"
                )));
            }
        }
        Ok(PureStateEnsemble { p_x, vectors })
    }

    pub fn p_x(&self) -> &[f64] {
        &self.p_x
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }
}

/// cq state whose blocks are the rank-1 projectors of the ensemble vectors.
pub fn ensemble_to_cq(ens: &PureStateEnsemble) -> Result<CqState> {
    let symbols = (0..ens.p_x.len()).map(|i| i.to_string()).collect();
    let blocks = ens
        .vectors
        .iter()
        .map(|v| DensityOperator::pure(v))
        .collect::<Result<Vec<_>>>()?;
    CqState::new(symbols, ens.p_x.clone(), blocks)
}

/// Transmissivity and mean photon number of a BPSK/pure-loss configuration.
#[derive(Debug, Clone, Copy)]
pub struct BpskParams {
    eta: f64,
    nbar: f64,
}

impl BpskParams {
    pub fn new(eta: f64, nbar: f64) -> Result<Self> {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "transmissivity eta = {eta} must lie in (0, 1)"
            )));
        }
        if !nbar.is_finite() || nbar < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "mean photon number nbar = {nbar} must be ≥ 0"
            )));
        }
        Ok(BpskParams { eta, nbar })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    /// Larger eigenvalue of Bob's average state: `½(1 + e^{−2ηn̄})`.
    pub fn p_b(&self) -> f64 {
        0.5 * (1.0 + (-2.0 * self.eta * self.nbar).exp())
    }

    /// Larger eigenvalue of Eve's average state: `½(1 + e^{−2(1−η)n̄})`.
    pub fn p_e(&self) -> f64 {
        0.5 * (1.0 + (-2.0 * (1.0 - self.eta) * self.nbar).exp())
    }
}

/// Two antipodal coherent-state arms after a pure-loss channel, as a 2-symbol
/// wiretap channel. Each arm lives in the 2-dimensional span of {|β⟩, |−β⟩},
/// written in the symmetric orthogonalization of its Gram matrix, which
/// preserves the only quantity the rate formulas depend on: the overlap
/// `⟨−β|β⟩ = e^{−2|β|²}`.
///
/// Returns the channel together with the closed-form eigenvalues `p_B`, `p_E`
/// of the two average states.
pub fn bpsk_channel(p: &BpskParams) -> Result<(WiretapChannel, f64, f64)> {
    let arm = |kappa: f64| -> [Vec<Complex64>; 2] {
        let c = ((1.0 + kappa) / 2.0).sqrt();
        let s = ((1.0 - kappa) / 2.0).sqrt();
        [
            vec![Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
            vec![Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        ]
    };
    let kappa_b = (-2.0 * p.eta * p.nbar).exp();
    let kappa_e = (-2.0 * (1.0 - p.eta) * p.nbar).exp();
    let bob = arm(kappa_b);
    let eve = arm(kappa_e);

    let mut outputs = Vec::with_capacity(2);
    for x in 0..2 {
        let b = DensityOperator::pure(&bob[x])?;
        let e = DensityOperator::pure(&eve[x])?;
        outputs.push(b.tensor(&e));
    }
    let ch = WiretapChannel::new(
        vec!["0".into(), "1".into()],
        2,
        2,
        outputs,
        Some(vec![0.5, 0.5]),
    )?;
    Ok((ch, p.p_b(), p.p_e()))
}
