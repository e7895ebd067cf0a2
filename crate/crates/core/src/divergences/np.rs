//! Quantum Neyman–Pearson threshold tests and the hypothesis-testing
//! relative entropy `D_H^ε`.
//!
//! The test minimizing the passed alternative mass `Tr{Λσ}` subject to
//! `0 ≤ Λ ≤ I` and `Tr{Λρ} ≥ 1 − ε` has the threshold form
//!
//! ```text
//! Λ = P₊(ρ − s σ) + c·Π₀(ρ − s σ),   c ∈ [0, 1],
//! ```
//!
//! with `P₊`/`Π₀` the projectors onto the strictly-positive part and the
//! kernel band of `ρ − sσ`. The passed null mass `Tr{P₊ρ}` is nonincreasing
//! in `s`, so the solver bisects on `s` until that mass crosses `1 − ε`, then
//! interpolates on the kernel eigenspace with the mixing weight `c`. The
//! bracket is capped at `2^{D_max(ρ‖σ)+1}`, above which `ρ − sσ` is negative
//! definite on the support of `σ`; when ρ leaks outside that support the cap
//! does not exist and the bracket grows geometrically instead.
//!
//! For classical–quantum states both hypotheses are block-diagonal over the
//! classical index, so the search runs per block ("sector") and never
//! materializes the joint operator.

use crate::error::{Error, Result};
use crate::linalg::{
    rayleigh_diagonal, CMatrix, DensityOperator, EigenDecomposition, HermitianOperator,
    KERNEL_TOL, SUPPORT_CUTOFF,
};
use crate::states::CqState;

use super::SUPPORT_LEAK_TOL;

const MAX_BISECTION_STEPS: usize = 200;

/// Largest reportable `value_bits`: `−log₂(KERNEL_TOL)` ≈ 33.22. The value is
/// capped here whenever the optimal test passes less than `KERNEL_TOL` of the
/// alternative, where `−log₂ Tr{Λσ}` stops being numerically meaningful.
pub fn d_h_value_cap() -> f64 {
    -KERNEL_TOL.log2()
}

/// Optimal Neyman–Pearson test for `D_H^ε(ρ‖σ)` on a dense pair.
#[derive(Debug, Clone)]
pub struct NpTestResult {
    /// `D_H^ε(ρ‖σ) = −log₂ Tr{Λσ}`, capped at [`d_h_value_cap`] when flagged.
    pub value_bits: f64,
    /// The optimal test `Λ` with `0 ≤ Λ ≤ I`.
    pub test: HermitianOperator,
    /// Threshold `s*` of the likelihood test; `+∞` when the kernel of σ alone
    /// passes the required null mass.
    pub threshold: f64,
    /// Mixing weight `c ∈ [0, 1]` on the kernel eigenspace of `ρ − s*σ`.
    pub mix_weight: f64,
    /// `Tr{Λρ}`; meets `1 − ε` within 1e-8.
    pub achieved_alpha: f64,
    /// `Tr{Λσ}`, the minimized alternative mass.
    pub beta: f64,
    /// Set when `beta` fell below `KERNEL_TOL` and `value_bits` was capped.
    pub perfect_distinguishability: bool,
}

/// Optimal test for `I_H^ε(X;B) = D_H^ε(ρ_XB‖ρ_X⊗ρ_B)` on a cq state,
/// returned per block: the joint test is `⊕_x Q^x`.
#[derive(Debug, Clone)]
pub struct CqNpTestResult {
    /// `I_H^ε(X;B)`, capped at [`d_h_value_cap`] when flagged.
    pub value_bits: f64,
    /// Per-symbol blocks `Q^x = ⟨x|Λ|x⟩` of the optimal test, each acting on
    /// the quantum output space; these seed the square-root decoder.
    pub q_blocks: Vec<HermitianOperator>,
    /// Threshold `s*` shared by every block.
    pub threshold: f64,
    /// Mixing weight `c ∈ [0, 1]` on the kernel eigenspace.
    pub mix_weight: f64,
    /// `Tr{Λρ_XB}`; meets `1 − ε` within 1e-8.
    pub achieved_alpha: f64,
    /// `Tr{Λ(ρ_X⊗ρ_B)}`.
    pub beta: f64,
    /// Set when `beta` fell below `KERNEL_TOL` and `value_bits` was capped.
    pub perfect_distinguishability: bool,
}

impl CqNpTestResult {
    /// Dense block-diagonal test `⊕_x Q^x` on the joint space.
    pub fn joint_test(&self) -> HermitianOperator {
        let d = self.q_blocks[0].dim();
        let n = self.q_blocks.len();
        let mut m = CMatrix::zeros(n * d);
        for (x, q) in self.q_blocks.iter().enumerate() {
            for i in 0..d {
                for j in 0..d {
                    m.set(x * d + i, x * d + j, q.matrix().get(i, j));
                }
            }
        }
        HermitianOperator::symmetrized_from(m)
    }
}

/// `D_H^ε(ρ‖σ) = −log₂ inf{Tr{Λσ} : 0 ≤ Λ ≤ I, Tr{Λρ} ≥ 1−ε}` together with
/// the optimizing test.
pub fn d_h_epsilon(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    eps: f64,
) -> Result<NpTestResult> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch {
            expected: rho.dim(),
            actual: sigma.dim(),
        });
    }
    let sectors = [Sector {
        rho: rho.matrix().clone(),
        sigma: sigma.matrix().clone(),
    }];
    let sol = np_solve(&sectors, eps)?;
    let mut tests = sol.tests;
    Ok(NpTestResult {
        value_bits: sol.value_bits,
        test: tests.pop().expect("single sector"),
        threshold: sol.threshold,
        mix_weight: sol.mix_weight,
        achieved_alpha: sol.achieved_alpha,
        beta: sol.beta,
        perfect_distinguishability: sol.perfect_distinguishability,
    })
}

/// Blockwise `D_H^ε(ρ_XB‖ρ_X⊗ρ_B)` for a cq state. Sector `x` holds the pair
/// `(p_x ρ^x, p_x ρ_B)`; the block tests are the `Q^x` of the joint optimum.
pub fn d_h_epsilon_cq(state: &CqState, eps: f64) -> Result<CqNpTestResult> {
    let avg = state.average_state();
    let sectors: Vec<Sector> = state
        .p_x()
        .iter()
        .zip(state.blocks())
        .map(|(&p, b)| Sector {
            rho: b.matrix().scaled(p),
            sigma: avg.matrix().scaled(p),
        })
        .collect();
    let sol = np_solve(&sectors, eps)?;
    Ok(CqNpTestResult {
        value_bits: sol.value_bits,
        q_blocks: sol.tests,
        threshold: sol.threshold,
        mix_weight: sol.mix_weight,
        achieved_alpha: sol.achieved_alpha,
        beta: sol.beta,
        perfect_distinguishability: sol.perfect_distinguishability,
    })
}

/// One diagonal block of the hypothesis pair. Dense inputs use a single
/// sector spanning the whole space.
struct Sector {
    rho: CMatrix,
    sigma: CMatrix,
}

struct SectorEval {
    eig: EigenDecomposition,
    rho_w: Vec<f64>,
    sig_w: Vec<f64>,
}

struct NpSolution {
    threshold: f64,
    mix_weight: f64,
    achieved_alpha: f64,
    beta: f64,
    value_bits: f64,
    perfect_distinguishability: bool,
    tests: Vec<HermitianOperator>,
}

/// Spectra of `ρ − sσ` per sector, with the ρ- and σ-masses of every
/// eigenvector.
fn eval_sectors(sectors: &[Sector], s: f64) -> Result<Vec<SectorEval>> {
    sectors
        .iter()
        .map(|sec| {
            let mut m = sec.rho.clone();
            m.add_scaled_assign(&sec.sigma, -s)?;
            let eig = HermitianOperator::symmetrized_from(m).eig()?;
            let rho_w = rayleigh_diagonal(&sec.rho, eig.vectors())?;
            let sig_w = rayleigh_diagonal(&sec.sigma, eig.vectors())?;
            Ok(SectorEval { eig, rho_w, sig_w })
        })
        .collect()
}

fn spectral_scale(evals: &[SectorEval]) -> f64 {
    evals
        .iter()
        .map(|e| e.eig.max_abs_eigenvalue())
        .fold(1.0, f64::max)
}

/// ρ- and σ-masses of the strictly-positive part (`λ > band`) and of the
/// kernel band (`|λ| ≤ band`).
#[derive(Clone, Copy)]
struct Masses {
    rho_plus: f64,
    rho_zero: f64,
    sig_plus: f64,
    sig_zero: f64,
}

fn masses(evals: &[SectorEval], band: f64) -> Masses {
    let mut m = Masses {
        rho_plus: 0.0,
        rho_zero: 0.0,
        sig_plus: 0.0,
        sig_zero: 0.0,
    };
    for e in evals {
        for ((&l, &rw), &sw) in e.eig.eigenvalues().iter().zip(&e.rho_w).zip(&e.sig_w) {
            if l > band {
                m.rho_plus += rw;
                m.sig_plus += sw;
            } else if l >= -band {
                m.rho_zero += rw;
                m.sig_zero += sw;
            }
        }
    }
    m
}

fn passed_null_mass(sectors: &[Sector], s: f64) -> Result<f64> {
    let evals = eval_sectors(sectors, s)?;
    let band = KERNEL_TOL * spectral_scale(&evals);
    Ok(masses(&evals, band).rho_plus)
}

fn np_solve(sectors: &[Sector], eps: f64) -> Result<NpSolution> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "hypothesis-testing error eps = {eps} must lie in (0, 1)"
        )));
    }
    let target = 1.0 - eps;
    let total_rho: f64 = sectors.iter().map(|sec| sec.rho.trace().re).sum();
    if total_rho < target - 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "required null mass 1 − ε = {target} exceeds Tr ρ = {total_rho}"
        )));
    }

    // σ spectra drive the support-leak check and the bisection cap.
    let sigma_eigs: Vec<EigenDecomposition> = sectors
        .iter()
        .map(|sec| HermitianOperator::symmetrized_from(sec.sigma.clone()).eig())
        .collect::<Result<_>>()?;
    let sigma_scale = sigma_eigs
        .iter()
        .map(|e| e.max_abs_eigenvalue())
        .fold(0.0, f64::max);
    let cutoff = SUPPORT_CUTOFF * sigma_scale;
    let mut leak = 0.0;
    for (sec, eig) in sectors.iter().zip(&sigma_eigs) {
        let w = rayleigh_diagonal(&sec.rho, eig.vectors())?;
        for (&l, &wi) in eig.eigenvalues().iter().zip(&w) {
            if l.abs() <= cutoff {
                leak += wi.max(0.0);
            }
        }
    }

    if leak >= target {
        // The kernel of σ alone passes the required null mass while rejecting
        // σ entirely: no threshold search can improve on β = 0.
        let tests: Vec<HermitianOperator> = sigma_eigs
            .iter()
            .map(|e| {
                HermitianOperator::symmetrized_from(e.projector_where(|l| l.abs() <= cutoff))
            })
            .collect();
        let mut alpha = 0.0;
        let mut beta = 0.0;
        for (sec, t) in sectors.iter().zip(&tests) {
            alpha += HermitianOperator::symmetrized_from(sec.rho.clone()).trace_product(t)?;
            beta += HermitianOperator::symmetrized_from(sec.sigma.clone()).trace_product(t)?;
        }
        return Ok(NpSolution {
            threshold: f64::INFINITY,
            mix_weight: 1.0,
            achieved_alpha: alpha,
            beta: beta.max(0.0),
            value_bits: d_h_value_cap(),
            perfect_distinguishability: true,
            tests,
        });
    }

    let hi0 = if leak > SUPPORT_LEAK_TOL {
        // Partial overlap: D_max is infinite, so no finite cap exists; grow
        // the bracket geometrically until the passed mass drops to target.
        let mut hi = 1.0;
        let mut steps = 0usize;
        loop {
            if passed_null_mass(sectors, hi)? <= target {
                break hi;
            }
            steps += 1;
            if steps >= MAX_BISECTION_STEPS {
                return Err(Error::SearchFailure {
                    steps,
                    lo: 0.0,
                    hi,
                });
            }
            hi *= 2.0;
        }
    } else {
        // Cap s_max = 2^{D_max(ρ‖σ)+1}: there ρ − sσ ≼ −2^{D_max}σ, negative
        // definite on the support of σ, so the passed mass is ≤ the leak.
        let mut lam_max: f64 = 0.0;
        for (sec, eig) in sectors.iter().zip(&sigma_eigs) {
            let t = eig.weighted_sum(|l| if l <= cutoff { 0.0 } else { 1.0 / l.sqrt() });
            let m = t.mul(&sec.rho)?.mul(&t)?;
            let lam = HermitianOperator::symmetrized_from(m).eig()?.max_eigenvalue();
            lam_max = lam_max.max(lam);
        }
        if lam_max <= 0.0 {
            return Err(Error::InvalidParameter(
                "null hypothesis carries no mass on the support of the alternative".into(),
            ));
        }
        2.0 * lam_max
    };

    // Bisect: the passed mass exceeds the target at lo and not at hi. The
    // width tolerance is relative to the current bracket so large initial
    // caps still converge to the crossing.
    let mut lo = 0.0_f64;
    let mut hi = hi0;
    let mut steps = 0usize;
    while hi - lo > 1e-12 * hi.max(1.0) {
        if steps >= MAX_BISECTION_STEPS {
            return Err(Error::SearchFailure { steps, lo, hi });
        }
        let mid = 0.5 * (lo + hi);
        if passed_null_mass(sectors, mid)? <= target {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }

    let threshold = hi;
    let evals = eval_sectors(sectors, threshold)?;
    // Eigenvalues crossing zero inside the final bracket moved by at most
    // ‖σ‖·(hi − lo) ≤ hi − lo, so a band of 4·(hi − lo) captures them all.
    let mut band = (KERNEL_TOL * spectral_scale(&evals)).max(4.0 * (hi - lo));
    let mut m = masses(&evals, band);
    let mut widen = 0usize;
    let (c, m) = loop {
        let c = if m.rho_zero > 0.0 {
            ((target - m.rho_plus) / m.rho_zero).clamp(0.0, 1.0)
        } else {
            0.0
        };
        if m.rho_plus + c * m.rho_zero >= target - 1e-9 || widen >= MAX_BISECTION_STEPS {
            break (c, m);
        }
        band *= 2.0;
        m = masses(&evals, band);
        widen += 1;
    };
    let achieved_alpha = m.rho_plus + c * m.rho_zero;
    let beta = (m.sig_plus + c * m.sig_zero).max(0.0);
    let (value_bits, perfect_distinguishability) = if beta <= KERNEL_TOL {
        (d_h_value_cap(), true)
    } else {
        (-beta.log2(), false)
    };
    let tests = evals
        .iter()
        .map(|e| {
            HermitianOperator::symmetrized_from(e.eig.weighted_sum(|l| {
                if l > band {
                    1.0
                } else if l >= -band {
                    c
                } else {
                    0.0
                }
            }))
        })
        .collect();
    Ok(NpSolution {
        threshold,
        mix_weight: c,
        achieved_alpha,
        beta,
        value_bits,
        perfect_distinguishability,
        tests,
    })
}
