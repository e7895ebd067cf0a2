//! Entropic quantities: relative entropy and its variance, max-relative
//! entropy, hypothesis-testing relative entropy with the optimal test,
//! entropies, blockwise mutual information, and the smoothing-gap combinator.
//!
//! All divergences are in bits. Support-condition failures surface as the
//! tagged [`DivergenceValue::Infinite`], never as a float sentinel, so they
//! remain distinguishable from large finite answers.

mod np;

pub use np::{d_h_epsilon, d_h_epsilon_cq, d_h_value_cap, CqNpTestResult, NpTestResult};

use crate::error::{Error, Result};
use crate::linalg::{
    log2_on_support, support_leak, DensityOperator, HermitianOperator, SUPPORT_CUTOFF,
};
use crate::states::CqState;

/// Mass of ω tolerated outside the support of τ before a divergence is
/// declared infinite.
pub const SUPPORT_LEAK_TOL: f64 = 1e-10;

/// A divergence in bits, or +∞ when the support condition fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DivergenceValue {
    Finite(f64),
    Infinite,
}

impl DivergenceValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, DivergenceValue::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, DivergenceValue::Infinite)
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            DivergenceValue::Finite(v) => Some(*v),
            DivergenceValue::Infinite => None,
        }
    }

    /// The finite value, or an error naming the quantity that was infinite.
    pub fn expect_finite(&self, what: &str) -> Result<f64> {
        self.finite()
            .ok_or_else(|| Error::InfiniteDivergence(what.into()))
    }
}

/// `log₂ω − log₂τ` on the respective supports, together with
/// `D = Tr{ω (log₂ω − log₂τ)}`; `None` when ω leaks outside the support of τ.
fn log_ratio(
    omega: &DensityOperator,
    tau: &DensityOperator,
) -> Result<Option<(f64, HermitianOperator)>> {
    if omega.dim() != tau.dim() {
        return Err(Error::DimMismatch {
            expected: omega.dim(),
            actual: tau.dim(),
        });
    }
    let tau_eig = tau.eig()?;
    if support_leak(omega, &tau_eig)? > SUPPORT_LEAK_TOL {
        return Ok(None);
    }
    let cutoff = SUPPORT_CUTOFF * tau_eig.max_abs_eigenvalue();
    let log_tau = HermitianOperator::symmetrized_from(
        tau_eig.weighted_sum(|l| if l <= cutoff { 0.0 } else { l.log2() }),
    );
    let g = log2_on_support(omega.op())?.sub(&log_tau)?;
    let d = omega.op().trace_product(&g)?;
    Ok(Some((d, g)))
}

/// Quantum relative entropy `D(ω‖τ) = Tr{ω[log₂ω − log₂τ]}`.
pub fn rel_entropy(omega: &DensityOperator, tau: &DensityOperator) -> Result<DivergenceValue> {
    Ok(match log_ratio(omega, tau)? {
        Some((d, _)) => DivergenceValue::Finite(d),
        None => DivergenceValue::Infinite,
    })
}

/// Quantum relative entropy variance `V(ω‖τ) = Tr{ω[log₂ω − log₂τ − D]²}`.
pub fn rel_entropy_variance(omega: &DensityOperator, tau: &DensityOperator) -> Result<f64> {
    let (d, g) = log_ratio(omega, tau)?.ok_or_else(|| {
        Error::InfiniteDivergence("relative entropy variance needs support(ω) ⊆ support(τ)".into())
    })?;
    let shifted = g.sub(&HermitianOperator::identity(g.dim()).scaled(d))?;
    let sq = HermitianOperator::symmetrized_from(shifted.matrix().mul(shifted.matrix())?);
    Ok(omega.op().trace_product(&sq)?.max(0.0))
}

/// Max-relative entropy `D_max(ω‖τ) = log₂ λ_max(τ^{−1/2} ω τ^{−1/2})`, the
/// least `λ` with `ω ≤ 2^λ τ`.
pub fn d_max(omega: &DensityOperator, tau: &DensityOperator) -> Result<DivergenceValue> {
    if omega.dim() != tau.dim() {
        return Err(Error::DimMismatch {
            expected: omega.dim(),
            actual: tau.dim(),
        });
    }
    let tau_eig = tau.eig()?;
    if support_leak(omega, &tau_eig)? > SUPPORT_LEAK_TOL {
        return Ok(DivergenceValue::Infinite);
    }
    let cutoff = SUPPORT_CUTOFF * tau_eig.max_abs_eigenvalue();
    let t = tau_eig.weighted_sum(|l| if l <= cutoff { 0.0 } else { 1.0 / l.sqrt() });
    let m = t.mul(omega.matrix())?.mul(&t)?;
    let lam = HermitianOperator::symmetrized_from(m).eig()?.max_eigenvalue();
    if lam <= 0.0 {
        return Err(Error::InvalidParameter(
            "ω carries no positive mass on the support of τ".into(),
        ));
    }
    Ok(DivergenceValue::Finite(lam.log2()))
}

/// Spectrum of a normalized state restricted to its support.
fn spectrum_on_support(rho: &DensityOperator) -> Result<Vec<f64>> {
    if !rho.is_normalized() {
        return Err(Error::InvalidTrace { trace: rho.trace() });
    }
    let eig = rho.eig()?;
    let cutoff = SUPPORT_CUTOFF * eig.max_abs_eigenvalue();
    Ok(eig
        .eigenvalues()
        .iter()
        .copied()
        .filter(|&l| l > cutoff)
        .collect())
}

/// Quantum entropy `H(ρ) = −Tr{ρ log₂ ρ}`.
pub fn entropy(rho: &DensityOperator) -> Result<f64> {
    let h: f64 = spectrum_on_support(rho)?
        .iter()
        .map(|&l| -l * l.log2())
        .sum();
    Ok(h.max(0.0))
}

/// Entropy variance `V(ρ) = Tr{ρ[−log₂ρ − H(ρ)]²}`.
pub fn entropy_variance(rho: &DensityOperator) -> Result<f64> {
    let spec = spectrum_on_support(rho)?;
    let h: f64 = spec.iter().map(|&l| -l * l.log2()).sum::<f64>().max(0.0);
    Ok(spec.iter().map(|&l| l * (l.log2() + h).powi(2)).sum())
}

/// Mutual information `I(X;B) = D(ρ_XB‖ρ_X⊗ρ_B)` and its variance
/// `V(X;B) = V(ρ_XB‖ρ_X⊗ρ_B)`.
///
/// Both hypothesis operators are block-diagonal over X, so each block's
/// log-ratio `log₂(p_x ρ^x) − log₂(p_x ρ_B)` lives on the d-dimensional
/// output space and the |X|·d joint operator is never materialized. The
/// support-mismatch terms `log₂ p_x (Π_x − Π_B)` do not cancel inside the
/// squared variance operator and are kept.
pub fn mutual_info(state: &CqState) -> Result<(f64, f64)> {
    let avg = state.average_state();
    let avg_eig = avg.eig()?;
    let cutoff = SUPPORT_CUTOFF * avg_eig.max_abs_eigenvalue();
    let mut ratios: Vec<Option<HermitianOperator>> = Vec::with_capacity(state.num_symbols());
    let mut i_bits = 0.0;
    for (&p, block) in state.p_x().iter().zip(state.blocks()) {
        if p <= 0.0 {
            ratios.push(None);
            continue;
        }
        let log_joint = log2_on_support(&block.op().scaled(p))?;
        let log_prod = HermitianOperator::symmetrized_from(
            avg_eig.weighted_sum(|l| if l <= cutoff { 0.0 } else { (p * l).log2() }),
        );
        let g = log_joint.sub(&log_prod)?;
        i_bits += p * block.op().trace_product(&g)?;
        ratios.push(Some(g));
    }
    let mut v_bits = 0.0;
    for ((&p, block), g) in state.p_x().iter().zip(state.blocks()).zip(&ratios) {
        let Some(g) = g else { continue };
        let shifted = g.sub(&HermitianOperator::identity(g.dim()).scaled(i_bits))?;
        let sq = HermitianOperator::symmetrized_from(shifted.matrix().mul(shifted.matrix())?);
        v_bits += p * block.op().trace_product(&sq)?;
    }
    Ok((i_bits, v_bits.max(0.0)))
}

/// Unsmoothed `D_max(ρ_XB‖ρ_X⊗ρ_B)`, a certified upper bound on the smoothed
/// max-information at every smoothing radius (the smoothing ball contains its
/// center). Computed blockwise: `max_x log₂ λ_max(ρ_B^{−1/2} ρ^x ρ_B^{−1/2})`.
pub fn i_max_upper(state: &CqState) -> Result<f64> {
    let avg = state.average_state();
    let avg_eig = avg.eig()?;
    let cutoff = SUPPORT_CUTOFF * avg_eig.max_abs_eigenvalue();
    let t = avg_eig.weighted_sum(|l| if l <= cutoff { 0.0 } else { 1.0 / l.sqrt() });
    let mut lam_max: f64 = 0.0;
    for (&p, block) in state.p_x().iter().zip(state.blocks()) {
        if p <= 0.0 {
            continue;
        }
        if support_leak(block, &avg_eig)? > SUPPORT_LEAK_TOL {
            return Err(Error::InfiniteDivergence(
                "a cq block carries mass outside the average-state support".into(),
            ));
        }
        let m = t.mul(block.matrix())?.mul(&t)?;
        lam_max = lam_max.max(
            HermitianOperator::symmetrized_from(m)
                .eig()?
                .max_eigenvalue(),
        );
    }
    if lam_max <= 0.0 {
        return Err(Error::InvalidParameter(
            "state has no positive-probability block".into(),
        ));
    }
    Ok(lam_max.log2())
}

/// The same surrogate for a dense state with declared bipartition
/// `dims = [d_A, d_B]`: `D_max(ρ_AB‖ρ_A⊗ρ_B)` with the marginals taken from
/// the input.
pub fn i_max_upper_bipartite(rho: &DensityOperator, dims: [usize; 2]) -> Result<f64> {
    let a = rho.partial_trace(&dims, &[0])?;
    let b = rho.partial_trace(&dims, &[1])?;
    let prod = a.tensor(&b);
    d_max(rho, &prod)?.expect_finite("D_max(ρ_AB‖ρ_A⊗ρ_B): joint support escapes the product")
}

/// Additive gap `log₂(3/γ²)` separating the surrogate max-information bound
/// from the one assembled out of a supplied smoothed max-relative entropy;
/// used to report which of the two is smaller.
pub fn lemma1_gap(eps: f64, gamma: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps = {eps} must lie in (0, 1)"
        )));
    }
    if !(gamma > 0.0 && gamma < eps) {
        return Err(Error::InvalidParameter(format!(
            "gamma = {gamma} must lie in (0, eps = {eps})"
        )));
    }
    Ok((3.0 / (gamma * gamma)).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use crate::states::{ensemble_to_cq, PureStateEnsemble};
    use num_complex::Complex64;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_density(dim: usize, rng: &mut StdRng) -> DensityOperator {
        let g = CMatrix::from_fn(dim, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let gg = g.mul(&g.adjoint()).unwrap();
        let tr = gg.trace().re;
        DensityOperator::from_matrix(gg.scaled(1.0 / tr)).unwrap()
    }

    fn random_distribution(n: usize, rng: &mut StdRng) -> Vec<f64> {
        let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 0.2).collect();
        let s: f64 = raw.iter().sum();
        raw.iter().map(|r| r / s).collect()
    }

    fn random_cq(n: usize, d: usize, rng: &mut StdRng) -> CqState {
        CqState::new(
            (0..n).map(|i| i.to_string()).collect(),
            random_distribution(n, rng),
            (0..n).map(|_| random_density(d, rng)).collect(),
        )
        .unwrap()
    }

    fn random_pure_ensemble(n: usize, d: usize, rng: &mut StdRng) -> PureStateEnsemble {
        let vectors = (0..n)
            .map(|_| {
                let v: Vec<Complex64> = (0..d)
                    .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                    .collect();
                let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                v.iter().map(|z| z / norm).collect()
            })
            .collect();
        PureStateEnsemble::new(random_distribution(n, rng), vectors).unwrap()
    }

    fn diag_state(d: &[f64]) -> DensityOperator {
        DensityOperator::from_matrix(CMatrix::from_real_diag(d)).unwrap()
    }

    #[test]
    fn rel_entropy_of_state_with_itself_is_zero() {
        let mut rng = StdRng::seed_from_u64(41);
        let rho = random_density(4, &mut rng);
        let d = rel_entropy(&rho, &rho).unwrap().finite().unwrap();
        assert!(d.abs() < 1e-12, "D(ρ‖ρ) = {d:.3e}");
    }

    #[test]
    fn rel_entropy_classical_kl() {
        let omega = diag_state(&[0.5, 0.5]);
        let tau = diag_state(&[0.25, 0.75]);
        let d = rel_entropy(&omega, &tau).unwrap().finite().unwrap();
        let want = 0.5 * (0.5f64 / 0.25).log2() + 0.5 * (0.5f64 / 0.75).log2();
        assert!((d - want).abs() < 1e-12, "{d} vs classical KL {want}");
        assert!((d - 0.2075).abs() < 5e-5);
    }

    #[test]
    fn rel_entropy_orthogonal_supports_is_infinite() {
        let omega = DensityOperator::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let tau = DensityOperator::pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(rel_entropy(&omega, &tau).unwrap().is_infinite());
        assert!(matches!(
            rel_entropy_variance(&omega, &tau),
            Err(Error::InfiniteDivergence(_))
        ));
    }

    #[test]
    fn rel_entropy_variance_examples() {
        let mut rng = StdRng::seed_from_u64(42);
        let rho = random_density(3, &mut rng);
        assert!(rel_entropy_variance(&rho, &rho).unwrap() < 1e-12);

        // Maximally correlated bit pair vs product of marginals: the
        // log-ratio is the constant 1 on the support, so V = 0.
        let omega = diag_state(&[0.5, 0.0, 0.0, 0.5]);
        let tau = diag_state(&[0.25, 0.25, 0.25, 0.25]);
        assert!(rel_entropy_variance(&omega, &tau).unwrap() < 1e-12);
        let d = rel_entropy(&omega, &tau).unwrap().finite().unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rel_entropy_variance_matches_classical_oracle() {
        let mut rng = StdRng::seed_from_u64(43);
        for _ in 0..10 {
            let p = random_distribution(5, &mut rng);
            let q = random_distribution(5, &mut rng);
            let v = rel_entropy_variance(&diag_state(&p), &diag_state(&q)).unwrap();
            let d: f64 = p.iter().zip(&q).map(|(a, b)| a * (a / b).log2()).sum();
            let want: f64 = p
                .iter()
                .zip(&q)
                .map(|(a, b)| a * ((a / b).log2() - d).powi(2))
                .sum();
            assert!((v - want).abs() < 1e-10, "{v} vs classical {want}");
        }
    }

    #[test]
    fn d_max_examples() {
        let mut rng = StdRng::seed_from_u64(44);
        let rho = random_density(3, &mut rng);
        let zero = d_max(&rho, &rho).unwrap().finite().unwrap();
        assert!(zero.abs() < 1e-9, "D_max(ρ‖ρ) = {zero:.3e}");

        let omega = diag_state(&[0.5, 0.5]);
        let tau = diag_state(&[0.25, 0.75]);
        let one = d_max(&omega, &tau).unwrap().finite().unwrap();
        assert!((one - 1.0).abs() < 1e-10);

        let pure = DensityOperator::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let orth = DensityOperator::pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(d_max(&pure, &orth).unwrap().is_infinite());
    }

    #[test]
    fn d_max_is_minimal() {
        let mut rng = StdRng::seed_from_u64(45);
        for trial in 0..10 {
            let omega = random_density(4, &mut rng);
            let tau = random_density(4, &mut rng);
            let v = d_max(&omega, &tau).unwrap().finite().unwrap();
            // ω ≤ 2^v τ holds…
            let ok = tau.op().scaled(v.exp2()).sub(omega.op()).unwrap();
            let min_ok = ok.eig().unwrap().min_eigenvalue();
            assert!(min_ok >= -1e-9, "trial {trial}: ω ≰ 2^Dmax τ ({min_ok:.3e})");
            // …and fails for an exponent 0.01 bits smaller.
            let bad = tau.op().scaled((v - 0.01).exp2()).sub(omega.op()).unwrap();
            let min_bad = bad.eig().unwrap().min_eigenvalue();
            assert!(min_bad < -1e-9, "trial {trial}: not minimal ({min_bad:.3e})");
        }
    }

    #[test]
    fn entropy_examples() {
        assert!((entropy(&DensityOperator::maximally_mixed(2)).unwrap() - 1.0).abs() < 1e-12);
        assert!(entropy_variance(&DensityOperator::maximally_mixed(2)).unwrap() < 1e-12);

        let pure = DensityOperator::pure(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        assert!(entropy(&pure).unwrap() < 1e-12);
        assert!(entropy_variance(&pure).unwrap() < 1e-12);

        // Binary spectrum against the scalar h₂/v₂ formulas.
        let p = 0.25f64;
        let q = 1.0 - p;
        let rho = diag_state(&[p, q]);
        let h2 = -p * p.log2() - q * q.log2();
        let v2 = p * q * (p / q).log2().powi(2);
        assert!((entropy(&rho).unwrap() - h2).abs() < 1e-12);
        assert!((entropy_variance(&rho).unwrap() - v2).abs() < 1e-12);
        assert!((h2 - 0.8113).abs() < 5e-5);
    }

    #[test]
    fn entropy_requires_normalization() {
        let sub = diag_state(&[0.5, 0.2]);
        assert!(matches!(entropy(&sub), Err(Error::InvalidTrace { .. })));
    }

    #[test]
    fn mutual_info_product_state_vanishes() {
        let mut rng = StdRng::seed_from_u64(46);
        let block = random_density(3, &mut rng);
        let state = CqState::new(
            vec!["a".into(), "b".into()],
            vec![0.3, 0.7],
            vec![block.clone(), block],
        )
        .unwrap();
        let (i, v) = mutual_info(&state).unwrap();
        assert!(i.abs() < 1e-9, "I = {i:.3e}");
        assert!(v < 1e-9, "V = {v:.3e}");
    }

    #[test]
    fn mutual_info_correlated_bit() {
        let state = CqState::new(
            vec!["0".into(), "1".into()],
            vec![0.5, 0.5],
            vec![
                DensityOperator::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap(),
                DensityOperator::pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap(),
            ],
        )
        .unwrap();
        let (i, v) = mutual_info(&state).unwrap();
        assert!((i - 1.0).abs() < 1e-10, "I = {i}");
        assert!(v < 1e-10, "V = {v:.3e}");
    }

    #[test]
    fn mutual_info_pure_ensembles_collapse_to_average_entropy() {
        let mut rng = StdRng::seed_from_u64(47);
        for trial in 0..20 {
            let n = 2 + (trial % 3);
            let d = 2 + (trial % 3);
            let ens = random_pure_ensemble(n, d, &mut rng);
            let state = ensemble_to_cq(&ens).unwrap();
            let (i, v) = mutual_info(&state).unwrap();
            let avg = state.average_state();
            let h = entropy(&avg).unwrap();
            let hv = entropy_variance(&avg).unwrap();
            assert!((i - h).abs() < 1e-9, "trial {trial}: I {i} vs H {h}");
            assert!((v - hv).abs() < 1e-9, "trial {trial}: V {v} vs V(ρ_B) {hv}");
        }
    }

    #[test]
    fn mutual_info_matches_entropy_difference() {
        let mut rng = StdRng::seed_from_u64(48);
        for _ in 0..5 {
            let state = random_cq(3, 3, &mut rng);
            let (i, _) = mutual_info(&state).unwrap();
            let h_avg = entropy(&state.average_state()).unwrap();
            let h_cond: f64 = state
                .p_x()
                .iter()
                .zip(state.blocks())
                .map(|(&p, b)| p * entropy(b).unwrap())
                .sum();
            assert!(
                (i - (h_avg - h_cond)).abs() < 1e-9,
                "blockwise {i} vs entropy form {}",
                h_avg - h_cond
            );
        }
    }

    #[test]
    fn i_max_examples() {
        let mut rng = StdRng::seed_from_u64(49);
        let block = random_density(3, &mut rng);
        let product = CqState::new(
            vec!["a".into(), "b".into()],
            vec![0.4, 0.6],
            vec![block.clone(), block],
        )
        .unwrap();
        let v = i_max_upper(&product).unwrap();
        assert!(v.abs() < 1e-9, "product state: {v:.3e}");

        let correlated = CqState::new(
            vec!["0".into(), "1".into()],
            vec![0.5, 0.5],
            vec![
                DensityOperator::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap(),
                DensityOperator::pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap(),
            ],
        )
        .unwrap();
        let v = i_max_upper(&correlated).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "correlated bit: {v}");
    }

    #[test]
    fn i_max_is_a_certified_operator_bound() {
        let mut rng = StdRng::seed_from_u64(50);
        for trial in 0..10 {
            let state = random_cq(3, 2, &mut rng);
            let v = i_max_upper(&state).unwrap();
            let joint = state.joint_operator();
            let prod = state.product_operator();
            let ok = prod.scaled(v.exp2()).sub(&joint).unwrap();
            assert!(
                ok.eig().unwrap().min_eigenvalue() >= -1e-9,
                "trial {trial}: ρ_XB ≰ 2^v ρ_X⊗ρ_B"
            );
            let bad = prod.scaled((v - 0.01).exp2()).sub(&joint).unwrap();
            assert!(
                bad.eig().unwrap().min_eigenvalue() < -1e-9,
                "trial {trial}: v not minimal"
            );
            // D_max dominates the mutual information.
            let (i, _) = mutual_info(&state).unwrap();
            assert!(v >= i - 1e-9, "trial {trial}: i_max {v} < I {i}");
        }
    }

    #[test]
    fn i_max_bipartite_matches_declared_split() {
        let correlated = diag_state(&[0.5, 0.0, 0.0, 0.5]);
        let v = i_max_upper_bipartite(&correlated, [2, 2]).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "correlated bit pair: {v}");

        let mut rng = StdRng::seed_from_u64(51);
        let a = random_density(2, &mut rng);
        let b = random_density(3, &mut rng);
        let v = i_max_upper_bipartite(&a.tensor(&b), [2, 3]).unwrap();
        assert!(v.abs() < 1e-6, "product: {v:.3e}");
    }

    #[test]
    fn lemma1_gap_examples() {
        let v = lemma1_gap(0.2, 0.1).unwrap();
        assert!((v - 300.0f64.log2()).abs() < 1e-12, "{v}");
        assert!((v - 8.2288).abs() < 5e-5);
        // γ outside (0, ε) is rejected, including the boundary cases.
        assert!(lemma1_gap(0.5, 3.0f64.sqrt()).is_err());
        assert!(lemma1_gap(0.9, 1.0).is_err());
        assert!(lemma1_gap(0.3, 0.0).is_err());
        assert!(lemma1_gap(0.3, 0.3).is_err());
        assert!(lemma1_gap(1.0, 0.5).is_err());
        assert!(lemma1_gap(0.0, 0.5).is_err());
    }

    #[test]
    fn d_is_dominated_by_d_max() {
        let mut rng = StdRng::seed_from_u64(52);
        for _ in 0..10 {
            let omega = random_density(3, &mut rng);
            let tau = random_density(3, &mut rng);
            let d = rel_entropy(&omega, &tau).unwrap().finite().unwrap();
            let dm = d_max(&omega, &tau).unwrap().finite().unwrap();
            assert!(d <= dm + 1e-8, "D {d} > D_max {dm}");
        }
    }

    #[test]
    fn rel_entropy_data_processing_under_partial_trace() {
        let mut rng = StdRng::seed_from_u64(53);
        for _ in 0..10 {
            let omega = random_density(6, &mut rng);
            let tau = random_density(6, &mut rng);
            let d = rel_entropy(&omega, &tau).unwrap().finite().unwrap();
            let d_marg = rel_entropy(
                &omega.partial_trace(&[2, 3], &[0]).unwrap(),
                &tau.partial_trace(&[2, 3], &[0]).unwrap(),
            )
            .unwrap()
            .finite()
            .unwrap();
            assert!(d_marg <= d + 1e-9, "marginal D {d_marg} > joint D {d}");
        }
    }
}
