//! Randomized verification batteries behind the `verify` CLI command.
//!
//! Each suite draws seeded random instances and re-checks one structural
//! inequality of the achievability argument with an explicit numerical
//! margin: the quantum Neyman–Pearson value against a classical oracle on
//! commuting pairs, the decoding operator inequality, the convex-split
//! fidelity floor, the pure-state ensemble entropy collapse, the
//! position-based decoder's error budget, and the metric/divergence
//! ordering relations. A margin ≥ 0 is a pass; the report keeps the worst
//! margin and where it occurred so near-misses are visible even when
//! everything passes.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::divergences::{
    d_h_epsilon, d_h_epsilon_cq, d_h_value_cap, d_max, entropy, entropy_variance, mutual_info,
    rel_entropy,
};
use crate::error::{Error, Result};
use crate::linalg::{
    fidelity, partial_trace, purified_distance, trace_distance, CMatrix, DensityOperator,
    KERNEL_TOL,
};
use crate::protocol::{convex_split_fidelity, hn_residual, mc_average_error};
use crate::states::{
    ensemble_to_cq, reduce_wiretap, validated_distribution, CqState, PureStateEnsemble,
    WiretapChannel,
};

/// Verification suites runnable from the CLI and the acceptance tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    /// Quantum vs classical Neyman–Pearson values on commuting pairs.
    Np,
    /// Decoding operator inequality residual eigenvalues.
    Hn,
    /// Convex-split fidelity floor and purified-distance cap.
    ConvexSplit,
    /// Pure-state ensemble: mutual information and its variance collapse to
    /// the average-state entropy and entropy variance.
    Prop1,
    /// Position-based decoding Monte Carlo against the one-shot error budget.
    Protocol,
    /// Metric and divergence ordering relations.
    Metrics,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 6] = [
        SuiteKind::Np,
        SuiteKind::Hn,
        SuiteKind::ConvexSplit,
        SuiteKind::Prop1,
        SuiteKind::Protocol,
        SuiteKind::Metrics,
    ];

    /// Canonical CLI name.
    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Np => "np",
            SuiteKind::Hn => "hn",
            SuiteKind::ConvexSplit => "convex-split",
            SuiteKind::Prop1 => "prop1",
            SuiteKind::Protocol => "protocol",
            SuiteKind::Metrics => "metrics",
        }
    }

    pub fn from_name(name: &str) -> Option<SuiteKind> {
        SuiteKind::ALL.iter().copied().find(|k| k.name() == name)
    }

    /// Trial count used when the caller does not override it.
    pub fn default_trials(self) -> usize {
        match self {
            SuiteKind::Np => 50,
            SuiteKind::Hn => 1000,
            SuiteKind::ConvexSplit => 100,
            SuiteKind::Prop1 => 100,
            SuiteKind::Protocol => 1000,
            SuiteKind::Metrics => 200,
        }
    }
}

/// Outcome of one verification suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub checks_passed: usize,
    pub checks_failed: usize,
    /// Smallest slack observed across all checks; negative means a violation.
    pub worst_margin: f64,
    /// Where the smallest slack occurred.
    pub worst_detail: String,
    /// First few failing checks, capped.
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks_failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {}: {}/{} checks passed ({} trials, seed {})",
            self.suite,
            self.checks_passed,
            self.checks_passed + self.checks_failed,
            self.trials,
            self.seed,
        )?;
        write!(
            f,
            "  worst margin {:+.3e} at {}",
            self.worst_margin, self.worst_detail
        )?;
        for failure in &self.failures {
            write!(f, "\n  FAIL {failure}")?;
        }
        if self.checks_failed > self.failures.len() {
            write!(
                f,
                "\n  ... and {} further failures",
                self.checks_failed - self.failures.len()
            )?;
        }
        Ok(())
    }
}

const MAX_REPORTED_FAILURES: usize = 5;

struct Collector {
    passed: usize,
    failed: usize,
    worst_margin: f64,
    worst_detail: String,
    failures: Vec<String>,
}

impl Collector {
    fn new() -> Self {
        Collector {
            passed: 0,
            failed: 0,
            worst_margin: f64::INFINITY,
            worst_detail: String::new(),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, margin: f64, detail: String) {
        if margin.is_nan() || margin < self.worst_margin {
            self.worst_margin = margin;
            self.worst_detail.clone_from(&detail);
        }
        if margin >= 0.0 {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < MAX_REPORTED_FAILURES {
                self.failures.push(detail);
            }
        }
    }

    fn into_report(self, kind: SuiteKind, seed: u64, trials: usize) -> SuiteReport {
        SuiteReport {
            suite: kind.name(),
            seed,
            trials,
            checks_passed: self.passed,
            checks_failed: self.failed,
            worst_margin: self.worst_margin,
            worst_detail: self.worst_detail,
            failures: self.failures,
        }
    }
}

/// Run one verification suite with `trials` random instances.
pub fn run_suite(kind: SuiteKind, trials: usize, seed: u64) -> Result<SuiteReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter(
            "verification needs at least one trial".into(),
        ));
    }
    match kind {
        SuiteKind::Np => run_np(trials, seed),
        SuiteKind::Hn => run_hn(trials, seed),
        SuiteKind::ConvexSplit => run_convex_split(trials, seed),
        SuiteKind::Prop1 => run_prop1(trials, seed),
        SuiteKind::Protocol => run_protocol(trials, seed),
        SuiteKind::Metrics => run_metrics(trials, seed),
    }
}

/// Classical randomized-threshold Neyman–Pearson value
/// `−log₂ min{Σ q_i t_i : t ∈ [0,1]^d, Σ p_i t_i ≥ 1−ε}` in bits.
///
/// Outcomes are taken in decreasing likelihood-ratio order with a fractional
/// test on the marginal outcome; this is the exact optimum for commuting
/// (diagonal) pairs and serves as the oracle for the quantum solver. The
/// value is capped like the quantum solver's when the alternative mass
/// vanishes.
pub fn classical_np_value(p: &[f64], q: &[f64], eps: f64) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimMismatch {
            expected: p.len(),
            actual: q.len(),
        });
    }
    let p = validated_distribution(p)?;
    let q = validated_distribution(q)?;
    if !eps.is_finite() || eps <= 0.0 || eps >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "error tolerance eps = {eps} must lie in (0, 1)"
        )));
    }
    let mut order: Vec<usize> = (0..p.len()).collect();
    // Decreasing p_i/q_i via cross-multiplication, so q_i = 0 sorts first.
    order.sort_by(|&i, &j| {
        (p[j] * q[i])
            .partial_cmp(&(p[i] * q[j]))
            .unwrap_or(Ordering::Equal)
    });
    let mut need = 1.0 - eps;
    let mut beta = 0.0;
    for &i in &order {
        if need <= 0.0 {
            break;
        }
        if p[i] <= 0.0 {
            continue;
        }
        let take = (need / p[i]).min(1.0);
        beta += take * q[i];
        need -= take * p[i];
    }
    if beta < KERNEL_TOL {
        return Ok(d_h_value_cap());
    }
    Ok(-beta.log2())
}

fn random_distribution(n: usize, floor: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + floor).collect();
    let sum: f64 = raw.iter().sum();
    raw.iter().map(|r| r / sum).collect()
}

fn random_density(dim: usize, rng: &mut ChaCha8Rng) -> Result<DensityOperator> {
    let g = CMatrix::from_fn(dim, |_, _| {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    let gg = g.mul(&g.adjoint())?;
    let tr = gg.trace().re;
    DensityOperator::from_matrix(gg.scaled(tr.recip()))
}

fn random_cq(num_symbols: usize, dim: usize, rng: &mut ChaCha8Rng) -> Result<CqState> {
    let p = random_distribution(num_symbols, 0.2, rng);
    let blocks = (0..num_symbols)
        .map(|_| random_density(dim, rng))
        .collect::<Result<Vec<_>>>()?;
    CqState::new((0..num_symbols).map(|i| i.to_string()).collect(), p, blocks)
}

fn random_unit_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

fn diagonal_state(p: &[f64]) -> Result<DensityOperator> {
    DensityOperator::from_matrix(CMatrix::from_fn(p.len(), |i, j| {
        if i == j {
            Complex64::new(p[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

fn run_np(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut col = Collector::new();
    for t in 0..trials {
        let dim = rng.gen_range(2..=6);
        let p = random_distribution(dim, 0.05, &mut rng);
        let q = random_distribution(dim, 0.05, &mut rng);
        let rho = diagonal_state(&p)?;
        let sigma = diagonal_state(&q)?;
        for eps in [0.1, 0.25, 0.5] {
            let quantum = d_h_epsilon(&rho, &sigma, eps)?.value_bits;
            let classical = classical_np_value(&p, &q, eps)?;
            let defect = (quantum - classical).abs();
            col.check(
                1e-6 - defect,
                format!("trial {t}, dim {dim}, eps {eps}: |quantum − classical| = {defect:.3e} bits"),
            );
        }
    }
    Ok(col.into_report(SuiteKind::Np, seed, trials))
}

fn run_hn(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut col = Collector::new();
    for t in 0..trials {
        let dim = rng.gen_range(2..=6);
        // A density operator has eigenvalues in [0, 1], hence 0 ≤ S ≤ I.
        let s = random_density(dim, &mut rng)?.op().clone();
        let t_scale = rng.gen_range(0.0..3.0);
        let t_op = random_density(dim, &mut rng)?.op().scaled(t_scale);
        let c = [0.1, 1.0, 10.0][t % 3];
        let residual = hn_residual(&s, &t_op, c)?;
        col.check(
            residual + 1e-9,
            format!("trial {t}, dim {dim}, c {c}: residual eigenvalue {residual:.3e}"),
        );
    }
    Ok(col.into_report(SuiteKind::Hn, seed, trials))
}

fn run_convex_split(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut col = Collector::new();
    for t in 0..trials {
        let state = random_cq(2, 2, &mut rng)?;
        let joint = DensityOperator::new(state.joint_operator())?;
        let product = DensityOperator::new(state.product_operator())?;
        let dmax = d_max(&joint, &product)?
            .expect_finite("cq max-information")?;
        for k in [2usize, 4, 8, 16] {
            let f = convex_split_fidelity(&state, k)?;
            let floor = 1.0 / (1.0 + (2f64.powf(dmax) - 1.0) / k as f64);
            col.check(
                f - floor + 1e-9,
                format!("trial {t}, K {k}: fidelity {f:.12} vs floor {floor:.12}"),
            );
            let p_dist = (1.0 - f).max(0.0).sqrt();
            let p_cap = (2f64.powf(dmax) / k as f64).sqrt();
            col.check(
                p_cap + 1e-9 - p_dist,
                format!("trial {t}, K {k}: purified distance {p_dist:.12} vs cap {p_cap:.12}"),
            );
        }
    }
    Ok(col.into_report(SuiteKind::ConvexSplit, seed, trials))
}

fn run_prop1(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut col = Collector::new();
    for t in 0..trials {
        let x_count = rng.gen_range(2..=4);
        let dim = rng.gen_range(2..=4);
        let p = random_distribution(x_count, 0.1, &mut rng);
        let vectors = (0..x_count)
            .map(|_| random_unit_vector(dim, &mut rng))
            .collect();
        let ens = PureStateEnsemble::new(p, vectors)?;
        let state = ensemble_to_cq(&ens)?;
        let (info, var) = mutual_info(&state)?;
        let rho_b = state.average_state();
        let h = entropy(&rho_b)?;
        let hv = entropy_variance(&rho_b)?;
        let info_defect = (info - h).abs();
        let var_defect = (var - hv).abs();
        col.check(
            1e-9 - info_defect,
            format!("trial {t}, |X| {x_count}, d {dim}: |I(X;B) − H(ρ_B)| = {info_defect:.3e}"),
        );
        col.check(
            1e-9 - var_defect,
            format!("trial {t}, |X| {x_count}, d {dim}: |V(X;B) − V(ρ_B)| = {var_defect:.3e}"),
        );
    }
    Ok(col.into_report(SuiteKind::Prop1, seed, trials))
}

fn run_protocol(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut col = Collector::new();
    // Nearly orthogonal Bob qubits with a decoupled Eve; the pair fidelity
    // must sit within the 0.1 precondition of the error-budget check.
    let bob: Vec<DensityOperator> = [[0.98, 0.02], [0.02, 0.98]]
        .iter()
        .map(|diag| diagonal_state(diag))
        .collect::<Result<Vec<_>>>()?;
    let eve = DensityOperator::maximally_mixed(2);
    let outputs = bob
        .iter()
        .map(|b| {
            DensityOperator::from_matrix(
                crate::linalg::tensor(b.op(), eve.op()).matrix().clone(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let ch = WiretapChannel::new(
        vec!["0".into(), "1".into()],
        2,
        2,
        outputs,
        None,
    )?;
    let p = ch.default_p_x();
    let red = reduce_wiretap(&ch, &p)?;
    let pair_fid = fidelity(red.rho_xb.block(0).op(), red.rho_xb.block(1).op())?;
    col.check(
        0.1 - pair_fid,
        format!("input-pair fidelity {pair_fid:.4} within the 0.1 precondition"),
    );

    let eps1 = 0.2;
    let eta1 = 0.1;
    let test = d_h_epsilon_cq(&red.rho_xb, eps1 - eta1)?;
    // Largest message–key product the one-shot budget licenses; at least
    // one codeword is always sent.
    let budget_bits = test.value_bits - (4.0 * eps1 / (eta1 * eta1)).log2();
    let mk = (budget_bits.exp2().floor().max(1.0)) as usize;
    let stats = mc_average_error(&ch, &p, mk, 1, &test, trials as u64, seed)?;
    let cap = eps1 + 3.0 * stats.ci95;
    col.check(
        cap - stats.mean,
        format!(
            "MC mean error {:.6} vs eps1 + 3·ci95 = {:.6} (MK = {mk}, {} codebooks)",
            stats.mean, cap, stats.trials
        ),
    );
    col.check(
        if stats.over_info_budget { -1.0 } else { 1.0 },
        format!(
            "log2(MK) = {:.3} within the hypothesis-testing budget {:.3}",
            stats.log2_mk, test.value_bits
        ),
    );
    Ok(col.into_report(SuiteKind::Protocol, seed, trials))
}

fn run_metrics(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut col = Collector::new();
    for t in 0..trials {
        let dim = rng.gen_range(2..=4);
        let rho = random_density(dim, &mut rng)?;
        let sigma = random_density(dim, &mut rng)?;
        let tau = random_density(dim, &mut rng)?;

        let p_rt = purified_distance(&rho, &tau)?;
        let p_rs = purified_distance(&rho, &sigma)?;
        let p_st = purified_distance(&sigma, &tau)?;
        col.check(
            p_rs + p_st + 1e-8 - p_rt,
            format!(
                "trial {t}, dim {dim}: triangle P(ρ,τ) = {p_rt:.9} vs {:.9}",
                p_rs + p_st
            ),
        );

        let td = trace_distance(rho.op(), sigma.op())?;
        col.check(
            p_rs + 1e-8 - td,
            format!("trial {t}, dim {dim}: trace distance {td:.9} vs purified {p_rs:.9}"),
        );

        let d = rel_entropy(&rho, &sigma)?.expect_finite("relative entropy")?;
        let dm = d_max(&rho, &sigma)?.expect_finite("max-relative entropy")?;
        col.check(
            dm + 1e-8 - d,
            format!("trial {t}, dim {dim}: D = {d:.9} vs D_max = {dm:.9}"),
        );

        let rho_ab = random_density(4, &mut rng)?;
        let sigma_ab = random_density(4, &mut rng)?;
        let rho_a = DensityOperator::new(partial_trace(rho_ab.op(), &[2, 2], &[0])?)?;
        let sigma_a = DensityOperator::new(partial_trace(sigma_ab.op(), &[2, 2], &[0])?)?;
        let d_joint = rel_entropy(&rho_ab, &sigma_ab)?.expect_finite("joint relative entropy")?;
        let d_marg = rel_entropy(&rho_a, &sigma_a)?.expect_finite("marginal relative entropy")?;
        col.check(
            d_joint + 1e-8 - d_marg,
            format!(
                "trial {t}: data processing D(AB) = {d_joint:.9} vs D(A) = {d_marg:.9}"
            ),
        );
    }
    Ok(col.into_report(SuiteKind::Metrics, seed, trials))
}
