//! Hermitian and density operators plus the state metrics built on them:
//! matrix functions on the support, tensor/partial-trace plumbing, trace
//! norm, fidelity, purified distance, and spectral projectors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::eig::{eig_cmatrix, EigenDecomposition};
use crate::linalg::matrix::{rayleigh_diagonal, CMatrix};

/// Hermiticity tolerance for operator construction, relative to the entry scale.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Eigenvalues above `-PSD_TOL` count as non-negative.
pub const PSD_TOL: f64 = 1e-10;
/// Relative cutoff below which an eigenvalue belongs to the kernel when a
/// support must be identified (matrix functions, support leak checks).
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// Tolerance separating "positive" from "zero" eigenvalues in spectral splits.
pub const KERNEL_TOL: f64 = 1e-10;
/// `|trace - 1|` below this counts as normalized.
pub const TRACE_TOL: f64 = 1e-10;

/// Hermitian operator; entries are kept exactly symmetric after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: CMatrix,
}

impl HermitianOperator {
    /// Validates Hermiticity within `HERMITICITY_TOL` (relative to the entry
    /// scale) and stores the symmetrized matrix.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.dim() == 0 {
            return Err(Error::DimMismatch {
                expected: 1,
                actual: 0,
            });
        }
        let scale = mat.max_abs().max(1.0);
        let defect = mat.hermiticity_defect();
        if defect > HERMITICITY_TOL * scale {
            return Err(Error::NotHermitian {
                defect,
                tol: HERMITICITY_TOL,
            });
        }
        Ok(HermitianOperator {
            mat: mat.symmetrized(),
        })
    }

    /// Accepts any matrix and symmetrizes it. For results of arithmetic that
    /// are Hermitian up to rounding; not a validation path.
    pub fn symmetrized_from(mat: CMatrix) -> Self {
        HermitianOperator {
            mat: mat.symmetrized(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        HermitianOperator {
            mat: CMatrix::zeros(dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        HermitianOperator {
            mat: CMatrix::identity(dim),
        }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        HermitianOperator {
            mat: CMatrix::from_real_diag(diag),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(HermitianOperator {
            mat: self.mat.add(&other.mat)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(HermitianOperator {
            mat: self.mat.sub(&other.mat)?,
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        HermitianOperator {
            mat: self.mat.scaled(factor),
        }
    }

    pub fn eig(&self) -> Result<EigenDecomposition> {
        eig_cmatrix(&self.mat)
    }

    /// `Tr{self · other}`, real by Hermiticity.
    pub fn trace_product(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.mat.get(i, j) * other.mat.get(j, i);
            }
        }
        Ok(acc.re)
    }
}

/// Positive semi-definite operator with trace in `(0, 1 + 1e-10]`.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    op: HermitianOperator,
    trace: f64,
    normalized: bool,
}

impl DensityOperator {
    /// Validates positivity (eigenvalues ≥ −1e-10) and the trace window.
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let eig = op.eig()?;
        let min = eig.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        let trace = op.trace();
        if !(trace > 0.0 && trace <= 1.0 + TRACE_TOL) {
            return Err(Error::InvalidTrace { trace });
        }
        let normalized = (trace - 1.0).abs() <= TRACE_TOL;
        Ok(DensityOperator {
            op,
            trace,
            normalized,
        })
    }

    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        DensityOperator::new(HermitianOperator::new(mat)?)
    }

    /// Pure state `|v⟩⟨v| / ⟨v|v⟩`.
    pub fn pure(v: &[Complex64]) -> Result<Self> {
        let norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm_sqr <= 0.0 {
            return Err(Error::InvalidParameter(
                "pure state vector must be nonzero".into(),
            ));
        }
        let mat = CMatrix::outer(v).scaled(1.0 / norm_sqr);
        Ok(DensityOperator {
            op: HermitianOperator::symmetrized_from(mat),
            trace: 1.0,
            normalized: true,
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityOperator {
            op: HermitianOperator::identity(dim).scaled(1.0 / dim as f64),
            trace: 1.0,
            normalized: true,
        }
    }

    /// Internal constructor for operators that are PSD by construction
    /// (tensor products, marginals of validated states, convex mixtures).
    pub(crate) fn from_parts_unchecked(op: HermitianOperator) -> Self {
        let trace = op.trace();
        let normalized = (trace - 1.0).abs() <= TRACE_TOL;
        DensityOperator {
            op,
            trace,
            normalized,
        }
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn eig(&self) -> Result<EigenDecomposition> {
        self.op.eig()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        DensityOperator::from_parts_unchecked(tensor(&self.op, &other.op))
    }

    /// Marginal on the kept subsystems; stays PSD, trace is preserved.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        let op = partial_trace(&self.op, dims, keep)?;
        Ok(DensityOperator::from_parts_unchecked(op))
    }

    /// `Tr{ρ · O}`.
    pub fn expectation(&self, obs: &HermitianOperator) -> Result<f64> {
        self.op.trace_product(obs)
    }
}

/// Spectral decomposition of a Hermitian operator, eigenvalues ascending.
pub fn eig_hermitian(h: &HermitianOperator) -> Result<EigenDecomposition> {
    h.eig()
}

/// `Σ f(λ_i) v_i v_i†`. With `support_only`, eigenvalues whose magnitude is
/// below the support cutoff (relative to the largest magnitude) are mapped
/// to 0 and `f` is never evaluated there.
pub fn matrix_fn(
    h: &HermitianOperator,
    f: impl Fn(f64) -> f64,
    support_only: bool,
) -> Result<HermitianOperator> {
    let eig = h.eig()?;
    let cutoff = SUPPORT_CUTOFF * eig.max_abs_eigenvalue();
    let mut bad: Option<f64> = None;
    let out = eig.weighted_sum(|lambda| {
        if support_only && lambda.abs() <= cutoff {
            return 0.0;
        }
        let y = f(lambda);
        if !y.is_finite() && bad.is_none() {
            bad = Some(lambda);
        }
        y
    });
    if let Some(eigenvalue) = bad {
        return Err(Error::UndefinedAtEigenvalue { eigenvalue });
    }
    Ok(HermitianOperator::symmetrized_from(out))
}

/// Square root of a PSD operator; eigenvalues in `[-PSD_TOL, 0)` are clamped.
pub fn sqrt_psd(h: &HermitianOperator) -> Result<HermitianOperator> {
    let eig = h.eig()?;
    let min = eig.min_eigenvalue();
    if min < -PSD_TOL * eig.max_abs_eigenvalue().max(1.0) {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(HermitianOperator::symmetrized_from(
        eig.weighted_sum(|l| l.max(0.0).sqrt()),
    ))
}

/// `f(λ)` over the positive support of a PSD operator, 0 on the kernel.
/// Eigenvalues below the support cutoff — including the small negative
/// residues `PSD_TOL` admits — are treated as kernel; anything more negative
/// is rejected.
fn psd_support_fn(h: &HermitianOperator, f: impl Fn(f64) -> f64) -> Result<HermitianOperator> {
    let eig = h.eig()?;
    let min = eig.min_eigenvalue();
    if min < -PSD_TOL * eig.max_abs_eigenvalue().max(1.0) {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let cutoff = SUPPORT_CUTOFF * eig.max_abs_eigenvalue();
    Ok(HermitianOperator::symmetrized_from(eig.weighted_sum(
        |l| if l <= cutoff { 0.0 } else { f(l) },
    )))
}

/// `λ^(-1/2)` on the support, 0 on the kernel; input must be PSD.
pub fn inv_sqrt_on_support(h: &HermitianOperator) -> Result<HermitianOperator> {
    psd_support_fn(h, |l| 1.0 / l.sqrt())
}

/// `log₂ λ` on the support, 0 on the kernel; input must be PSD.
pub fn log2_on_support(h: &HermitianOperator) -> Result<HermitianOperator> {
    psd_support_fn(h, f64::log2)
}

/// Kronecker product.
pub fn tensor(a: &HermitianOperator, b: &HermitianOperator) -> HermitianOperator {
    HermitianOperator {
        mat: a.matrix().kron(b.matrix()),
    }
}

/// Trace out every subsystem not listed in `keep` (indices into `dims`,
/// strictly increasing). The kept factors keep their relative order.
pub fn partial_trace(
    h: &HermitianOperator,
    dims: &[usize],
    keep: &[usize],
) -> Result<HermitianOperator> {
    let total: usize = dims.iter().product();
    if total != h.dim() || dims.is_empty() {
        return Err(Error::DimMismatch {
            expected: h.dim(),
            actual: total,
        });
    }
    if keep.is_empty()
        || keep.windows(2).any(|w| w[0] >= w[1])
        || keep.iter().any(|&k| k >= dims.len())
    {
        return Err(Error::InvalidParameter(
            "partial trace: `keep` must be a strictly increasing, non-empty subset".into(),
        ));
    }

    let strides: Vec<usize> = {
        let mut s = vec![1usize; dims.len()];
        for i in (0..dims.len() - 1).rev() {
            s[i] = s[i + 1] * dims[i + 1];
        }
        s
    };
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let traced_dim: usize = traced.iter().map(|&k| dims[k]).product();

    // Offset of a row-major multi-index over the given factor subset.
    let offset = |factors: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for &f in factors.iter().rev() {
            off += (idx % dims[f]) * strides[f];
            idx /= dims[f];
        }
        off
    };

    let mut out = CMatrix::zeros(kept_dim);
    for r in 0..kept_dim {
        let ro = offset(keep, r);
        for c in 0..kept_dim {
            let co = offset(keep, c);
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..traced_dim {
                let to = offset(&traced, t);
                acc += h.matrix().get(ro + to, co + to);
            }
            out.set(r, c, acc);
        }
    }
    Ok(HermitianOperator::symmetrized_from(out))
}

/// `Σ |λ_i|`.
pub fn trace_norm(a: &HermitianOperator) -> Result<f64> {
    let eig = a.eig()?;
    Ok(eig.eigenvalues().iter().map(|l| l.abs()).sum())
}

/// `½ ‖a − b‖₁`.
pub fn trace_distance(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    Ok(0.5 * trace_norm(&a.sub(b)?)?)
}

/// Root fidelity `Tr √(√P Q √P)` of two PSD operators (not necessarily
/// normalized).
pub fn root_fidelity(p: &HermitianOperator, q: &HermitianOperator) -> Result<f64> {
    let eig_p = p.eig()?;
    check_psd(&eig_p)?;
    let eig_q = q.eig()?;
    check_psd(&eig_q)?;
    let sqrt_p = HermitianOperator::symmetrized_from(eig_p.weighted_sum(|l| l.max(0.0).sqrt()));
    let inner = sqrt_p
        .matrix()
        .mul(q.matrix())?
        .mul(sqrt_p.matrix())?
        .symmetrized();
    let eig_m = eig_cmatrix(&inner)?;
    Ok(eig_m
        .eigenvalues()
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .sum())
}

/// Fidelity `F(P,Q) = ‖√P √Q‖₁²`.
pub fn fidelity(p: &HermitianOperator, q: &HermitianOperator) -> Result<f64> {
    let r = root_fidelity(p, q)?;
    Ok(r * r)
}

fn check_psd(eig: &EigenDecomposition) -> Result<()> {
    let min = eig.min_eigenvalue();
    if min < -PSD_TOL * eig.max_abs_eigenvalue().max(1.0) {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(())
}

/// Purified (sine) distance between subnormalized states, computed on the
/// literal `(dim+1)`-dimensional direct-sum embedding.
pub fn purified_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch {
            expected: rho.dim(),
            actual: sigma.dim(),
        });
    }
    let f = fidelity(&embed(rho), &embed(sigma))?;
    Ok((1.0 - f).clamp(0.0, 1.0).sqrt())
}

fn embed(rho: &DensityOperator) -> HermitianOperator {
    let d = rho.dim();
    let mut m = CMatrix::zeros(d + 1);
    for i in 0..d {
        for j in 0..d {
            m.set(i, j, rho.matrix().get(i, j));
        }
    }
    // Residual mass; may be a small negative rounding residue for states
    // normalized up to tolerance.
    m.set(d, d, Complex64::new((1.0 - rho.trace()).max(0.0), 0.0));
    HermitianOperator::symmetrized_from(m)
}

/// Projectors `(P₊, Π₀)` onto the strictly-positive part and the kernel band
/// `|λ| ≤ KERNEL_TOL` (relative to the spectral scale).
pub fn positive_part_projector(
    h: &HermitianOperator,
) -> Result<(HermitianOperator, HermitianOperator)> {
    let eig = h.eig()?;
    let tol = KERNEL_TOL * eig.max_abs_eigenvalue().max(1.0);
    let plus = eig.projector_where(|l| l > tol);
    let zero = eig.projector_where(|l| l.abs() <= tol);
    Ok((
        HermitianOperator::symmetrized_from(plus),
        HermitianOperator::symmetrized_from(zero),
    ))
}

/// Mass of `rho` outside the support of `tau`: `Tr{Π_ker(τ) ρ}`.
pub(crate) fn support_leak(rho: &DensityOperator, tau_eig: &EigenDecomposition) -> Result<f64> {
    let cutoff = SUPPORT_CUTOFF * tau_eig.max_abs_eigenvalue();
    let weights = rayleigh_diagonal(rho.matrix(), tau_eig.vectors())?;
    Ok(tau_eig
        .eigenvalues()
        .iter()
        .zip(&weights)
        .filter(|(l, _)| l.abs() <= cutoff)
        .map(|(_, w)| w.max(0.0))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub fn random_density(dim: usize, rng: &mut StdRng) -> DensityOperator {
        let g = CMatrix::from_fn(dim, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let gg = g.mul(&g.adjoint()).unwrap();
        let tr = gg.trace().re;
        DensityOperator::from_matrix(gg.scaled(1.0 / tr)).unwrap()
    }

    #[test]
    fn hermitian_constructor_rejects_asymmetry() {
        let mut m = CMatrix::zeros(2);
        m.set(0, 1, c(1.0, 0.0));
        m.set(1, 0, c(1.0, 1e-9));
        assert!(matches!(
            HermitianOperator::new(m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn density_rejects_negative_eigenvalue() {
        let m = CMatrix::from_real_diag(&[1.2, -0.2]);
        assert!(matches!(
            DensityOperator::from_matrix(m),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn density_rejects_overtrace() {
        let m = CMatrix::from_real_diag(&[0.8, 0.3]);
        assert!(matches!(
            DensityOperator::from_matrix(m),
            Err(Error::InvalidTrace { .. })
        ));
    }

    #[test]
    fn matrix_fn_sqrt_diag() {
        let h = HermitianOperator::from_real_diag(&[4.0, 9.0]);
        let s = matrix_fn(&h, |l| l.sqrt(), false).unwrap();
        assert!((s.matrix().get(0, 0).re - 2.0).abs() < 1e-12);
        assert!((s.matrix().get(1, 1).re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn inv_sqrt_annihilates_kernel() {
        let h = HermitianOperator::from_real_diag(&[4.0, 0.0]);
        let s = inv_sqrt_on_support(&h).unwrap();
        assert!((s.matrix().get(0, 0).re - 0.5).abs() < 1e-12);
        assert!(s.matrix().get(1, 1).norm() < 1e-12);
    }

    #[test]
    fn log2_roundtrip_on_random_density() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..10 {
            let rho = random_density(4, &mut rng);
            let l = log2_on_support(rho.op()).unwrap();
            let back = matrix_fn(&l, |x| x.exp2(), false).unwrap();
            let err = back.sub(rho.op()).unwrap().matrix().max_abs();
            assert!(err < 1e-9, "round trip error {err:.3e}");
        }
    }

    #[test]
    fn matrix_fn_reports_undefined_eigenvalue() {
        let h = HermitianOperator::from_real_diag(&[1.0, -2.0]);
        match matrix_fn(&h, f64::log2, false) {
            Err(Error::UndefinedAtEigenvalue { eigenvalue }) => {
                assert!((eigenvalue + 2.0).abs() < 1e-12)
            }
            other => panic!("expected undefined-eigenvalue error, got {other:?}"),
        }
    }

    #[test]
    fn partial_trace_of_product_scales() {
        let mut rng = StdRng::seed_from_u64(5);
        let a = random_density(2, &mut rng);
        let b = random_density(3, &mut rng);
        let ab = tensor(a.op(), b.op());
        let back = partial_trace(&ab, &[2, 3], &[0]).unwrap();
        // Tr_B(A⊗B) = Tr(B)·A = A for normalized B.
        let err = back.sub(a.op()).unwrap().matrix().max_abs();
        assert!(err < 1e-12);
    }

    #[test]
    fn partial_trace_of_correlated_classical_state() {
        let h = HermitianOperator::from_real_diag(&[0.5, 0.0, 0.0, 0.5]);
        for keep in [[0usize], [1usize]] {
            let m = partial_trace(&h, &[2, 2], &keep).unwrap();
            let err = m
                .sub(&HermitianOperator::identity(2).scaled(0.5))
                .unwrap()
                .matrix()
                .max_abs();
            assert!(err < 1e-12);
        }
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let mut rng = StdRng::seed_from_u64(9);
        let rho = random_density(12, &mut rng);
        let m = partial_trace(rho.op(), &[2, 3, 2], &[1]).unwrap();
        assert!((m.trace() - 1.0).abs() < 1e-12);
        let m2 = partial_trace(rho.op(), &[2, 3, 2], &[0, 2]).unwrap();
        assert!((m2.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&HermitianOperator::from_real_diag(&[1.0, -1.0])).unwrap() - 2.0)
            .abs()
            < 1e-12);
        let mut rng = StdRng::seed_from_u64(1);
        let rho = random_density(3, &mut rng);
        assert!((trace_norm(rho.op()).unwrap() - 1.0).abs() < 1e-10);
        let a = HermitianOperator::from_real_diag(&[1.0, 0.0]);
        let b = HermitianOperator::from_real_diag(&[0.0, 1.0]);
        assert!((trace_norm(&a.sub(&b).unwrap()).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_examples() {
        let mut rng = StdRng::seed_from_u64(2);
        let rho = random_density(4, &mut rng);
        assert!((fidelity(rho.op(), rho.op()).unwrap() - 1.0).abs() < 1e-9);

        let zero = DensityOperator::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let plus = DensityOperator::pure(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((fidelity(zero.op(), plus.op()).unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn fidelity_commuting_is_bhattacharyya() {
        let p = [0.1, 0.4, 0.5];
        let q = [0.3, 0.3, 0.4];
        let f = fidelity(
            &HermitianOperator::from_real_diag(&p),
            &HermitianOperator::from_real_diag(&q),
        )
        .unwrap();
        let bc: f64 = p.iter().zip(&q).map(|(a, b)| (a * b).sqrt()).sum();
        assert!((f - bc * bc).abs() < 1e-10);
    }

    #[test]
    fn fidelity_rejects_indefinite_input() {
        let p = HermitianOperator::from_real_diag(&[1.0, -0.5]);
        let q = HermitianOperator::identity(2);
        assert!(matches!(fidelity(&p, &q), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn purified_distance_basic() {
        let mut rng = StdRng::seed_from_u64(4);
        let rho = random_density(3, &mut rng);
        assert!(purified_distance(&rho, &rho).unwrap() < 1e-7);

        let zero = DensityOperator::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let one = DensityOperator::pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((purified_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn purified_distance_dominates_trace_distance() {
        let mut rng = StdRng::seed_from_u64(6);
        for _ in 0..20 {
            let rho = random_density(3, &mut rng);
            let sigma = random_density(3, &mut rng);
            let td = trace_distance(rho.op(), sigma.op()).unwrap();
            let pd = purified_distance(&rho, &sigma).unwrap();
            assert!(td <= pd + 1e-9, "td {td} > pd {pd}");
            assert!(pd < 1.0);
        }
    }

    #[test]
    fn positive_part_projector_examples() {
        let h = HermitianOperator::from_real_diag(&[1.0, -1.0]);
        let (p, k) = positive_part_projector(&h).unwrap();
        assert!((p.trace() - 1.0).abs() < 1e-12);
        assert!(k.trace().abs() < 1e-12);

        let z = HermitianOperator::zero(3);
        let (p, k) = positive_part_projector(&z).unwrap();
        assert!(p.trace().abs() < 1e-12);
        assert!((k.trace() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn projectors_resolve_identity_with_negative_part() {
        let mut rng = StdRng::seed_from_u64(8);
        let g = CMatrix::from_fn(4, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let h = HermitianOperator::symmetrized_from(g);
        let (p_pos, k) = positive_part_projector(&h).unwrap();
        let (p_neg, _) = positive_part_projector(&h.scaled(-1.0)).unwrap();
        let total = p_pos.add(&k).unwrap().add(&p_neg).unwrap();
        let err = total
            .sub(&HermitianOperator::identity(4))
            .unwrap()
            .matrix()
            .max_abs();
        assert!(err < 1e-9);
    }

    #[test]
    fn fidelity_monotone_under_partial_trace() {
        let mut rng = StdRng::seed_from_u64(10);
        for _ in 0..10 {
            let rho = random_density(6, &mut rng);
            let sigma = random_density(6, &mut rng);
            let f_joint = fidelity(rho.op(), sigma.op()).unwrap();
            let f_marg = fidelity(
                &partial_trace(rho.op(), &[2, 3], &[0]).unwrap(),
                &partial_trace(sigma.op(), &[2, 3], &[0]).unwrap(),
            )
            .unwrap();
            assert!(f_marg >= f_joint - 1e-9);
        }
    }
}
