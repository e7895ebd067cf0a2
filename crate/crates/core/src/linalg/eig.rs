//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Plane rotations with a complex phase are swept over all index pairs until
//! the off-diagonal Frobenius norm falls below `OFF_DIAG_TOL` relative to the
//! matrix norm. Jacobi is slower than tridiagonalization-based solvers but has
//! excellent relative accuracy and is simple enough to audit, which matters
//! more here than speed: every quantity downstream rests on this routine.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::matrix::CMatrix;

/// Hermiticity tolerance enforced at the eigensolver entry point.
pub const EIG_HERMITICITY_TOL: f64 = 1e-9;
/// Convergence threshold on the off-diagonal Frobenius norm, relative to ‖A‖_F.
pub const OFF_DIAG_TOL: f64 = 1e-13;

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `H = Σ λ_i v_i v_i†`, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary matrix whose `i`-th column is the eigenvector for `eigenvalues[i]`.
    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| l.abs())
            .fold(0.0, f64::max)
    }

    /// `Σ w(λ_i) v_i v_i†`; entries with `w = 0` are skipped.
    pub fn weighted_sum(&self, mut w: impl FnMut(f64) -> f64) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n);
        for (i, &lambda) in self.eigenvalues.iter().enumerate() {
            let weight = w(lambda);
            if weight == 0.0 {
                continue;
            }
            let v = self.vectors.column(i);
            for r in 0..n {
                let vr = weight * v[r];
                for (s, vs) in v.iter().enumerate() {
                    let cur = out.get(r, s);
                    out.set(r, s, cur + vr * vs.conj());
                }
            }
        }
        out
    }

    /// Projector onto the span of eigenvectors whose eigenvalue satisfies `pred`.
    pub fn projector_where(&self, mut pred: impl FnMut(f64) -> bool) -> CMatrix {
        self.weighted_sum(|l| if pred(l) { 1.0 } else { 0.0 })
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.weighted_sum(|l| l)
    }
}

/// Eigendecomposition of a Hermitian matrix given as a raw `CMatrix`.
pub(crate) fn eig_cmatrix(a: &CMatrix) -> Result<EigenDecomposition> {
    let scale = a.max_abs().max(1.0);
    let defect = a.hermiticity_defect();
    if defect > EIG_HERMITICITY_TOL * scale {
        return Err(Error::NotHermitian {
            defect,
            tol: EIG_HERMITICITY_TOL,
        });
    }

    let n = a.dim();
    if n == 0 {
        return Err(Error::DimMismatch {
            expected: 1,
            actual: 0,
        });
    }

    // Work on the exactly-Hermitian average so rounding in the input cannot
    // push the iteration off the Hermitian manifold.
    let mut w = a.symmetrized();
    let mut v = CMatrix::identity(n);
    let fro = w.frobenius_norm();

    if fro == 0.0 || n == 1 {
        let eigenvalues = (0..n).map(|i| w.get(i, i).re).collect();
        return Ok(EigenDecomposition {
            eigenvalues,
            vectors: v,
        });
    }

    let target = OFF_DIAG_TOL * fro;
    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(&w) <= target {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
    }
    if !converged {
        // One more check: the final sweep may have reached the target.
        let off = off_diagonal_norm(&w);
        if off > target {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                off,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| w.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, |r, c| v.get(r, order[c]));
    Ok(EigenDecomposition {
        eigenvalues,
        vectors,
    })
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            acc += a.get(i, j).norm_sqr();
        }
    }
    (2.0 * acc).sqrt()
}

/// One plane rotation annihilating `w[p][q]`, accumulated into `v`.
fn rotate(w: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = w.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = w.get(p, p).re;
    let aqq = w.get(q, q).re;
    let theta = 0.5 * (2.0 * r).atan2(app - aqq);
    let (s, c) = theta.sin_cos();
    let phase = apq / r; // e^{iφ} with φ = arg(w[p][q])
    let s_phase = s * phase;
    let s_phase_conj = s * phase.conj();

    let n = w.dim();
    // Column update: A ← A·J.
    for row in 0..n {
        let ap = w.get(row, p);
        let aq = w.get(row, q);
        w.set(row, p, c * ap + s_phase_conj * aq);
        w.set(row, q, -s_phase * ap + c * aq);
    }
    // Row update: A ← J†·A.
    for col in 0..n {
        let ap = w.get(p, col);
        let aq = w.get(q, col);
        w.set(p, col, c * ap + s_phase * aq);
        w.set(q, col, -s_phase_conj * ap + c * aq);
    }
    // The rotated pivot is zero by construction; pin it to keep the sweep's
    // convergence measure honest.
    w.set(p, q, Complex64::new(0.0, 0.0));
    w.set(q, p, Complex64::new(0.0, 0.0));
    let wpp = w.get(p, p);
    let wqq = w.get(q, q);
    w.set(p, p, Complex64::new(wpp.re, 0.0));
    w.set(q, q, Complex64::new(wqq.re, 0.0));

    // Accumulate eigenvectors: V ← V·J.
    for row in 0..n {
        let vp = v.get(row, p);
        let vq = v.get(row, q);
        v.set(row, p, c * vp + s_phase_conj * vq);
        v.set(row, q, -s_phase * vp + c * vq);
    }
}
