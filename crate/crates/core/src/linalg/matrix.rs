//! Dense square complex matrices, row-major storage.
//!
//! This is the only matrix representation in the crate. Everything is desk
//! scale (dims well below ~1024), so the implementation favours clarity over
//! blocking or SIMD tricks.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a row-major buffer; the length must be `dim²`.
    pub fn from_data(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Ok(CMatrix { dim, data })
    }

    /// Build entrywise from a closure over `(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn from_real_diag(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut m = CMatrix::zeros(dim);
        for (i, &x) in diag.iter().enumerate() {
            m.data[i * dim + i] = Complex64::new(x, 0.0);
        }
        m
    }

    /// Rank-one matrix `v v†`.
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        CMatrix::from_fn(dim, |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    /// `i`-th column as an owned vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from `A = A†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `(A + A†)/2`.
    pub fn symmetrized(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, |i, j| {
            0.5 * (self.get(i, j) + self.get(j, i).conj())
        })
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn add(&self, other: &CMatrix) -> Result<CMatrix> {
        self.check_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CMatrix {
            dim: self.dim,
            data,
        })
    }

    pub fn sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.check_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CMatrix {
            dim: self.dim,
            data,
        })
    }

    /// `self += factor · other`, entrywise.
    pub fn add_scaled_assign(&mut self, other: &CMatrix, factor: f64) -> Result<()> {
        self.check_dim(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += factor * b;
        }
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| factor * z).collect(),
        }
    }

    pub fn scaled_complex(&self, factor: Complex64) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| factor * z).collect(),
        }
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &CMatrix) -> Result<CMatrix> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (da, db) = (self.dim, other.dim);
        let dim = da * db;
        let mut out = CMatrix::zeros(dim);
        for i in 0..da {
            for j in 0..da {
                let a = self.get(i, j);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..db {
                    for l in 0..db {
                        out.set(i * db + k, j * db + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// `⟨v| self |v⟩`.
    pub fn quad_form(&self, v: &[Complex64]) -> Complex64 {
        let n = self.dim;
        debug_assert_eq!(v.len(), n);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for (j, vj) in v.iter().enumerate() {
                row += self.data[i * n + j] * vj;
            }
            acc += v[i].conj() * row;
        }
        acc
    }

    fn check_dim(&self, other: &CMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        Ok(())
    }
}

/// Real parts of `⟨v_i| M |v_i⟩` for every column `v_i` of `vecs`.
///
/// One matmul instead of d separate quadratic forms.
pub(crate) fn rayleigh_diagonal(m: &CMatrix, vecs: &CMatrix) -> Result<Vec<f64>> {
    let mv = m.mul(vecs)?;
    let n = m.dim();
    let mut out = Vec::with_capacity(n);
    for col in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for row in 0..n {
            acc += vecs.get(row, col).conj() * mv.get(row, col);
        }
        out.push(acc.re);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mul_identity_is_noop() {
        let a = CMatrix::from_fn(3, |i, j| c((i + 2 * j) as f64, (i * j) as f64));
        let i3 = CMatrix::identity(3);
        assert_eq!(a.mul(&i3).unwrap(), a);
        assert_eq!(i3.mul(&a).unwrap(), a);
    }

    #[test]
    fn kron_of_identities() {
        let i2 = CMatrix::identity(2);
        assert_eq!(i2.kron(&i2), CMatrix::identity(4));
    }

    #[test]
    fn kron_diag_placement() {
        let a = CMatrix::from_real_diag(&[1.0, 0.0]);
        let b = CMatrix::from_real_diag(&[0.0, 1.0]);
        let ab = a.kron(&b);
        assert_eq!(ab, CMatrix::from_real_diag(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn trace_of_kron_multiplies() {
        let a = CMatrix::from_fn(2, |i, j| c((i + j) as f64, (i as f64) - (j as f64)));
        let b = CMatrix::from_fn(3, |i, j| c((2 * i + j) as f64, 0.5 * (i * j) as f64));
        let lhs = a.kron(&b).trace();
        let rhs = a.trace() * b.trace();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn hermiticity_defect_detects_asymmetry() {
        let mut a = CMatrix::zeros(2);
        a.set(0, 1, c(1.0, 0.0));
        a.set(1, 0, c(1.0, 1e-3));
        assert!(a.hermiticity_defect() > 5e-4);
        assert!(a.symmetrized().hermiticity_defect() < 1e-15);
    }

    #[test]
    fn quad_form_matches_direct_sum() {
        let a = CMatrix::from_fn(2, |i, j| {
            if i == j {
                c(1.0 + i as f64, 0.0)
            } else {
                c(0.5, if i < j { 0.25 } else { -0.25 })
            }
        });
        let v = [c(0.6, 0.0), c(0.0, 0.8)];
        let direct = a.quad_form(&v);
        // Hermitian input, so the quadratic form is real.
        assert!(direct.im.abs() < 1e-12);
        let rd = rayleigh_diagonal(&a, &CMatrix::from_fn(2, |i, j| if j == 0 { v[i] } else { c(0.0, 0.0) }))
            .unwrap();
        assert!((rd[0] - direct.re).abs() < 1e-12);
    }
}
