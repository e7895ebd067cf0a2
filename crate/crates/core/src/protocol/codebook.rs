//! Random codebooks: an M×K array of symbol indices drawn i.i.d. from the
//! input distribution, bit-reproducible from a 64-bit seed. Row `m` holds the
//! K codewords that share message `m` and differ only in the local key.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::states::validated_distribution;

/// A sampled (or explicitly supplied) codebook.
#[derive(Debug, Clone, Serialize)]
pub struct CodebookSample {
    codewords: Vec<Vec<usize>>,
    num_symbols: usize,
    seed: u64,
}

impl CodebookSample {
    /// Draw an `m_count × k_count` codebook i.i.d. from `p_x` by inverse-CDF
    /// sampling with a counter-mode generator seeded from `seed`.
    pub fn draw(p_x: &[f64], m_count: usize, k_count: usize, seed: u64) -> Result<Self> {
        if m_count == 0 || k_count == 0 {
            return Err(Error::InvalidParameter(format!(
                "codebook shape {m_count}×{k_count} must have positive extents"
            )));
        }
        let p = validated_distribution(p_x)?;
        let mut cdf = Vec::with_capacity(p.len());
        let mut acc = 0.0;
        for &w in &p {
            acc += w;
            cdf.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sample = || {
            let u: f64 = rng.gen();
            // Zero-probability symbols have zero-width cells and are skipped;
            // the final index absorbs any rounding residue in the last cell.
            cdf.iter().position(|&c| u < c).unwrap_or(p.len() - 1)
        };
        let codewords = (0..m_count)
            .map(|_| (0..k_count).map(|_| sample()).collect())
            .collect();
        Ok(CodebookSample {
            codewords,
            num_symbols: p.len(),
            seed,
        })
    }

    /// Wrap an explicit rectangular array of symbol indices.
    pub fn from_codewords(
        codewords: Vec<Vec<usize>>,
        num_symbols: usize,
        seed: u64,
    ) -> Result<Self> {
        if codewords.is_empty() || codewords[0].is_empty() {
            return Err(Error::InvalidParameter(
                "codebook must have at least one message and one key value".into(),
            ));
        }
        let k_count = codewords[0].len();
        for row in &codewords {
            if row.len() != k_count {
                return Err(Error::DimMismatch {
                    expected: k_count,
                    actual: row.len(),
                });
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= num_symbols) {
                return Err(Error::InvalidParameter(format!(
                    "codeword symbol {bad} is outside the alphabet of size {num_symbols}"
                )));
            }
        }
        Ok(CodebookSample {
            codewords,
            num_symbols,
            seed,
        })
    }

    /// Relabel messages: row `i` of the result is row `perm[i]` of `self`.
    pub fn permuted_messages(&self, perm: &[usize]) -> Result<Self> {
        let m = self.m_count();
        if perm.len() != m {
            return Err(Error::DimMismatch {
                expected: m,
                actual: perm.len(),
            });
        }
        let mut seen = vec![false; m];
        for &i in perm {
            if i >= m || seen[i] {
                return Err(Error::InvalidParameter(format!(
                    "message relabeling {perm:?} is not a permutation of 0..{m}"
                )));
            }
            seen[i] = true;
        }
        Ok(CodebookSample {
            codewords: perm.iter().map(|&i| self.codewords[i].clone()).collect(),
            num_symbols: self.num_symbols,
            seed: self.seed,
        })
    }

    pub fn m_count(&self) -> usize {
        self.codewords.len()
    }

    pub fn k_count(&self) -> usize {
        self.codewords[0].len()
    }

    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Symbol index of codeword `(m, k)`.
    pub fn codeword(&self, m: usize, k: usize) -> usize {
        self.codewords[m][k]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.codewords
    }
}
