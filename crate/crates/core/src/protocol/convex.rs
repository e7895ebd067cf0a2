//! Convex splitting over a classical register.
//!
//! From a cq state `ρ_AB = Σ_a p_a |a⟩⟨a| ⊗ ρ_B^a`, the K-fold convex split
//! places the correlated pair at a uniformly random position among K
//! otherwise-independent copies of `ρ_A`. Everything stays classical on
//! `A₁…A_K`, so the state is stored as a map from length-K symbol strings to
//! weighted `d_B×d_B` blocks `W_s = p(s)·(1/K)Σ_j ρ_B^{s_j}` — never as a
//! dense matrix on the exponentially large joint space. Fidelity to the
//! product reference `ρ_A^⊗K ⊗ ρ_B` is then a weighted sum of per-string
//! root fidelities.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{root_fidelity, CMatrix, HermitianOperator};
use crate::states::CqState;

/// Largest admissible number of classical strings `|A|^K`.
pub const MAX_SPLIT_STRINGS: u64 = 1 << 20;

/// K-fold convex split of a cq state, in block-sparse form. Strings of zero
/// probability are omitted.
#[derive(Debug, Clone)]
pub struct ConvexSplitState {
    k: usize,
    num_symbols: usize,
    block_dim: usize,
    blocks: BTreeMap<Vec<usize>, HermitianOperator>,
}

impl ConvexSplitState {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    /// Weighted blocks `W_s` keyed by the classical string `s`; `Tr W_s`
    /// is the probability of `s`.
    pub fn blocks(&self) -> &BTreeMap<Vec<usize>, HermitianOperator> {
        &self.blocks
    }

    /// Total probability mass; 1 up to rounding.
    pub fn total_weight(&self) -> f64 {
        self.blocks.values().map(HermitianOperator::trace).sum()
    }

    /// Weighted marginal blocks on `(A_position, B)`: entry `a` is
    /// `Σ_{s: s[position]=a} W_s`.
    pub fn marginal_ab(&self, position: usize) -> Result<Vec<HermitianOperator>> {
        if position >= self.k {
            return Err(Error::InvalidParameter(format!(
                "position {position} outside 0..{}",
                self.k
            )));
        }
        let mut out = vec![CMatrix::zeros(self.block_dim); self.num_symbols];
        for (s, w) in &self.blocks {
            out[s[position]].add_scaled_assign(w.matrix(), 1.0)?;
        }
        Ok(out
            .into_iter()
            .map(HermitianOperator::symmetrized_from)
            .collect())
    }

    /// Root fidelity `Σ_s Tr√(√W_s (p(s)ρ_B) √W_s)` to the blockwise product
    /// reference with B-marginal `rho_b` (a weighted operator of trace 1).
    pub fn root_fidelity_to_product(&self, rho_b: &HermitianOperator) -> Result<f64> {
        if rho_b.dim() != self.block_dim {
            return Err(Error::DimMismatch {
                expected: self.block_dim,
                actual: rho_b.dim(),
            });
        }
        let mut acc = 0.0;
        for w in self.blocks.values() {
            acc += root_fidelity(w, &rho_b.scaled(w.trace()))?;
        }
        Ok(acc)
    }
}

fn guard_strings(num_symbols: usize, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "convex split needs at least one position".into(),
        ));
    }
    let count = (num_symbols as u64)
        .checked_pow(k as u32)
        .unwrap_or(u64::MAX);
    if count > MAX_SPLIT_STRINGS {
        return Err(Error::ResourceLimit(format!(
            "convex split would enumerate {num_symbols}^{k} classical strings \
             (limit {MAX_SPLIT_STRINGS})"
        )));
    }
    Ok(())
}

/// Build the K-fold convex split of `rho_ab`.
pub fn convex_split_state(rho_ab: &CqState, k: usize) -> Result<ConvexSplitState> {
    guard_strings(rho_ab.num_symbols(), k)?;
    let p = rho_ab.p_x();
    let dim = rho_ab.block_dim();
    let n = rho_ab.num_symbols();
    let mut blocks = BTreeMap::new();
    let mut s = vec![0usize; k];
    loop {
        let weight: f64 = s.iter().map(|&i| p[i]).product();
        if weight > 0.0 {
            let mut avg = CMatrix::zeros(dim);
            for &i in &s {
                avg.add_scaled_assign(rho_ab.block(i).matrix(), 1.0 / k as f64)?;
            }
            blocks.insert(
                s.clone(),
                HermitianOperator::symmetrized_from(avg.scaled(weight)),
            );
        }
        // Odometer increment over the length-K strings.
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(ConvexSplitState {
                    k,
                    num_symbols: n,
                    block_dim: dim,
                    blocks,
                });
            }
            s[pos - 1] += 1;
            if s[pos - 1] < n {
                break;
            }
            s[pos - 1] = 0;
            pos -= 1;
        }
    }
}

/// Fidelity `F(τ, ρ_A^⊗K ⊗ ρ_B)` between the K-fold convex split of `rho_ab`
/// and the fully product reference, computed blockwise.
pub fn convex_split_fidelity(rho_ab: &CqState, k: usize) -> Result<f64> {
    let split = convex_split_state(rho_ab, k)?;
    let rho_b = rho_ab.average_state();
    let root = split.root_fidelity_to_product(rho_b.op())?;
    Ok(root * root)
}
