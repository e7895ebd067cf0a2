//! Operator inequality underpinning the square-root decoder's union bound.
//!
//! For `0 ≤ S ≤ I`, `T ≥ 0` and any `c > 0`,
//!
//! ```text
//! I − (S+T)^{−1/2} S (S+T)^{−1/2}  ≤  (1+c)(I−S) + (2+c+c⁻¹)T,
//! ```
//!
//! with the inverse square root taken on the support of `S+T`. The residual
//! is the minimum eigenvalue of the difference (right side minus left side);
//! the theorem guarantees it is nonnegative, so anything below `−1e-9`
//! indicates a numerical bug rather than a counterexample.

use crate::error::{Error, Result};
use crate::linalg::{inv_sqrt_on_support, HermitianOperator, PSD_TOL};

/// Minimum eigenvalue of `(1+c)(I−S) + (2+c+c⁻¹)T − [I − (S+T)^{−1/2}S(S+T)^{−1/2}]`.
pub fn hn_residual(s: &HermitianOperator, t: &HermitianOperator, c: f64) -> Result<f64> {
    if s.dim() != t.dim() {
        return Err(Error::DimMismatch {
            expected: s.dim(),
            actual: t.dim(),
        });
    }
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "trade-off constant c = {c} must be positive and finite"
        )));
    }
    let s_eig = s.eig()?;
    if s_eig.min_eigenvalue() < -PSD_TOL * s_eig.max_abs_eigenvalue().max(1.0) {
        return Err(Error::NotPsd {
            min_eigenvalue: s_eig.min_eigenvalue(),
        });
    }
    if s_eig.max_eigenvalue() > 1.0 + PSD_TOL {
        return Err(Error::InvalidParameter(format!(
            "S must satisfy S ≤ I, largest eigenvalue is {}",
            s_eig.max_eigenvalue()
        )));
    }
    let t_eig = t.eig()?;
    if t_eig.min_eigenvalue() < -PSD_TOL * t_eig.max_abs_eigenvalue().max(1.0) {
        return Err(Error::NotPsd {
            min_eigenvalue: t_eig.min_eigenvalue(),
        });
    }

    let root = inv_sqrt_on_support(&s.add(t)?)?;
    let pinched = HermitianOperator::symmetrized_from(
        root.matrix().mul(s.matrix())?.mul(root.matrix())?,
    );
    let identity = HermitianOperator::identity(s.dim());
    let lhs = identity.sub(&pinched)?;
    let rhs = identity
        .sub(s)?
        .scaled(1.0 + c)
        .add(&t.scaled(2.0 + c + c.recip()))?;
    Ok(rhs.sub(&lhs)?.eig()?.min_eigenvalue())
}
