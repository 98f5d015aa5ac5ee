//! Exact exponential and logarithm between nilpotent elements of `aff(ℝⁿ)` and
//! unipotent affine maps.
//!
//! For `(C, c)` with `C` nilpotent the series terminate:
//! `exp(C, c) = (Σ Cᵏ/k!, (Σ Cᵏ/(k+1)!)·c)`.

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lsa::LsaElement;
use crate::scalar::{factorial, Scalar};

/// `Σ_{k=0}^{n} Cᵏ / (k + shift)!` for nilpotent `C`.
fn shifted_exp_series(c: &Matrix, shift: u64) -> Matrix {
    let n = c.rows();
    let mut acc = Matrix::zeros(n, n);
    let mut power = Matrix::identity(n);
    for k in 0..=n as u64 {
        if power.is_zero() {
            break;
        }
        acc = &acc + &power.scale(&factorial(k + shift).inv());
        power = &power * c;
    }
    acc
}

pub fn exp_nilpotent(x: &LsaElement) -> Result<AffineMap> {
    let c = x.linear();
    if !c.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let linear = shifted_exp_series(c, 0);
    let translation = shifted_exp_series(c, 1).mul_vec(x.translation());
    // unipotent, hence invertible
    Ok(AffineMap::from_parts_unchecked(linear, translation))
}

/// Inverse of [`exp_nilpotent`] on maps whose linear part is unipotent.
pub fn log_unipotent(f: &AffineMap) -> Result<LsaElement> {
    let n = f.dim();
    let nil = f.linear() - &Matrix::identity(n);
    if !nil.is_nilpotent() {
        return Err(Error::NotUnipotent);
    }
    // log(I + N) = Σ (−1)^{k+1} Nᵏ / k
    let mut log = Matrix::zeros(n, n);
    let mut power = nil.clone();
    for k in 1..=n as i64 {
        if power.is_zero() {
            break;
        }
        let coeff = Scalar::ratio(if k % 2 == 1 { 1 } else { -1 }, k);
        log = &log + &power.scale(&coeff);
        power = &power * &nil;
    }
    let series = shifted_exp_series(&log, 1);
    let c = series.solve(f.translation())?.ok_or(Error::Singular)?;
    Ok(LsaElement::new(log, c))
}
