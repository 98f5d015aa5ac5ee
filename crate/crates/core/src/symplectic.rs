//! Constant-coefficient antisymmetric forms and lagrangian subspaces.

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::linalg::{span_rank, Matrix, Vector};
use crate::scalar::Scalar;

/// Antisymmetric bilinear form `Ω(u, v) = uᵀΩv`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilinearForm {
    matrix: Matrix,
}

impl BilinearForm {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_antisymmetric() {
            return Err(Error::NotAntisymmetric);
        }
        Ok(BilinearForm { matrix })
    }

    /// `Σ dx_i ∧ dx_j` over the listed index pairs (0-based).
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut m = Matrix::zeros(n, n);
        for &(i, j) in pairs {
            m[(i, j)] = &m[(i, j)] + &Scalar::one();
            m[(j, i)] = &m[(j, i)] - &Scalar::one();
        }
        BilinearForm { matrix: m }
    }

    /// `dx_1∧dx_{n+1} + … + dx_n∧dx_{2n}` on ℝ²ⁿ.
    pub fn canonical(n: usize) -> Self {
        let pairs: Vec<_> = (0..n).map(|i| (i, n + i)).collect();
        Self::from_pairs(2 * n, &pairs)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn eval(&self, u: &Vector, v: &Vector) -> Scalar {
        u.dot(&self.matrix.mul_vec(v))
    }

    pub fn is_symplectic(&self) -> bool {
        self.dim().is_multiple_of(2)
            && !self
                .matrix
                .determinant()
                .map(|d| d.is_zero())
                .unwrap_or(true)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        BilinearForm {
            matrix: self.matrix.scale(s),
        }
    }
}

/// `f*Ω = Lᵀ·Ω·L`; translations act trivially on constant forms.
pub fn pullback_form(f: &AffineMap, form: &BilinearForm) -> Result<BilinearForm> {
    if f.dim() != form.dim() {
        return Err(Error::DimensionMismatch {
            expected: form.dim(),
            found: f.dim(),
        });
    }
    let l = f.linear();
    Ok(BilinearForm {
        matrix: &(&l.transpose() * &form.matrix) * l,
    })
}

/// True iff `span` is a rank-k isotropic subspace of the symplectic ℝ²ᵏ.
///
/// A rank deficit is an error, distinct from a `false` (non-isotropic) answer.
pub fn is_lagrangian(span: &[Vector], form: &BilinearForm) -> Result<bool> {
    if !form.is_symplectic() {
        return Err(Error::NotSymplectic);
    }
    let n = form.dim();
    if let Some(v) = span.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    let rank = span_rank(n, span);
    if rank != n / 2 {
        return Err(Error::WrongRank {
            rank,
            expected: n / 2,
        });
    }
    Ok(span
        .iter()
        .enumerate()
        .all(|(i, u)| span[i + 1..].iter().all(|v| form.eval(u, v).is_zero())))
}

/// True iff `L·v` stays in `span` for every basis vector `v`.
pub fn preserves_span(linear: &Matrix, span: &[Vector]) -> bool {
    let n = linear.rows();
    let r = span_rank(n, span);
    span.iter().all(|v| {
        let mut ext = span.to_vec();
        ext.push(linear.mul_vec(v));
        span_rank(n, &ext) == r
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega0() -> BilinearForm {
        BilinearForm::from_pairs(4, &[(0, 2), (1, 3)])
    }

    fn e(i: usize) -> Vector {
        Vector::unit(4, i)
    }

    #[test]
    fn omega0_matrix() {
        let m = omega0();
        assert!(m.is_symplectic());
        assert_eq!(m.matrix()[(0, 2)], Scalar::one());
        assert_eq!(m.matrix()[(3, 1)], Scalar::int(-1));
        assert_eq!(m.eval(&e(0), &e(2)), Scalar::one());
    }

    #[test]
    fn h2_preserves_omega0() {
        let h2 = AffineMap::new(
            Matrix::from_ints(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, -1, 1]]),
            Vector::from_ints(&[0, 1, 0, 0]),
        )
        .unwrap();
        assert_eq!(pullback_form(&h2, &omega0()).unwrap(), omega0());
    }

    #[test]
    fn pullback_trivial_cases() {
        let w = omega0();
        assert_eq!(pullback_form(&AffineMap::identity(4), &w).unwrap(), w);
        let two = AffineMap::linear_map(Matrix::identity(4).scale(&Scalar::int(2))).unwrap();
        assert_eq!(pullback_form(&two, &w).unwrap(), w.scale(&Scalar::int(4)));
        assert!(pullback_form(&AffineMap::identity(2), &w).is_err());
    }

    #[test]
    fn lagrangian_examples() {
        let w = omega0();
        assert!(is_lagrangian(&[e(0), e(1)], &w).unwrap());
        assert!(!is_lagrangian(&[e(0), e(2)], &w).unwrap());
        assert!(matches!(
            is_lagrangian(&[e(0)], &w),
            Err(Error::WrongRank {
                rank: 1,
                expected: 2
            })
        ));
        assert!(matches!(
            is_lagrangian(&[e(0), e(0)], &w),
            Err(Error::WrongRank {
                rank: 1,
                expected: 2
            })
        ));
    }

    #[test]
    fn rejects_non_antisymmetric() {
        assert!(BilinearForm::new(Matrix::identity(2)).is_err());
        let degenerate = BilinearForm::new(Matrix::zeros(2, 2)).unwrap();
        assert!(matches!(
            is_lagrangian(&[Vector::unit(2, 0)], &degenerate),
            Err(Error::NotSymplectic)
        ));
    }

    #[test]
    fn span_invariance() {
        let l = Matrix::from_ints(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, -1, 1]]);
        assert!(preserves_span(&l, &[e(0), e(1)]));
        assert!(!preserves_span(&l, &[e(2)]));
    }
}
