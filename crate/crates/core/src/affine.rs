use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;

/// `x ↦ linear·x + translation` with an invertible linear part.
///
/// Equality is exact and componentwise, so two maps are equal iff they act
/// identically on ℝⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    linear: Matrix,
    translation: Vector,
}

impl AffineMap {
    pub fn new(linear: Matrix, translation: Vector) -> Result<Self> {
        if !linear.is_square() {
            return Err(Error::DimensionMismatch {
                expected: linear.rows(),
                found: linear.cols(),
            });
        }
        if translation.len() != linear.rows() {
            return Err(Error::DimensionMismatch {
                expected: linear.rows(),
                found: translation.len(),
            });
        }
        if linear.determinant()?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(AffineMap {
            linear,
            translation,
        })
    }

    /// Skips the invertibility check; callers guarantee it.
    pub(crate) fn from_parts_unchecked(linear: Matrix, translation: Vector) -> Self {
        AffineMap {
            linear,
            translation,
        }
    }

    pub fn identity(n: usize) -> Self {
        AffineMap {
            linear: Matrix::identity(n),
            translation: Vector::zeros(n),
        }
    }

    pub fn translation_by(v: Vector) -> Self {
        AffineMap {
            linear: Matrix::identity(v.len()),
            translation: v,
        }
    }

    pub fn linear_map(linear: Matrix) -> Result<Self> {
        let n = linear.rows();
        Self::new(linear, Vector::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn linear(&self) -> &Matrix {
        &self.linear
    }

    pub fn translation(&self) -> &Vector {
        &self.translation
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.linear.mul_vec(x) + &self.translation
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &AffineMap) -> Result<AffineMap> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            linear: &self.linear * &other.linear,
            translation: &self.linear.mul_vec(&other.translation) + &self.translation,
        }
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        let inv = self.linear.inverse()?;
        let t = -&inv.mul_vec(&self.translation);
        Ok(AffineMap {
            linear: inv,
            translation: t,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_identity() && self.translation.is_zero()
    }

    /// Pure translation by a nonzero vector.
    pub fn is_translation(&self) -> bool {
        self.linear.is_identity() && !self.translation.is_zero()
    }

    pub fn determinant(&self) -> Scalar {
        self.linear.determinant().expect("square by construction")
    }

    /// Canonical byte key; equal maps give equal keys and vice versa.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(64 * (self.dim() + 1) * self.dim());
        self.linear.encode(&mut out);
        for x in self.translation.iter() {
            x.encode(&mut out);
        }
        out
    }

    /// Block map `(x, y) ↦ (self(x), other(y))`.
    pub fn direct_sum(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            linear: self.linear.block_diagonal(&other.linear),
            translation: self.translation.concat(&other.translation),
        }
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x ↦ {}·x + {}", self.linear, self.translation)
    }
}
