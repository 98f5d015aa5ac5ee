//! The associative product `(C, c)·(D, d) = (CD, C·d)` on `aff(ℝⁿ)`, rational
//! spans of logarithms of holonomy generators, square-zero elements and the
//! quotient chains they generate.
//!
//! Spans are taken over ℚ even when entries live in ℚ(√d): every scalar is
//! flattened to its two rational coordinates before membership tests.

use crate::error::{Error, Result};
use crate::linalg::{coordinates_in, independent_subset, span_rank, Matrix, Vector};
use crate::par::{self, Execution};
use crate::scalar::Scalar;

/// An element `(C, c)` of `aff(ℝⁿ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LsaElement {
    linear: Matrix,
    translation: Vector,
}

impl LsaElement {
    pub fn new(linear: Matrix, translation: Vector) -> Self {
        assert!(
            linear.is_square() && linear.rows() == translation.len(),
            "LSA element shape"
        );
        LsaElement {
            linear,
            translation,
        }
    }

    pub fn zero(n: usize) -> Self {
        LsaElement {
            linear: Matrix::zeros(n, n),
            translation: Vector::zeros(n),
        }
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

    pub fn is_zero(&self) -> bool {
        self.linear.is_zero() && self.translation.is_zero()
    }

    pub fn add(&self, other: &LsaElement) -> LsaElement {
        LsaElement {
            linear: &self.linear + &other.linear,
            translation: &self.translation + &other.translation,
        }
    }

    pub fn scale(&self, s: &Scalar) -> LsaElement {
        LsaElement {
            linear: self.linear.scale(s),
            translation: self.translation.scale(s),
        }
    }

    /// Rational coordinates: each entry contributes its rational and `√d` parts.
    pub fn flatten(&self) -> Vector {
        let mut out = Vec::with_capacity(2 * self.dim() * (self.dim() + 1));
        for x in self.linear.entries().iter().chain(self.translation.iter()) {
            out.push(Scalar::rational(x.rational_part().clone()));
            out.push(Scalar::rational(x.irrational_part().clone()));
        }
        Vector::new(out)
    }
}

pub fn lsa_product(x: &LsaElement, y: &LsaElement) -> Result<LsaElement> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(LsaElement {
        linear: &x.linear * &y.linear,
        translation: x.linear.mul_vec(&y.translation),
    })
}

/// A finite-dimensional associative algebra over ℚ, realized by
/// representatives in `aff(ℝⁿ)` modulo an accumulated ideal.
///
/// For a subalgebra produced by [`span_closure`] the ideal is empty. Each
/// quotient moves one element into it.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    reps: Vec<LsaElement>,
    ideal: Vec<LsaElement>,
    // constants[i][j] = coordinates of reps[i]·reps[j]
    constants: Vec<Vec<Vector>>,
}

impl AlgebraBasis {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Basis representatives (coset representatives after a quotient).
    pub fn elements(&self) -> &[LsaElement] {
        &self.reps
    }

    /// Elements spanning the ideal that has been quotiented out.
    pub fn ideal(&self) -> &[LsaElement] {
        &self.ideal
    }

    pub fn structure_constants(&self, i: usize, j: usize) -> &Vector {
        &self.constants[i][j]
    }

    pub fn multiply(&self, x: &Vector, y: &Vector) -> Vector {
        let r = self.dim();
        let mut out = Vector::zeros(r);
        for i in (0..r).filter(|&i| !x[i].is_zero()) {
            for j in (0..r).filter(|&j| !y[j].is_zero()) {
                let coeff = &x[i] * &y[j];
                out = &out + &self.constants[i][j].scale(&coeff);
            }
        }
        out
    }

    /// `Σ coords_i · rep_i`.
    pub fn realize(&self, coords: &Vector) -> LsaElement {
        let n = self.reps.first().map_or(0, LsaElement::dim);
        self.reps
            .iter()
            .zip(coords.iter())
            .fold(LsaElement::zero(n), |acc, (b, c)| acc.add(&b.scale(c)))
    }

    /// Rational coordinates of `x` modulo the ideal, if `x` lies in the span.
    pub fn coordinates_of(&self, x: &LsaElement) -> Option<Vector> {
        let cols: Vec<Vector> = self
            .reps
            .iter()
            .chain(&self.ideal)
            .map(LsaElement::flatten)
            .collect();
        let target = x.flatten();
        let sol = coordinates_in(&cols, &target)?;
        Some(sol.slice(0, self.dim()))
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (0..i).all(|j| self.constants[i][j] == self.constants[j][i]))
    }

    /// `(xy)z = x(yz)` on all basis triples.
    pub fn is_associative(&self) -> bool {
        let r = self.dim();
        let e = |i| Vector::unit(r, i);
        (0..r).all(|i| {
            (0..r).all(|j| {
                (0..r).all(|k| {
                    let lhs = self.multiply(&self.constants[i][j], &e(k));
                    let rhs = self.multiply(&e(i), &self.constants[j][k]);
                    lhs == rhs
                })
            })
        })
    }

    /// Matrix of `y ↦ x·y` in the basis.
    pub fn left_regular(&self, x: &Vector) -> Matrix {
        let r = self.dim();
        let cols: Vec<Vector> = (0..r)
            .map(|j| self.multiply(x, &Vector::unit(r, j)))
            .collect();
        Matrix::from_columns(r, &cols)
    }

    /// Re-derives every product of representatives in `aff(ℝⁿ)` and checks the
    /// stored constants reproduce it modulo the ideal.
    pub fn verify_constants(&self) -> bool {
        let r = self.dim();
        let ideal: Vec<Vector> = self.ideal.iter().map(LsaElement::flatten).collect();
        (0..r).all(|i| {
            (0..r).all(|j| {
                let Ok(prod) = lsa_product(&self.reps[i], &self.reps[j]) else {
                    return false;
                };
                let expected = self.realize(&self.constants[i][j]);
                let diff = prod.add(&expected.scale(&Scalar::int(-1))).flatten();
                diff.is_zero() || coordinates_in(&ideal, &diff).is_some()
            })
        })
    }

    /// Whether the line through `x` (coordinates) is a two-sided ideal.
    pub fn is_ideal_line(&self, x: &Vector) -> bool {
        let r = self.dim();
        (0..r).all(|j| {
            let e = Vector::unit(r, j);
            [self.multiply(x, &e), self.multiply(&e, x)]
                .iter()
                .all(|v| span_rank(r, &[x.clone(), v.clone()]) <= 1)
        })
    }
}

#[derive(Clone, Debug)]
pub enum SpanClosure {
    Closed(AlgebraBasis),
    /// `witness = basis[factors.0] · basis[factors.1]` lies outside the ℚ-span.
    NotClosed {
        witness: LsaElement,
        factors: (usize, usize),
    },
}

/// ℚ-span of `gens`, and whether it is stable under the product.
pub fn span_closure(gens: &[LsaElement]) -> Result<SpanClosure> {
    span_closure_with(gens, Execution::default())
}

pub fn span_closure_with(gens: &[LsaElement], exec: Execution) -> Result<SpanClosure> {
    let Some(first) = gens.first() else {
        return Err(Error::NotInSpan);
    };
    let n = first.dim();
    if let Some(g) = gens.iter().find(|g| g.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.dim(),
        });
    }
    let flat: Vec<Vector> = gens.iter().map(LsaElement::flatten).collect();
    let len = flat[0].len();
    let reps: Vec<LsaElement> = independent_subset(len, &flat)
        .into_iter()
        .map(|i| gens[i].clone())
        .collect();
    let basis = AlgebraBasis {
        reps,
        ideal: Vec::new(),
        constants: Vec::new(),
    };
    let r = basis.dim();
    let products = par::map_range(exec, r * r, |k| {
        let (i, j) = (k / r, k % r);
        let p = lsa_product(&basis.reps[i], &basis.reps[j]).expect("equal dimensions");
        let coords = basis.coordinates_of(&p);
        (p, coords)
    });
    let mut constants = vec![Vec::with_capacity(r); r];
    for (k, (p, coords)) in products.into_iter().enumerate() {
        match coords {
            Some(c) => constants[k / r].push(c),
            None => {
                return Ok(SpanClosure::NotClosed {
                    witness: p,
                    factors: (k / r, k % r),
                })
            }
        }
    }
    Ok(SpanClosure::Closed(AlgebraBasis { constants, ..basis }))
}

/// Square-zero element of the algebra, or `None` when its radical vanishes.
///
/// The radical is the kernel of the trace form `(x, y) ↦ tr L_{xy}` together
/// with `tr L_x = 0` (Dickson's criterion in characteristic zero). Each radical
/// basis vector `x` of nilindex `m` yields the square-zero power `x^⌈m/2⌉`;
/// these are followed by the two-sided annihilator basis. The first candidate
/// whose line is an ideal wins, otherwise the first candidate.
pub fn find_square_zero(basis: &AlgebraBasis) -> Option<LsaElement> {
    square_zero_coordinates(basis).map(|c| basis.realize(&c))
}

pub(crate) fn square_zero_coordinates(basis: &AlgebraBasis) -> Option<Vector> {
    let r = basis.dim();
    if r == 0 {
        return None;
    }
    let traces: Vec<Scalar> = (0..r)
        .map(|i| basis.left_regular(&Vector::unit(r, i)).trace())
        .collect();
    let trace_of = |v: &Vector| -> Scalar { v.iter().zip(&traces).map(|(a, t)| a * t).sum() };
    let mut rows: Vec<Vec<Scalar>> = (0..r)
        .map(|j| (0..r).map(|i| trace_of(&basis.constants[i][j])).collect())
        .collect();
    rows.push(traces.clone());
    let radical = Matrix::from_rows(rows).expect("square system").kernel();

    let mut candidates = Vec::new();
    for x in &radical {
        let mut powers = vec![x.clone()];
        while !powers.last().unwrap().is_zero() && powers.len() <= r + 1 {
            let next = basis.multiply(powers.last().unwrap(), x);
            powers.push(next);
        }
        let m = powers.len() - 1; // x^m = 0
        if !powers[m].is_zero() || m == 0 {
            continue;
        }
        let y = powers[m.div_ceil(2) - 1].clone();
        if basis.multiply(&y, &y).is_zero() && !y.is_zero() {
            candidates.push(y);
        }
    }
    candidates.extend(annihilator(basis));
    candidates
        .iter()
        .find(|c| basis.is_ideal_line(c))
        .or(candidates.first())
        .cloned()
}

/// Basis of `{x : x·A = A·x = 0}`.
fn annihilator(basis: &AlgebraBasis) -> Vec<Vector> {
    let r = basis.dim();
    let mut rows = Vec::new();
    for j in 0..r {
        for side in 0..2 {
            // coefficient of x_i in the k-th coordinate of x·e_j or e_j·x
            for k in 0..r {
                rows.push(
                    (0..r)
                        .map(|i| {
                            let c = if side == 0 {
                                &basis.constants[i][j]
                            } else {
                                &basis.constants[j][i]
                            };
                            c[k].clone()
                        })
                        .collect(),
                );
            }
        }
    }
    if rows.is_empty() {
        return Vec::new();
    }
    Matrix::from_rows(rows).expect("rectangular").kernel()
}

/// `basis / ℚx`, for a nonzero square-zero `x` spanning an ideal line.
pub fn quotient_algebra(basis: &AlgebraBasis, x: &LsaElement) -> Result<AlgebraBasis> {
    let coords = basis.coordinates_of(x).ok_or(Error::NotInSpan)?;
    if coords.is_zero() {
        return Err(Error::NotInSpan);
    }
    if !basis.multiply(&coords, &coords).is_zero() {
        return Err(Error::NotSquareZero);
    }
    if !basis.is_ideal_line(&coords) {
        return Err(Error::NotIdeal);
    }
    let r = basis.dim();
    let p = (0..r).find(|&i| !coords[i].is_zero()).expect("nonzero");
    let keep: Vec<usize> = (0..r).filter(|&i| i != p).collect();
    let reduce = |w: &Vector| -> Vector {
        let f = &w[p] / &coords[p];
        let w = w - &coords.scale(&f);
        Vector::new(keep.iter().map(|&i| w[i].clone()).collect())
    };
    let constants = keep
        .iter()
        .map(|&i| {
            keep.iter()
                .map(|&j| reduce(&basis.constants[i][j]))
                .collect()
        })
        .collect();
    let mut ideal = basis.ideal.clone();
    ideal.push(x.clone());
    let q = AlgebraBasis {
        reps: keep.iter().map(|&i| basis.reps[i].clone()).collect(),
        ideal,
        constants,
    };
    if !q.verify_constants() {
        return Err(Error::NotClosed);
    }
    Ok(q)
}

/// Iterated quotients by square-zero ideal lines until dimension 2.
/// The returned chain starts with the closed span of `gens`.
pub fn reduction_chain(gens: &[LsaElement]) -> Result<Vec<AlgebraBasis>> {
    let start = match span_closure(gens)? {
        SpanClosure::Closed(b) => b,
        SpanClosure::NotClosed { .. } => return Err(Error::NotClosed),
    };
    let mut chain = vec![start];
    while chain.last().unwrap().dim() > 2 {
        let current = chain.last().unwrap();
        let x = find_square_zero(current).ok_or(Error::NoSquareZero {
            stage: chain.len() - 1,
            dimension: current.dim(),
        })?;
        let next = quotient_algebra(current, &x)?;
        chain.push(next);
    }
    Ok(chain)
}
