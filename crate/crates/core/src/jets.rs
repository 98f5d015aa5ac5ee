//! Jets at the origin of polynomial functions without constant term, as a
//! module over a linear group acting by `f ↦ f∘T⁻¹`.

use std::collections::{BTreeMap, HashMap};

use crate::cohomology::LinearAction;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{binomial, Scalar};

type Exponent = Vec<u32>;
type Polynomial = BTreeMap<Exponent, Scalar>;

/// Monomials `x^α` with `1 ≤ |α| ≤ degree` in `vars` variables, ordered by
/// total degree, then lexicographically with higher powers of earlier
/// variables first. The first `vars` monomials are `x₁, …, x_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetModule {
    vars: usize,
    degree: usize,
    monomials: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

fn exponents_of_degree(vars: usize, degree: u32, out: &mut Vec<Exponent>) {
    fn go(prefix: &mut Exponent, vars: usize, left: u32, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == vars {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            go(prefix, vars, left - e, out);
            prefix.pop();
        }
    }
    if vars > 0 {
        go(&mut Vec::with_capacity(vars), vars, degree, out);
    }
}

impl JetModule {
    pub fn new(vars: usize, degree: usize) -> Self {
        let mut monomials = Vec::new();
        for d in 1..=degree as u32 {
            exponents_of_degree(vars, d, &mut monomials);
        }
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        JetModule {
            vars,
            degree,
            monomials,
            index,
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `C(n + k, k) − 1`.
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn index_of(&self, exponent: &[u32]) -> Option<usize> {
        self.index.get(exponent).copied()
    }

    /// Matrix of `f ↦ f∘S` in the monomial basis, for `S` linear.
    pub fn substitution_matrix(&self, s: &Matrix) -> Result<Matrix> {
        if s.rows() != self.vars || s.cols() != self.vars {
            return Err(Error::DimensionMismatch {
                expected: self.vars,
                found: s.rows(),
            });
        }
        // (S x)_i as a polynomial, and its powers up to `degree`
        let mut powers: Vec<Vec<Polynomial>> = Vec::with_capacity(self.vars);
        for i in 0..self.vars {
            let mut form = Polynomial::new();
            for j in 0..self.vars {
                if !s[(i, j)].is_zero() {
                    let mut e = vec![0; self.vars];
                    e[j] = 1;
                    form.insert(e, s[(i, j)].clone());
                }
            }
            let mut list = vec![Polynomial::from([(vec![0; self.vars], Scalar::one())])];
            for _ in 0..self.degree {
                let next = multiply(list.last().expect("nonempty"), &form);
                list.push(next);
            }
            powers.push(list);
        }
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for (col, alpha) in self.monomials.iter().enumerate() {
            let image = alpha.iter().enumerate().fold(
                Polynomial::from([(vec![0; self.vars], Scalar::one())]),
                |acc, (i, &a)| multiply(&acc, &powers[i][a as usize]),
            );
            for (beta, coeff) in image {
                // substitution by a linear map preserves degree
                let row = self.index[&beta];
                m[(row, col)] = coeff;
            }
        }
        Ok(m)
    }
}

fn multiply(p: &Polynomial, q: &Polynomial) -> Polynomial {
    let mut out = Polynomial::new();
    for (a, x) in p {
        for (b, y) in q {
            let e: Exponent = a.iter().zip(b).map(|(i, j)| i + j).collect();
            let entry = out.entry(e).or_insert_with(Scalar::zero);
            *entry += &(x * y);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Jets of degree `≤ degree` acted on by `γ ↦ (f ↦ f∘T(γ)⁻¹)`.
pub fn jet_action(transverse: &LinearAction, degree: usize) -> Result<(JetModule, LinearAction)> {
    let module = JetModule::new(transverse.dim(), degree);
    let mats = transverse
        .matrices()
        .iter()
        .map(|t| module.substitution_matrix(&t.inverse()?))
        .collect::<Result<Vec<_>>>()?;
    let action = LinearAction::new(module.dim(), mats)?;
    Ok((module, action))
}

/// `C(vars + degree, degree) − 1`.
pub fn jet_dimension(vars: usize, degree: usize) -> Scalar {
    &binomial((vars + degree) as u64, degree as u64) - &Scalar::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_order() {
        let j = JetModule::new(2, 2);
        assert_eq!(
            j.monomials(),
            &[vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        for (n, k) in [(1, 4), (2, 3), (4, 3), (3, 1)] {
            assert_eq!(
                Scalar::int(JetModule::new(n, k).dim() as i64),
                jet_dimension(n, k)
            );
        }
    }

    #[test]
    fn degree_one_block_is_transpose_inverse() {
        let t = Matrix::from_ints(&[&[2, 1], &[1, 1]]);
        let action = LinearAction::new(2, vec![t.clone()]).unwrap();
        let (module, jets) = jet_action(&action, 3).unwrap();
        let m = &jets.matrices()[0];
        let expected = t.inverse().unwrap().transpose();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m[(i, j)], expected[(i, j)]);
            }
        }
        // block lower triangular by degree, in fact block diagonal
        for i in 0..2 {
            for j in 2..module.dim() {
                assert!(m[(i, j)].is_zero());
                assert!(m[(j, i)].is_zero());
            }
        }
    }

    #[test]
    fn substitution_of_square() {
        // (x + y)² under x ↦ x + y
        let j = JetModule::new(2, 2);
        let s = Matrix::from_ints(&[&[1, 1], &[0, 1]]);
        let m = j.substitution_matrix(&s).unwrap();
        let x2 = j.index_of(&[2, 0]).unwrap();
        let col = m.column(x2);
        assert_eq!(col[j.index_of(&[2, 0]).unwrap()], Scalar::one());
        assert_eq!(col[j.index_of(&[1, 1]).unwrap()], Scalar::int(2));
        assert_eq!(col[j.index_of(&[0, 2]).unwrap()], Scalar::one());
    }

    #[test]
    fn action_is_a_homomorphism() {
        let a = Matrix::from_ints(&[&[2, 1], &[1, 1]]);
        let b = Matrix::from_ints(&[&[1, 3], &[0, 1]]);
        let j = JetModule::new(2, 3);
        let rho = |t: &Matrix| j.substitution_matrix(&t.inverse().unwrap()).unwrap();
        assert_eq!(rho(&(&a * &b)), &rho(&a) * &rho(&b));
    }
}
