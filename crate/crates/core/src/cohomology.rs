//! First cohomology of a finitely presented group with coefficients in a
//! finite-dimensional linear module.
//!
//! Convention throughout: `c(uv) = c(u) + ρ(u)·c(v)`, hence
//! `c(g⁻¹) = −ρ(g)⁻¹·c(g)`. A cocycle is determined by its generator values,
//! and those values define a cocycle iff every relator expands to zero.

use crate::error::{Error, Result};
use crate::holonomy::{
    contragredient, duality_check, first_duality_failure, first_violated_relator,
};
use crate::holonomy::{Presentation, Representation, Word};
use crate::jets::{jet_action, JetModule};
use crate::linalg::{coordinates_in, independent_subset, Matrix, Vector};
use crate::par::{self, Execution};
use crate::scalar::Scalar;

/// Generators acting by invertible matrices on `K^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearAction {
    dim: usize,
    matrices: Vec<Matrix>,
    inverses: Vec<Matrix>,
}

impl LinearAction {
    pub fn new(dim: usize, matrices: Vec<Matrix>) -> Result<Self> {
        let mut inverses = Vec::with_capacity(matrices.len());
        for m in &matrices {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.rows(),
                });
            }
            inverses.push(m.inverse()?);
        }
        Ok(LinearAction {
            dim,
            matrices,
            inverses,
        })
    }

    pub fn trivial(rank: usize, dim: usize) -> Self {
        LinearAction {
            dim,
            matrices: vec![Matrix::identity(dim); rank],
            inverses: vec![Matrix::identity(dim); rank],
        }
    }

    /// The linear holonomy of an affine representation.
    pub fn linear_parts(rep: &Representation) -> Self {
        let matrices = rep.linear_parts();
        let inverses = matrices
            .iter()
            .map(|m| m.inverse().expect("invertible"))
            .collect();
        LinearAction {
            dim: rep.dim(),
            matrices,
            inverses,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn matrix(&self, g: usize) -> Result<&Matrix> {
        self.matrices.get(g).ok_or(Error::GeneratorIndex(g))
    }

    pub fn act_word(&self, w: &Word) -> Result<Matrix> {
        let mut acc = Matrix::identity(self.dim);
        for l in w.letters() {
            let m = if l.inverse {
                self.inverses.get(l.generator)
            } else {
                self.matrices.get(l.generator)
            };
            acc = &acc * m.ok_or(Error::GeneratorIndex(l.generator))?;
        }
        Ok(acc)
    }

    /// Errors with the first relator that does not act as the identity.
    pub fn check_relators(&self, p: &Presentation) -> Result<()> {
        if p.rank() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: p.rank(),
                found: self.rank(),
            });
        }
        for (i, r) in p.relators().iter().enumerate() {
            if !self.act_word(r)?.is_identity() {
                return Err(Error::RelatorViolation {
                    index: i,
                    relator: r.display(p.generators()),
                });
            }
        }
        Ok(())
    }
}

/// Generator values of a 1-cochain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cocycle {
    values: Vec<Vector>,
}

impl Cocycle {
    pub fn new(values: Vec<Vector>) -> Self {
        Cocycle { values }
    }

    pub fn zero(rank: usize, dim: usize) -> Self {
        Cocycle {
            values: vec![Vector::zeros(dim); rank],
        }
    }

    pub fn values(&self) -> &[Vector] {
        &self.values
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    /// Concatenated generator values.
    pub fn flatten(&self) -> Vector {
        Vector::new(self.values.iter().flat_map(|v| v.iter().cloned()).collect())
    }

    pub fn unflatten(v: &Vector, rank: usize, dim: usize) -> Self {
        Cocycle {
            values: (0..rank).map(|i| v.slice(i * dim, (i + 1) * dim)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Vector::is_zero)
    }

    fn check_shape(&self, action: &LinearAction) -> Result<()> {
        if self.rank() != action.rank() {
            return Err(Error::DimensionMismatch {
                expected: action.rank(),
                found: self.rank(),
            });
        }
        if let Some(v) = self.values.iter().find(|v| v.len() != action.dim) {
            return Err(Error::DimensionMismatch {
                expected: action.dim,
                found: v.len(),
            });
        }
        Ok(())
    }
}

/// `c(w)` by letter-by-letter expansion of the cocycle law.
pub fn evaluate_cocycle(action: &LinearAction, c: &Cocycle, w: &Word) -> Result<Vector> {
    c.check_shape(action)?;
    let mut prefix = Matrix::identity(action.dim);
    let mut acc = Vector::zeros(action.dim);
    for l in w.letters() {
        let g = l.generator;
        let value = c.values.get(g).ok_or(Error::GeneratorIndex(g))?;
        if l.inverse {
            let inv = &action.inverses[g];
            acc = &acc - &(&prefix * inv).mul_vec(value);
            prefix = &prefix * inv;
        } else {
            acc = &acc + &prefix.mul_vec(value);
            prefix = &prefix * &action.matrices[g];
        }
    }
    Ok(acc)
}

pub fn is_cocycle(p: &Presentation, action: &LinearAction, c: &Cocycle) -> Result<bool> {
    for r in p.relators() {
        if !evaluate_cocycle(action, c, r)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Fox-derivative block row of one relator: `c(r) = Σ_g (∂r/∂g)·c(g)`.
fn relator_block(action: &LinearAction, r: &Word) -> Matrix {
    let (m, k) = (action.dim, action.rank());
    let mut blocks = vec![Matrix::zeros(m, m); k];
    let mut prefix = Matrix::identity(m);
    for l in r.letters() {
        let g = l.generator;
        if l.inverse {
            prefix = &prefix * &action.inverses[g];
            blocks[g] = &blocks[g] - &prefix;
        } else {
            blocks[g] = &blocks[g] + &prefix;
            prefix = &prefix * &action.matrices[g];
        }
    }
    blocks.iter().skip(1).fold(blocks[0].clone(), |acc, b| {
        acc.hstack(b).expect("equal rows")
    })
}

/// Stacked constraint matrix whose kernel is `Z¹`; columns follow
/// [`Cocycle::flatten`].
pub fn cocycle_constraints(p: &Presentation, action: &LinearAction, exec: Execution) -> Matrix {
    let cols = action.rank() * action.dim;
    if action.rank() == 0 {
        return Matrix::zeros(0, 0);
    }
    par::map(exec, p.relators(), |r| relator_block(action, r))
        .into_iter()
        .fold(Matrix::zeros(0, cols), |acc, b| {
            acc.vstack(&b).expect("equal columns")
        })
}

/// Basis of `Z¹(π, K^m)`.
pub fn cocycle_space(p: &Presentation, action: &LinearAction) -> Result<Vec<Cocycle>> {
    cocycle_space_with(p, action, Execution::default())
}

pub fn cocycle_space_with(
    p: &Presentation,
    action: &LinearAction,
    exec: Execution,
) -> Result<Vec<Cocycle>> {
    action.check_relators(p)?;
    let (k, m) = (action.rank(), action.dim);
    if k * m == 0 {
        return Ok(Vec::new());
    }
    let a = cocycle_constraints(p, action, exec);
    let basis = if a.rows() == 0 {
        (0..k * m).map(|i| Vector::unit(k * m, i)).collect()
    } else {
        a.kernel()
    };
    Ok(basis.iter().map(|v| Cocycle::unflatten(v, k, m)).collect())
}

/// `δ: m ↦ (ρ(g_i)m − m)_i` as a `(k·m) × m` matrix.
fn coboundary_matrix(action: &LinearAction) -> Matrix {
    let m = action.dim;
    let id = Matrix::identity(m);
    action.matrices.iter().fold(Matrix::zeros(0, m), |acc, g| {
        acc.vstack(&(g - &id)).expect("equal columns")
    })
}

/// Basis of `B¹ = {γ ↦ ρ(γ)m − m}`.
pub fn coboundary_space(action: &LinearAction) -> Vec<Cocycle> {
    let (k, m) = (action.rank(), action.dim);
    if k * m == 0 {
        return Vec::new();
    }
    let d = coboundary_matrix(action);
    let cols: Vec<Vector> = (0..m).map(|j| d.column(j)).collect();
    independent_subset(k * m, &cols)
        .into_iter()
        .map(|j| Cocycle::unflatten(&cols[j], k, m))
        .collect()
}

/// `Z¹`, `B¹` and a basis of cocycles representing `H¹ = Z¹/B¹`.
#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub cocycles: Vec<Cocycle>,
    pub coboundaries: Vec<Cocycle>,
    /// Cocycles completing `coboundaries` to a basis of `Z¹`.
    pub classes: Vec<Cocycle>,
    rank: usize,
    dim: usize,
}

impl CohomologyReport {
    pub fn dim_z(&self) -> usize {
        self.cocycles.len()
    }

    pub fn dim_b(&self) -> usize {
        self.coboundaries.len()
    }

    pub fn dim_h(&self) -> usize {
        self.classes.len()
    }

    /// Coordinates of `[c]` on [`Self::classes`], or `None` if `c ∉ Z¹`.
    pub fn class_of(&self, c: &Cocycle) -> Option<Vector> {
        let total = self.rank * self.dim;
        if total == 0 {
            return Some(Vector::zeros(0));
        }
        let basis: Vec<Vector> = self
            .coboundaries
            .iter()
            .chain(&self.classes)
            .map(Cocycle::flatten)
            .collect();
        let coords = coordinates_in(&basis, &c.flatten())?;
        Some(coords.slice(self.dim_b(), coords.len()))
    }

    pub fn is_coboundary(&self, c: &Cocycle) -> bool {
        self.class_of(c).is_some_and(|v| v.is_zero())
    }
}

pub fn h1(p: &Presentation, action: &LinearAction) -> Result<CohomologyReport> {
    h1_with(p, action, Execution::default())
}

pub fn h1_with(
    p: &Presentation,
    action: &LinearAction,
    exec: Execution,
) -> Result<CohomologyReport> {
    let cocycles = cocycle_space_with(p, action, exec)?;
    let coboundaries = coboundary_space(action);
    let total = action.rank() * action.dim;
    let mut spanning: Vec<Vector> = coboundaries.iter().map(Cocycle::flatten).collect();
    spanning.extend(cocycles.iter().map(Cocycle::flatten));
    let chosen = independent_subset(total, &spanning);
    let classes = chosen
        .into_iter()
        .filter(|&i| i >= coboundaries.len())
        .map(|i| cocycles[i - coboundaries.len()].clone())
        .collect();
    Ok(CohomologyReport {
        cocycles,
        coboundaries,
        classes,
        rank: action.rank(),
        dim: action.dim,
    })
}

/// The translation cocycle `γ ↦ ρ(γ)(0)` over the linear holonomy.
#[derive(Clone, Debug)]
pub struct RadianceClass {
    pub cocycle: Cocycle,
    /// Coordinates of the class in the basis of [`CohomologyReport::classes`].
    pub class: Vector,
    pub is_radiant: bool,
    /// A common fixed point when radiant.
    pub fixed_point: Option<Vector>,
}

pub fn radiance_obstruction(p: &Presentation, rep: &Representation) -> Result<RadianceClass> {
    if let Some(i) = first_violated_relator(p, rep)? {
        return Err(Error::RelatorViolation {
            index: i,
            relator: p.relators()[i].display(p.generators()),
        });
    }
    let action = LinearAction::linear_parts(rep);
    let cocycle = Cocycle::new(
        rep.images()
            .iter()
            .map(|f| f.translation().clone())
            .collect(),
    );
    let report = h1(p, &action)?;
    let class = report.class_of(&cocycle).ok_or(Error::InvalidCocycle)?;
    // radiant iff c = δm for some m; the fixed point is then −m
    let fixed_point = if rep.rank() == 0 {
        Some(Vector::zeros(rep.dim()))
    } else {
        coboundary_matrix(&action)
            .solve(&cocycle.flatten())?
            .map(|m| -&m)
    };
    Ok(RadianceClass {
        is_radiant: fixed_point.is_some(),
        cocycle,
        class,
        fixed_point,
    })
}

/// Degree-one truncation `d₀*` of a jet cocycle.
pub fn d0_star(
    p: &Presentation,
    module: &JetModule,
    action: &LinearAction,
    c: &Cocycle,
) -> Result<Cocycle> {
    if action.dim != module.dim() {
        return Err(Error::DimensionMismatch {
            expected: module.dim(),
            found: action.dim,
        });
    }
    c.check_shape(action)?;
    if !is_cocycle(p, action, c)? {
        return Err(Error::InvalidCocycle);
    }
    let n = module.vars();
    Ok(Cocycle::new(
        c.values.iter().map(|v| v.slice(0, n)).collect(),
    ))
}

/// Inclusion of a degree-one cochain into the jet module.
pub fn include_degree_one(module: &JetModule, c: &Cocycle) -> Cocycle {
    let pad = Vector::zeros(module.dim() - module.vars());
    Cocycle::new(c.values.iter().map(|v| v.concat(&pad)).collect())
}

/// The affine subspace `d₀*⁻¹[target] ⊂ H¹(π, J^k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GermFiber {
    Empty,
    Fiber {
        dimension: usize,
        /// A jet cocycle in the fiber.
        representative: Cocycle,
    },
}

/// Germ classes with the transverse holonomy dual to the linear holonomy of
/// `rep` and the radiance class of `rep` as target.
pub fn classify_germs(p: &Presentation, rep: &Representation, degree: usize) -> Result<GermFiber> {
    let transverse = contragredient(rep)?;
    classify_germs_with(p, rep, &transverse, degree, None)
}

/// Solves `d₀*[z] = [target]` in `H¹(π, J^k)`, the jets acted on through
/// `f ↦ f∘T(γ)⁻¹`. `target` defaults to the radiance cocycle of `rep` and is
/// compared modulo degree-one coboundaries.
pub fn classify_germs_with(
    p: &Presentation,
    rep: &Representation,
    transverse: &Representation,
    degree: usize,
    target: Option<&Cocycle>,
) -> Result<GermFiber> {
    if let Some(i) = first_violated_relator(p, rep)? {
        return Err(Error::RelatorViolation {
            index: i,
            relator: p.relators()[i].display(p.generators()),
        });
    }
    if !duality_check(rep, transverse)? {
        let i = first_duality_failure(rep, transverse).unwrap_or(0);
        return Err(Error::InconsistentDuality(i));
    }
    let t_action = LinearAction::linear_parts(transverse);
    let (module, jets) = jet_action(&t_action, degree)?;
    let lin = LinearAction::linear_parts(rep);
    let default_target;
    let target = match target {
        Some(t) => t,
        None => {
            default_target = Cocycle::new(
                rep.images()
                    .iter()
                    .map(|f| f.translation().clone())
                    .collect(),
            );
            &default_target
        }
    };
    target.check_shape(&lin)?;

    let (k, n, big) = (p.rank(), module.vars(), module.dim());
    if k == 0 {
        return Ok(GermFiber::Fiber {
            dimension: 0,
            representative: Cocycle::zero(0, big),
        });
    }
    // unknowns: z ∈ K^{k·big}, m ∈ K^n
    let cols = k * big + n;
    let fox = cocycle_constraints(p, &jets, Execution::default());
    let mut a = Matrix::zeros(fox.rows() + k * n, cols);
    for i in 0..fox.rows() {
        for j in 0..fox.cols() {
            a[(i, j)] = fox[(i, j)].clone();
        }
    }
    let id = Matrix::identity(n);
    for g in 0..k {
        let delta = lin.matrix(g)? - &id;
        for r in 0..n {
            let row = fox.rows() + g * n + r;
            a[(row, g * big + r)] = Scalar::one();
            for c in 0..n {
                a[(row, k * big + c)] = -&delta[(r, c)];
            }
        }
    }
    let rhs = Vector::zeros(fox.rows()).concat(&target.flatten());
    let Some(sol) = a.solve(&rhs)? else {
        return Ok(GermFiber::Empty);
    };
    let representative = Cocycle::unflatten(&sol.slice(0, k * big), k, big);

    let dim_solutions = a.kernel().len();
    let dim_delta_kernel = n - coboundary_matrix(&lin).rank();
    let dim_jet_coboundaries = coboundary_space(&jets).len();
    let dimension = dim_solutions - dim_delta_kernel - dim_jet_coboundaries;
    Ok(GermFiber::Fiber {
        dimension,
        representative,
    })
}

/// A polynomial `a₀ + a₁t + … + a_k t^k` in the fiber coordinate.
pub type FiberJet = Vec<Scalar>;

/// Matrix of `f(t) ↦ f(t + shift)` on coefficient vectors of length `len`.
pub fn fiber_translation(len: usize, shift: &Scalar) -> Matrix {
    let mut m = Matrix::zeros(len, len);
    for i in 0..len {
        let mut power = Scalar::one();
        for j in (0..=i).rev() {
            // coefficient of t^j in (t + s)^i is C(i, j)·s^{i−j}
            m[(j, i)] = &crate::scalar::binomial(i as u64, j as u64) * &power;
            power = &power * shift;
        }
    }
    m
}

/// Data of one storey of a tower of circle bundles.
#[derive(Clone, Debug)]
pub struct TowerStorey<'a> {
    pub upper: &'a Presentation,
    /// Image of each upper generator as a word in the lower group.
    pub projection: &'a [Word],
    pub lower_action: &'a LinearAction,
    pub c1: &'a Cocycle,
    /// Fiber component `d₂`, a homomorphism to the fiber translations.
    pub d2: &'a [Scalar],
    pub f2: &'a [FiberJet],
}

/// Checks that `c₂ = c₁∘proj + f₂` is a cocycle for the upper group acting by
/// `ρ₁(proj γ)` on the base part and by `f ↦ f(t + d₂(γ))` on fiber jets.
/// This is `f₂(γγ') = f₂(γ) + f₂(γ')∘d₂(γ)` with `∘d₂(γ)` read as translation
/// of the fiber coordinate.
pub fn tower_check(s: &TowerStorey<'_>) -> Result<bool> {
    let k = s.upper.rank();
    for (len, what) in [(s.projection.len(), k), (s.d2.len(), k), (s.f2.len(), k)] {
        if len != what {
            return Err(Error::DimensionMismatch {
                expected: what,
                found: len,
            });
        }
    }
    let jet_len = s.f2.first().map_or(1, Vec::len);
    if let Some(f) = s.f2.iter().find(|f| f.len() != jet_len) {
        return Err(Error::DimensionMismatch {
            expected: jet_len,
            found: f.len(),
        });
    }
    s.c1.check_shape(s.lower_action)?;
    // d₂ must be additive on relators
    for r in s.upper.relators() {
        let total: Scalar = r
            .letters()
            .iter()
            .map(|l| {
                if l.inverse {
                    -&s.d2[l.generator]
                } else {
                    s.d2[l.generator].clone()
                }
            })
            .sum();
        if !total.is_zero() {
            return Ok(false);
        }
    }
    let m = s.lower_action.dim();
    let mut mats = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    for g in 0..k {
        let w = &s.projection[g];
        let base = s.lower_action.act_word(w)?;
        mats.push(base.block_diagonal(&fiber_translation(jet_len, &s.d2[g])));
        let c1 = evaluate_cocycle(s.lower_action, s.c1, w)?;
        values.push(c1.concat(&Vector::new(s.f2[g].clone())));
    }
    let action = LinearAction::new(m + jet_len, mats)?;
    is_cocycle(s.upper, &action, &Cocycle::new(values))
}
