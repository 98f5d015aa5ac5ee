//! Built-in examples: flat tori, the nilpotent and half-compact symplectic
//! structures on `T⁴`, and an irrational lattice in the simply transitive
//! group `{f_{s,t}}` on the plane.

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::holonomy::{Presentation, Representation};
use crate::linalg::{Matrix, Vector};
use crate::manifest::{Expectation, Manifest, TowerSpec};
use crate::scalar::Scalar;
use crate::symplectic::BilinearForm;

pub const EXAMPLES: &[&str] = &[
    "flat_T2",
    "flat_T4",
    "nilpotent_T4",
    "half_compact_T4",
    "hgroup_torus",
];

/// Checks every example is expected to pass unless overridden.
const COMMON: &[&str] = &[
    "verify",
    "growth",
    "unimodular",
    "translation",
    "rationality",
    "reduce",
    "cohomology",
    "radiance",
    "classify",
    "duality",
];

fn map(linear: &[&[i64]], translation: &[i64]) -> AffineMap {
    AffineMap::new(Matrix::from_ints(linear), Vector::from_ints(translation)).expect("invertible")
}

/// `dx₁∧dx₃ + dx₂∧dx₄`.
pub fn omega0() -> BilinearForm {
    BilinearForm::from_pairs(4, &[(0, 2), (1, 3)])
}

fn declare(mut m: Manifest, extra: &[(&str, Expectation)]) -> Manifest {
    for c in COMMON {
        m = m.expecting(c, Expectation::Pass);
    }
    for (c, e) in extra {
        m = m.expecting(c, *e);
    }
    m
}

fn span(n: usize, axes: &[usize]) -> Vec<Vector> {
    axes.iter().map(|&i| Vector::unit(n, i)).collect()
}

fn lattice(name: &str, k: usize) -> Result<Manifest> {
    let p = Presentation::free_abelian(k);
    let rep = Representation::new(
        k,
        (0..k)
            .map(|i| AffineMap::translation_by(Vector::unit(k, i)))
            .collect(),
    )?;
    Manifest::new(name, 1, p, rep)
}

pub fn flat_t2() -> Manifest {
    let m = lattice("flat_T2", 2)
        .and_then(|m| m.with_form(BilinearForm::canonical(1)))
        .and_then(|m| m.with_span(span(2, &[0])))
        .expect("valid");
    declare(m, &[])
}

pub fn flat_t4() -> Manifest {
    let m = lattice("flat_T4", 4)
        .and_then(|m| m.with_form(omega0()))
        .and_then(|m| m.with_span(span(4, &[0, 1])))
        .expect("valid");
    declare(m, &[])
}

/// `x ↦ (x₁ + x₂, x₂, x₃, x₄ − x₃)`, shared by `h₂` and `h₄`.
fn shear() -> &'static [&'static [i64]] {
    &[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, -1, 1]]
}

const ID4: &[&[i64]] = &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]];

pub fn nilpotent_t4() -> Manifest {
    let p = Presentation::parse(
        &["h1", "h2", "h3", "h4"],
        &[
            "h1 h2 h1^-1 h2^-1",
            "h1 h3 h1^-1 h3^-1",
            "h1 h4 h1^-1 h4^-1",
            "h3 h2 h3^-1 h2^-1",
            "h3 h4 h3^-1 h4^-1",
            "h2 h4 h2^-1 h4^-1 h3 h1",
        ],
    )
    .expect("valid");
    let rep = Representation::new(
        4,
        vec![
            map(ID4, &[1, 0, 0, 0]),
            map(shear(), &[0, 1, 0, 0]),
            map(ID4, &[0, 0, 0, 1]),
            map(shear(), &[0, 0, 1, 0]),
        ],
    )
    .expect("valid");
    let zero = Scalar::zero;
    // d₂ = 0 and f₂ additive: f₂(h₁) = t, f₂(h₃) = −t
    let jets = vec![
        vec![zero(), Scalar::one()],
        vec![zero(), zero()],
        vec![zero(), Scalar::int(-1)],
        vec![zero(), zero()],
    ];
    let m = Manifest::new("nilpotent_T4", 1, p, rep)
        .and_then(|m| m.with_form(omega0()))
        .and_then(|m| m.with_span(span(4, &[0, 1])))
        .and_then(|m| {
            m.with_tower(TowerSpec {
                fiber_generator: 0,
                fiber_axis: 0,
                fiber_translation: Some(vec![zero(); 4]),
                fiber_jets: Some(jets),
            })
        })
        .expect("valid");
    declare(m, &[("tower", Expectation::Pass)])
}

pub fn half_compact_t4() -> Manifest {
    let p = Presentation::parse(
        &["h1", "h2", "t3", "t4"],
        &[
            "h1 h2 h1^-1 h2^-1",
            "h1 t3 h1^-1 t3^-1",
            "h1 t4 h1^-1 t4^-1",
            "h2 t4 h2^-1 t4^-1",
            "t3 t4 t3^-1 t4^-1",
            "h2 t3 h2^-1 t3^-1 t4",
        ],
    )
    .expect("valid");
    let rep = Representation::new(
        4,
        vec![
            map(ID4, &[1, 0, 0, 0]),
            map(shear(), &[0, 1, 0, 0]),
            map(ID4, &[0, 0, 1, 0]),
            map(ID4, &[0, 0, 0, 1]),
        ],
    )
    .expect("valid");
    let m = Manifest::new("half_compact_T4", 1, p, rep)
        .and_then(|m| m.with_form(omega0()))
        .and_then(|m| m.with_span(span(4, &[0, 1])))
        .expect("valid");
    declare(m, &[])
}

/// `f_{s,t}(x, y) = (x + s·y + s²/2 + t, y + s)`.
pub fn f_st(s: &Scalar, t: &Scalar) -> AffineMap {
    let linear = Matrix::from_rows(vec![
        vec![Scalar::one(), s.clone()],
        vec![Scalar::zero(), Scalar::one()],
    ])
    .expect("square");
    let x = &(&(s * s) * &Scalar::ratio(1, 2)) + t;
    AffineMap::new(linear, Vector::new(vec![x, s.clone()])).expect("unipotent")
}

fn root2() -> Scalar {
    Scalar::sqrt(2).expect("square-free")
}

/// The lattice generated by `f_{√2,0}` and `f_{1,1}`.
pub fn hgroup_torus() -> Manifest {
    let p = Presentation::parse(&["f", "g"], &["f g f^-1 g^-1"]).expect("valid");
    let rep = Representation::new(
        2,
        vec![
            f_st(&root2(), &Scalar::zero()),
            f_st(&Scalar::one(), &Scalar::one()),
        ],
    )
    .expect("valid");
    let m = Manifest::new("hgroup_torus", 2, p, rep)
        .and_then(|m| m.with_form(BilinearForm::canonical(1)))
        .and_then(|m| m.with_span(span(2, &[0])))
        .expect("valid");
    declare(
        m,
        &[
            ("translation", Expectation::Fail),
            ("rationality", Expectation::Fail),
            ("reduce", Expectation::Fail),
        ],
    )
}

pub fn catalog() -> Vec<Manifest> {
    vec![
        flat_t2(),
        flat_t4(),
        nilpotent_t4(),
        half_compact_t4(),
        hgroup_torus(),
    ]
}

pub fn example(name: &str) -> Result<Manifest> {
    match name {
        "flat_T2" => Ok(flat_t2()),
        "flat_T4" => Ok(flat_t4()),
        "nilpotent_T4" => Ok(nilpotent_t4()),
        "half_compact_T4" => Ok(half_compact_t4()),
        "hgroup_torus" => Ok(hgroup_torus()),
        _ => Err(Error::UnknownExample(name.to_string())),
    }
}
