//! JSON manifests describing a holonomy group and its geometric decorations.
//!
//! Rationals are strings `"p"` or `"p/q"`; an element `a + b√d` of the
//! manifest's field is an object `{"a": "p/q", "b": "p/q"}`.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::holonomy::{contragredient, first_violated_relator, Presentation, Representation};
use crate::linalg::{Matrix, Vector};
use crate::scalar::{format_rational, parse_rational, Scalar};
use crate::symplectic::BilinearForm;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum RawScalar {
    Rational(String),
    Quadratic { a: String, b: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    name: String,
    linear: Vec<Vec<RawScalar>>,
    translation: Vec<RawScalar>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTower {
    fiber_generator: String,
    fiber_axis: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fiber_translation: Option<Vec<RawScalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fiber_jets: Option<Vec<Vec<RawScalar>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    name: String,
    dimension: usize,
    #[serde(default = "default_field")]
    field: u64,
    generators: Vec<RawGenerator>,
    #[serde(default)]
    relators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    symplectic_form: Option<Vec<Vec<RawScalar>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    foliation_span: Option<Vec<Vec<RawScalar>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tower: Option<RawTower>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    expect: BTreeMap<String, Expectation>,
}

fn default_field() -> u64 {
    1
}

/// Declared outcome of a check on a manifest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Pass,
    Fail,
}

/// Tower data: the upper group is the manifest's group, the lower one is
/// obtained by killing `fiber_generator` and collapsing `fiber_axis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSpec {
    pub fiber_generator: usize,
    pub fiber_axis: usize,
    /// `d₂`, one scalar per generator; zero when absent.
    pub fiber_translation: Option<Vec<Scalar>>,
    /// `f₂`, one fiber jet per generator; zero when absent.
    pub fiber_jets: Option<Vec<Vec<Scalar>>>,
}

/// A validated manifest: the representation satisfies every relator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub name: String,
    pub field: u64,
    pub presentation: Presentation,
    pub representation: Representation,
    pub symplectic_form: Option<BilinearForm>,
    pub foliation_span: Option<Vec<Vector>>,
    pub tower: Option<TowerSpec>,
    /// Checks with a declared outcome, by name.
    pub expect: BTreeMap<String, Expectation>,
}

fn scalar_from_raw(raw: &RawScalar, d: u64) -> Result<Scalar> {
    match raw {
        RawScalar::Rational(s) => Ok(Scalar::rational(parse_rational(s)?)),
        RawScalar::Quadratic { a, b } => {
            if d == 1 && !parse_rational(b)?.is_zero() {
                return Err(Error::Manifest(format!(
                    "irrational part {b} in a rational manifest"
                )));
            }
            Scalar::new(parse_rational(a)?, parse_rational(b)?, d)
        }
    }
}

fn scalar_to_raw(s: &Scalar) -> RawScalar {
    if s.is_rational() {
        RawScalar::Rational(format_rational(s.rational_part()))
    } else {
        RawScalar::Quadratic {
            a: format_rational(s.rational_part()),
            b: format_rational(s.irrational_part()),
        }
    }
}

fn vector_from_raw(raw: &[RawScalar], d: u64, len: usize, what: &str) -> Result<Vector> {
    if raw.len() != len {
        return Err(Error::Manifest(format!(
            "{what}: expected {len} entries, found {}",
            raw.len()
        )));
    }
    raw.iter()
        .map(|x| scalar_from_raw(x, d))
        .collect::<Result<_>>()
        .map(Vector::new)
}

fn matrix_from_raw(raw: &[Vec<RawScalar>], d: u64, n: usize, what: &str) -> Result<Matrix> {
    if raw.len() != n {
        return Err(Error::Manifest(format!(
            "{what}: expected {n} rows, found {}",
            raw.len()
        )));
    }
    let rows = raw
        .iter()
        .map(|r| vector_from_raw(r, d, n, what).map(Vector::into_entries))
        .collect::<Result<Vec<_>>>()?;
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    Matrix::from_rows(rows)
}

fn vector_to_raw(v: &Vector) -> Vec<RawScalar> {
    v.iter().map(scalar_to_raw).collect()
}

fn matrix_to_raw(m: &Matrix) -> Vec<Vec<RawScalar>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(scalar_to_raw).collect())
        .collect()
}

fn check_field(s: &Scalar, d: u64) -> Result<()> {
    if !s.is_rational() && s.field() != d {
        return Err(Error::MixedFields(s.field(), d));
    }
    Ok(())
}

impl Manifest {
    /// Validates the parts and the relators.
    pub fn new(
        name: impl Into<String>,
        field: u64,
        presentation: Presentation,
        representation: Representation,
    ) -> Result<Self> {
        if !crate::scalar::is_square_free(field) {
            return Err(Error::BadDiscriminant(field));
        }
        if presentation.rank() != representation.rank() {
            return Err(Error::DimensionMismatch {
                expected: presentation.rank(),
                found: representation.rank(),
            });
        }
        for f in representation.images() {
            for s in f.linear().entries().iter().chain(f.translation().iter()) {
                check_field(s, field)?;
            }
        }
        if let Some(i) = first_violated_relator(&presentation, &representation)? {
            return Err(Error::RelatorViolation {
                index: i,
                relator: presentation.relators()[i].display(presentation.generators()),
            });
        }
        Ok(Manifest {
            name: name.into(),
            field,
            presentation,
            representation,
            symplectic_form: None,
            foliation_span: None,
            tower: None,
            expect: BTreeMap::new(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.representation.dim()
    }

    pub fn with_form(mut self, form: BilinearForm) -> Result<Self> {
        if form.dim() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: form.dim(),
            });
        }
        self.symplectic_form = Some(form);
        Ok(self)
    }

    pub fn with_span(mut self, span: Vec<Vector>) -> Result<Self> {
        if let Some(v) = span.iter().find(|v| v.len() != self.dimension()) {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: v.len(),
            });
        }
        self.foliation_span = Some(span);
        Ok(self)
    }

    pub fn with_tower(mut self, tower: TowerSpec) -> Result<Self> {
        let k = self.presentation.rank();
        if tower.fiber_generator >= k {
            return Err(Error::GeneratorIndex(tower.fiber_generator));
        }
        if tower.fiber_axis >= self.dimension() {
            return Err(Error::OptionRange(format!(
                "fiber axis {} out of range",
                tower.fiber_axis
            )));
        }
        if let Some(d) = &tower.fiber_translation {
            if d.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: d.len(),
                });
            }
        }
        if let Some(f) = &tower.fiber_jets {
            if f.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: f.len(),
                });
            }
        }
        self.tower = Some(tower);
        Ok(self)
    }

    pub fn expecting(mut self, check: &str, outcome: Expectation) -> Self {
        self.expect.insert(check.to_string(), outcome);
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawManifest =
            serde_json::from_str(text).map_err(|e| Error::Manifest(e.to_string()))?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawManifest) -> Result<Self> {
        let (n, d) = (raw.dimension, raw.field);
        if !crate::scalar::is_square_free(d) {
            return Err(Error::BadDiscriminant(d));
        }
        let names: Vec<String> = raw.generators.iter().map(|g| g.name.clone()).collect();
        let mut images = Vec::with_capacity(names.len());
        for g in &raw.generators {
            let what = format!("generator {}", g.name);
            let linear = matrix_from_raw(&g.linear, d, n, &what)?;
            let translation = vector_from_raw(&g.translation, d, n, &what)?;
            images.push(AffineMap::new(linear, translation)?);
        }
        let relators = raw
            .relators
            .iter()
            .map(|r| crate::holonomy::Word::parse(r, &names))
            .collect::<Result<_>>()?;
        let presentation = Presentation::new(names, relators)?;
        let representation = Representation::new(n, images)?;
        let mut m = Manifest::new(raw.name, d, presentation, representation)?;
        if let Some(form) = &raw.symplectic_form {
            m = m.with_form(BilinearForm::new(matrix_from_raw(
                form,
                d,
                n,
                "symplectic_form",
            )?)?)?;
        }
        if let Some(span) = &raw.foliation_span {
            let vs = span
                .iter()
                .map(|v| vector_from_raw(v, d, n, "foliation_span"))
                .collect::<Result<_>>()?;
            m = m.with_span(vs)?;
        }
        if let Some(t) = &raw.tower {
            let k = m.presentation.rank();
            let fiber_translation = t
                .fiber_translation
                .as_ref()
                .map(|v| vector_from_raw(v, d, k, "fiber_translation").map(Vector::into_entries))
                .transpose()?;
            let fiber_jets = t
                .fiber_jets
                .as_ref()
                .map(|jets| {
                    jets.iter()
                        .map(|j| {
                            j.iter()
                                .map(|x| scalar_from_raw(x, d))
                                .collect::<Result<Vec<_>>>()
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .transpose()?;
            let fiber_generator = m.presentation.index_of(&t.fiber_generator)?;
            m = m.with_tower(TowerSpec {
                fiber_generator,
                fiber_axis: t.fiber_axis,
                fiber_translation,
                fiber_jets,
            })?;
        }
        m.expect = raw.expect;
        Ok(m)
    }

    fn to_raw(&self) -> RawManifest {
        let gens = self.presentation.generators();
        RawManifest {
            name: self.name.clone(),
            dimension: self.dimension(),
            field: self.field,
            generators: gens
                .iter()
                .zip(self.representation.images())
                .map(|(name, f)| RawGenerator {
                    name: name.clone(),
                    linear: matrix_to_raw(f.linear()),
                    translation: vector_to_raw(f.translation()),
                })
                .collect(),
            relators: self
                .presentation
                .relators()
                .iter()
                .map(|w| w.display(gens))
                .collect(),
            symplectic_form: self
                .symplectic_form
                .as_ref()
                .map(|f| matrix_to_raw(f.matrix())),
            foliation_span: self
                .foliation_span
                .as_ref()
                .map(|span| span.iter().map(vector_to_raw).collect()),
            tower: self.tower.as_ref().map(|t| RawTower {
                fiber_generator: gens[t.fiber_generator].clone(),
                fiber_axis: t.fiber_axis,
                fiber_translation: t
                    .fiber_translation
                    .as_ref()
                    .map(|v| v.iter().map(scalar_to_raw).collect()),
                fiber_jets: t.fiber_jets.as_ref().map(|jets| {
                    jets.iter()
                        .map(|j| j.iter().map(scalar_to_raw).collect())
                        .collect()
                }),
            }),
            expect: self.expect.clone(),
        }
    }

    /// Canonical pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("manifest serializes")
    }
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    Manifest::from_json(&std::fs::read_to_string(path)?)
}

/// The cotangent suspension: each generator acts by its affine map on the
/// first `n` coordinates and by `ᵗL(γ)⁻¹` on the last `n`, preserving the
/// canonical form, with the fibers as leaves.
pub fn build_suspension(base: &Manifest) -> Result<Manifest> {
    let n = base.dimension();
    let dual = contragredient(&base.representation)?;
    let images = base
        .representation
        .images()
        .iter()
        .zip(dual.images())
        .map(|(f, t)| f.direct_sum(t))
        .collect();
    let representation = Representation::new(2 * n, images)?;
    let span = (n..2 * n).map(|i| Vector::unit(2 * n, i)).collect();
    Manifest::new(
        format!("{}_suspension", base.name),
        base.field,
        base.presentation.clone(),
        representation,
    )?
    .with_form(BilinearForm::canonical(n))?
    .with_span(span)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TORUS: &str = r#"{
        "name": "t2",
        "dimension": 2,
        "generators": [
            {"name": "a", "linear": [["1","0"],["0","1"]], "translation": ["1","0"]},
            {"name": "b", "linear": [["1","0"],["0","1"]], "translation": ["0","1/2"]}
        ],
        "relators": ["a b a^-1 b^-1"],
        "symplectic_form": [["0","1"],["-1","0"]],
        "foliation_span": [["1","0"]]
    }"#;

    #[test]
    fn parses_and_roundtrips() {
        let m = Manifest::from_json(TORUS).unwrap();
        assert_eq!(m.dimension(), 2);
        assert_eq!(m.presentation.rank(), 2);
        assert_eq!(
            m.representation.images()[1].translation()[1],
            Scalar::ratio(1, 2)
        );
        let again = Manifest::from_json(&m.to_json()).unwrap();
        assert_eq!(again, m);
        assert_eq!(again.to_json(), m.to_json());
    }

    #[test]
    fn quadratic_scalars() {
        let text = r#"{"name": "q", "dimension": 1, "field": 2,
            "generators": [{"name": "g", "linear": [["1"]], "translation": [{"a": "1", "b": "-3/2"}]}]}"#;
        let m = Manifest::from_json(text).unwrap();
        let t = &m.representation.images()[0].translation()[0];
        assert_eq!(
            t.irrational_part(),
            &num_rational::BigRational::new((-3).into(), 2.into())
        );
        assert_eq!(Manifest::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn trivial_group() {
        let m = Manifest::from_json(r#"{"name": "e", "dimension": 3, "generators": []}"#).unwrap();
        assert_eq!(m.presentation.rank(), 0);
        let s = build_suspension(&m).unwrap();
        assert_eq!(s.dimension(), 6);
        assert_eq!(s.presentation.rank(), 0);
    }

    #[test]
    fn rejections() {
        let singular = TORUS.replace(
            r#"[["1","0"],["0","1"]], "translation": ["1","0"]"#,
            r#"[["1","1"],["1","1"]], "translation": ["1","0"]"#,
        );
        assert!(matches!(
            Manifest::from_json(&singular),
            Err(Error::Singular)
        ));
        let short = TORUS.replace(r#"["0","1/2"]"#, r#"["0"]"#);
        assert!(matches!(
            Manifest::from_json(&short),
            Err(Error::Manifest(_))
        ));
        let bad = TORUS.replace("1/2", "1/x");
        assert!(matches!(
            Manifest::from_json(&bad),
            Err(Error::MalformedScalar(_))
        ));
        let violated = TORUS.replace("a b a^-1 b^-1", "a b");
        assert!(matches!(
            Manifest::from_json(&violated),
            Err(Error::RelatorViolation { .. })
        ));
        let unknown = TORUS.replace("a b a^-1 b^-1", "a c");
        assert!(matches!(
            Manifest::from_json(&unknown),
            Err(Error::UnknownGenerator(_))
        ));
        assert!(matches!(Manifest::from_json("{"), Err(Error::Manifest(_))));
        let irrational = r#"{"name": "q", "dimension": 1,
            "generators": [{"name": "g", "linear": [["1"]], "translation": [{"a": "0", "b": "1"}]}]}"#;
        assert!(matches!(
            Manifest::from_json(irrational),
            Err(Error::Manifest(_))
        ));
    }

    #[test]
    fn suspension_of_torus() {
        let s = build_suspension(&Manifest::from_json(TORUS).unwrap()).unwrap();
        assert_eq!(s.name, "t2_suspension");
        assert_eq!(s.dimension(), 4);
        for f in s.representation.images() {
            assert!(f.linear().is_identity());
        }
    }
}
