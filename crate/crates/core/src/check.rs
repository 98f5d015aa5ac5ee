//! Named checks on a manifest and their machine-readable reports.
//!
//! Every number in a report is an exact string. A failing check always carries
//! a witness.

use serde::Serialize;
use serde_json::{json, Value};

use crate::cohomology::{
    self, classify_germs, radiance_obstruction, tower_check, Cocycle, GermFiber, LinearAction,
    TowerStorey,
};
use crate::error::{Error, Result};
use crate::holonomy::{
    duality_check, enumerate_ball, find_translation, first_duality_failure, first_square_failure,
    first_violated_relator, growth_estimate, quotient_by_fiber, BallOptions, GrowthClass,
    GrowthTable, Representation, TranslationSearch, DEFAULT_BALL_CAP,
};
use crate::linalg::{Matrix, Vector};
use crate::lsa::{reduction_chain, span_closure, LsaElement, SpanClosure};
use crate::manifest::{build_suspension, Expectation, Manifest};
use crate::par::{self, Execution};
use crate::scalar::Scalar;
use crate::symplectic::{is_lagrangian, preserves_span, pullback_form};
use crate::unipotent::log_unipotent;
use crate::AffineMap;

pub const CHECKS: &[&str] = &[
    "verify",
    "growth",
    "unimodular",
    "translation",
    "rationality",
    "reduce",
    "cohomology",
    "radiance",
    "classify",
    "tower",
    "duality",
];

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub radius: usize,
    pub max_len: usize,
    pub jet_degree: usize,
    pub cap: usize,
    pub execution: Execution,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            radius: 8,
            max_len: 12,
            jet_degree: 2,
            cap: DEFAULT_BALL_CAP,
            execution: Execution::default(),
        }
    }
}

impl CheckOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::OptionRange(what.to_string()));
        if self.radius == 0 || self.radius > 64 {
            return bad("radius must lie in 1..=64");
        }
        if self.max_len == 0 || self.max_len > 64 {
            return bad("max-len must lie in 1..=64");
        }
        if self.jet_degree == 0 || self.jet_degree > 6 {
            return bad("jet-degree must lie in 1..=6");
        }
        if self.cap == 0 {
            return bad("cap must be positive");
        }
        Ok(())
    }

    fn ball(&self) -> BallOptions {
        BallOptions {
            cap: self.cap,
            execution: self.execution,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub witness: Value,
}

impl CheckResult {
    fn new(name: &str, status: Status, detail: impl Into<String>, witness: Value) -> Self {
        CheckResult {
            name: name.to_string(),
            status,
            detail: detail.into(),
            witness,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub manifest: String,
    pub checks: Vec<CheckResult>,
}

impl Report {
    /// 0 all pass, 1 some check failed, 3 none failed but some inconclusive.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            1
        } else if self.checks.iter().any(|c| c.status == Status::Inconclusive) {
            3
        } else {
            0
        }
    }

    /// Checks whose status differs from the manifest's declared outcome.
    pub fn unexpected<'a>(&'a self, m: &Manifest) -> Vec<&'a CheckResult> {
        self.checks
            .iter()
            .filter(|c| match m.expect.get(&c.name) {
                Some(Expectation::Pass) => c.status != Status::Pass,
                Some(Expectation::Fail) => c.status != Status::Fail,
                None => false,
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("manifest {}\n", self.manifest);
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Inconclusive => "INCONCLUSIVE",
            };
            out.push_str(&format!("{status:<12} {:<12} {}\n", c.name, c.detail));
            if c.status == Status::Fail {
                out.push_str(&format!("  witness: {}\n", c.witness));
            }
        }
        out
    }
}

pub fn scalar_json(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

pub fn vector_json(v: &Vector) -> Value {
    Value::Array(v.iter().map(scalar_json).collect())
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(scalar_json).collect()))
            .collect(),
    )
}

fn map_json(f: &AffineMap) -> Value {
    json!({ "linear": matrix_json(f.linear()), "translation": vector_json(f.translation()) })
}

fn lsa_json(x: &LsaElement) -> Value {
    json!({ "linear": matrix_json(x.linear()), "translation": vector_json(x.translation()) })
}

fn cocycle_json(c: &Cocycle) -> Value {
    Value::Array(c.values().iter().map(vector_json).collect())
}

fn count(n: usize) -> Value {
    Value::String(n.to_string())
}

fn table_json(t: &GrowthTable) -> Value {
    json!({ "sizes": t.sizes.iter().map(|&s| count(s)).collect::<Vec<_>>(), "truncated": t.truncated })
}

/// Runs one check. Errors are reserved for unusable input (unknown check,
/// options out of range, missing data).
pub fn run_check(m: &Manifest, name: &str, opts: &CheckOptions) -> Result<CheckResult> {
    opts.validate()?;
    match name {
        "verify" => verify(m),
        "growth" => growth(m, opts),
        "unimodular" => Ok(unimodular(m)),
        "translation" => translation(m, opts),
        "rationality" => rationality(m),
        "reduce" => reduce(m),
        "cohomology" => cohomology_check(m, opts),
        "radiance" => radiance(m),
        "classify" => classify(m, opts),
        "tower" => tower(m),
        "duality" => duality(m),
        _ => Err(Error::UnknownCheck(name.to_string())),
    }
}

/// Runs `names` concurrently; the report keeps their order.
pub fn run_checks(m: &Manifest, names: &[&str], opts: &CheckOptions) -> Result<Report> {
    opts.validate()?;
    if let Some(bad) = names.iter().find(|n| !CHECKS.contains(n)) {
        return Err(Error::UnknownCheck(bad.to_string()));
    }
    let results = par::map(opts.execution, names, |n| run_check(m, n, opts));
    Ok(Report {
        manifest: m.name.clone(),
        checks: results.into_iter().collect::<Result<_>>()?,
    })
}

/// Runs every check with a declared outcome.
pub fn run_declared(m: &Manifest, opts: &CheckOptions) -> Result<Report> {
    let names: Vec<&str> = CHECKS
        .iter()
        .copied()
        .filter(|c| m.expect.contains_key(*c))
        .collect();
    run_checks(m, &names, opts)
}

fn generator_name(m: &Manifest, g: usize) -> String {
    m.presentation.generators()[g].clone()
}

fn verify(m: &Manifest) -> Result<CheckResult> {
    const NAME: &str = "verify";
    let (p, rep) = (&m.presentation, &m.representation);
    if let Some(i) = first_violated_relator(p, rep)? {
        let w = &p.relators()[i];
        let image = crate::holonomy::evaluate_word(rep, w)?;
        return Ok(CheckResult::new(
            NAME,
            Status::Fail,
            format!("relator {} is not the identity", w.display(p.generators())),
            json!({ "relator": w.display(p.generators()), "image": map_json(&image) }),
        ));
    }
    let mut notes = vec![format!("relators hold ({})", p.relators().len())];
    if let Some(form) = &m.symplectic_form {
        if !form.is_symplectic() {
            return Ok(CheckResult::new(
                NAME,
                Status::Fail,
                "declared form is degenerate",
                json!({ "form": matrix_json(form.matrix()) }),
            ));
        }
        for (g, f) in rep.images().iter().enumerate() {
            let pulled = pullback_form(f, form)?;
            if &pulled != form {
                return Ok(CheckResult::new(
                    NAME,
                    Status::Fail,
                    format!("{} does not preserve the form", generator_name(m, g)),
                    json!({ "generator": generator_name(m, g), "pullback": matrix_json(pulled.matrix()) }),
                ));
            }
        }
        notes.push("form preserved".into());
        if let Some(span) = &m.foliation_span {
            let lagrangian = match is_lagrangian(span, form) {
                Ok(b) => b,
                Err(Error::WrongRank { .. }) => false,
                Err(e) => return Err(e),
            };
            if !lagrangian {
                return Ok(CheckResult::new(
                    NAME,
                    Status::Fail,
                    "foliation span is not lagrangian",
                    json!({ "span": span.iter().map(vector_json).collect::<Vec<_>>() }),
                ));
            }
            notes.push("span lagrangian".into());
        }
    }
    if let Some(span) = &m.foliation_span {
        if let Some(g) = rep
            .images()
            .iter()
            .position(|f| !preserves_span(f.linear(), span))
        {
            return Ok(CheckResult::new(
                NAME,
                Status::Fail,
                format!("{} moves the foliation span", generator_name(m, g)),
                json!({ "generator": generator_name(m, g), "linear": matrix_json(rep.images()[g].linear()) }),
            ));
        }
        // algebraic stand-in for compactness of the leaf
        notes.push("span invariant under the linear holonomy".into());
    }
    Ok(CheckResult::new(
        NAME,
        Status::Pass,
        notes.join("; "),
        Value::Null,
    ))
}

fn growth(m: &Manifest, opts: &CheckOptions) -> Result<CheckResult> {
    const NAME: &str = "growth";
    let table = match enumerate_ball(&m.representation, opts.radius, opts.ball()) {
        Ok(ball) => ball.table().clone(),
        Err(Error::CapExceeded { partial, .. }) => partial,
        Err(e) => return Err(e),
    };
    let class = growth_estimate(&table);
    let witness = json!({ "table": table_json(&table), "estimate": class });
    let status = if class == GrowthClass::Inconclusive {
        Status::Inconclusive
    } else {
        Status::Pass
    };
    Ok(CheckResult::new(
        NAME,
        status,
        format!("{class} up to radius {} (heuristic)", table.radius()),
        witness,
    ))
}

fn unimodular(m: &Manifest) -> CheckResult {
    const NAME: &str = "unimodular";
    let dets: Vec<Scalar> = m
        .representation
        .images()
        .iter()
        .map(AffineMap::determinant)
        .collect();
    let witness = json!({ "determinants": dets.iter().map(scalar_json).collect::<Vec<_>>() });
    match dets.iter().position(|d| !(d.is_one() || (-d).is_one())) {
        None => CheckResult::new(
            NAME,
            Status::Pass,
            "every linear part has determinant ±1",
            witness,
        ),
        Some(g) => CheckResult::new(
            NAME,
            Status::Fail,
            format!("{} has determinant {}", generator_name(m, g), dets[g]),
            witness,
        ),
    }
}

fn translation(m: &Manifest, opts: &CheckOptions) -> Result<CheckResult> {
    const NAME: &str = "translation";
    if m.presentation.rank() == 0 {
        return Ok(CheckResult::new(
            NAME,
            Status::Fail,
            "trivial group",
            json!({ "searched_length": count(0) }),
        ));
    }
    Ok(
        match find_translation(&m.representation, opts.max_len, opts.ball())? {
            TranslationSearch::Found { word, map } => CheckResult::new(
                NAME,
                Status::Pass,
                format!(
                    "{} is a translation",
                    word.display(m.presentation.generators())
                ),
                json!({ "word": word.display(m.presentation.generators()), "translation": vector_json(map.translation()) }),
            ),
            TranslationSearch::NoneFound => CheckResult::new(
                NAME,
                Status::Fail,
                format!("no translation among words of length ≤ {}", opts.max_len),
                json!({ "searched_length": count(opts.max_len) }),
            ),
            TranslationSearch::Inconclusive { searched_radius } => CheckResult::new(
                NAME,
                Status::Inconclusive,
                format!("element cap reached at length {searched_radius}"),
                json!({ "searched_length": count(searched_radius) }),
            ),
        },
    )
}

/// Logarithms of the generators, or the first generator that is not unipotent.
fn logs(rep: &Representation) -> std::result::Result<Vec<LsaElement>, usize> {
    rep.images()
        .iter()
        .enumerate()
        .map(|(g, f)| log_unipotent(f).map_err(|_| g))
        .collect()
}

fn rationality(m: &Manifest) -> Result<CheckResult> {
    const NAME: &str = "rationality";
    if m.presentation.rank() == 0 {
        return Ok(CheckResult::new(
            NAME,
            Status::Pass,
            "trivial algebra",
            json!({ "dimension": count(0) }),
        ));
    }
    let gens = match logs(&m.representation) {
        Ok(g) => g,
        Err(g) => {
            return Ok(not_unipotent(NAME, m, g));
        }
    };
    Ok(match span_closure(&gens)? {
        SpanClosure::Closed(b) => CheckResult::new(
            NAME,
            Status::Pass,
            format!(
                "ℚ-span of the logarithms is a {}-dimensional subalgebra",
                b.dim()
            ),
            json!({ "dimension": count(b.dim()) }),
        ),
        SpanClosure::NotClosed { witness, factors } => CheckResult::new(
            NAME,
            Status::Fail,
            "a product of logarithms leaves their ℚ-span",
            json!({
                "factors": [count(factors.0), count(factors.1)],
                "product": lsa_json(&witness),
            }),
        ),
    })
}

fn not_unipotent(name: &str, m: &Manifest, g: usize) -> CheckResult {
    CheckResult::new(
        name,
        Status::Fail,
        format!("{} is not unipotent", generator_name(m, g)),
        json!({ "generator": generator_name(m, g), "linear": matrix_json(m.representation.images()[g].linear()) }),
    )
}

fn reduce(m: &Manifest) -> Result<CheckResult> {
    const NAME: &str = "reduce";
    if m.presentation.rank() == 0 {
        return Ok(CheckResult::new(
            NAME,
            Status::Pass,
            "trivial algebra",
            json!({ "chain": [count(0)] }),
        ));
    }
    let gens = match logs(&m.representation) {
        Ok(g) => g,
        Err(g) => return Ok(not_unipotent(NAME, m, g)),
    };
    Ok(match reduction_chain(&gens) {
        Ok(chain) => {
            let dims: Vec<String> = chain.iter().map(|b| b.dim().to_string()).collect();
            CheckResult::new(
                NAME,
                Status::Pass,
                format!("chain {}", dims.join(" → ")),
                json!({ "chain": dims }),
            )
        }
        Err(Error::NotClosed) => CheckResult::new(
            NAME,
            Status::Fail,
            "ℚ-span of the logarithms is not a subalgebra",
            json!({ "stage": count(0) }),
        ),
        Err(Error::NoSquareZero { stage, dimension }) => CheckResult::new(
            NAME,
            Status::Fail,
            format!("no square-zero element at stage {stage} (dimension {dimension})"),
            json!({ "stage": count(stage), "dimension": count(dimension) }),
        ),
        Err(e) => return Err(e),
    })
}

fn cohomology_check(m: &Manifest, opts: &CheckOptions) -> Result<CheckResult> {
    const NAME: &str = "cohomology";
    let action = LinearAction::linear_parts(&m.representation);
    let report = cohomology::h1_with(&m.presentation, &action, opts.execution)?;
    let witness = json!({
        "dim_z1": count(report.dim_z()),
        "dim_b1": count(report.dim_b()),
        "dim_h1": count(report.dim_h()),
    });
    for c in report.cocycles.iter().chain(&report.coboundaries) {
        if !cohomology::is_cocycle(&m.presentation, &action, c)? {
            return Ok(CheckResult::new(
                NAME,
                Status::Fail,
                "basis element violates the cocycle law",
                json!({ "cochain": cocycle_json(c) }),
            ));
        }
    }
    Ok(CheckResult::new(
        NAME,
        Status::Pass,
        format!(
            "H¹ of the linear holonomy: dim Z¹ = {}, dim B¹ = {}, dim H¹ = {}",
            report.dim_z(),
            report.dim_b(),
            report.dim_h()
        ),
        witness,
    ))
}

fn radiance(m: &Manifest) -> Result<CheckResult> {
    const NAME: &str = "radiance";
    let r = radiance_obstruction(&m.presentation, &m.representation)?;
    let detail = if r.is_radiant {
        "radiant: the group fixes a point"
    } else {
        "not radiant: the translation class is nonzero"
    };
    Ok(CheckResult::new(
        NAME,
        Status::Pass,
        detail,
        json!({
            "radiant": r.is_radiant,
            "class": vector_json(&r.class),
            "fixed_point": r.fixed_point.as_ref().map(vector_json),
        }),
    ))
}

fn classify(m: &Manifest, opts: &CheckOptions) -> Result<CheckResult> {
    const NAME: &str = "classify";
    Ok(
        match classify_germs(&m.presentation, &m.representation, opts.jet_degree)? {
            GermFiber::Fiber {
                dimension,
                representative,
            } => CheckResult::new(
                NAME,
                Status::Pass,
                format!(
                    "germ classes at jet degree {} form an affine space of dimension {dimension}",
                    opts.jet_degree
                ),
                json!({ "dimension": count(dimension), "representative": cocycle_json(&representative) }),
            ),
            GermFiber::Empty => CheckResult::new(
                NAME,
                Status::Fail,
                "no jet class lifts the radiance class",
                json!({ "jet_degree": count(opts.jet_degree) }),
            ),
        },
    )
}

fn tower(m: &Manifest) -> Result<CheckResult> {
    const NAME: &str = "tower";
    let spec = m
        .tower
        .as_ref()
        .ok_or_else(|| Error::Manifest("manifest has no tower data".into()))?;
    let (lp, lrep, proj) = quotient_by_fiber(
        &m.presentation,
        &m.representation,
        spec.fiber_generator,
        spec.fiber_axis,
    )?;
    if let Some(g) = first_square_failure(&m.representation, &lrep, &proj)? {
        return Ok(CheckResult::new(
            NAME,
            Status::Fail,
            format!("projection does not intertwine {}", generator_name(m, g)),
            json!({ "generator": generator_name(m, g), "upper": map_json(&m.representation.images()[g]) }),
        ));
    }
    if let Some(i) = first_violated_relator(&lp, &lrep)? {
        return Ok(CheckResult::new(
            NAME,
            Status::Fail,
            "lower group violates a projected relator",
            json!({ "relator": lp.relators()[i].display(lp.generators()) }),
        ));
    }
    let k = m.presentation.rank();
    let lower_action = LinearAction::linear_parts(&lrep);
    let c1 = Cocycle::new(
        lrep.images()
            .iter()
            .map(|f| f.translation().clone())
            .collect(),
    );
    let d2 = spec
        .fiber_translation
        .clone()
        .unwrap_or_else(|| vec![Scalar::zero(); k]);
    let f2 = spec
        .fiber_jets
        .clone()
        .unwrap_or_else(|| vec![vec![Scalar::zero()]; k]);
    let storey = TowerStorey {
        upper: &m.presentation,
        projection: &proj.words,
        lower_action: &lower_action,
        c1: &c1,
        d2: &d2,
        f2: &f2,
    };
    if !tower_check(&storey)? {
        return Ok(CheckResult::new(
            NAME,
            Status::Fail,
            "fiber cochain violates the tower cocycle law",
            json!({
                "fiber_translation": d2.iter().map(scalar_json).collect::<Vec<_>>(),
                "fiber_jets": f2.iter().map(|j| j.iter().map(scalar_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }),
        ));
    }
    Ok(CheckResult::new(
        NAME,
        Status::Pass,
        format!(
            "square commutes over the {}-dimensional quotient; tower cocycle law holds",
            lrep.dim()
        ),
        json!({ "lower_generators": lp.generators() }),
    ))
}

fn duality(m: &Manifest) -> Result<CheckResult> {
    const NAME: &str = "duality";
    let s = build_suspension(m)?;
    let n = m.dimension();
    let transverse = Representation::new(
        n,
        s.representation
            .images()
            .iter()
            .map(|f| {
                let rows: Vec<Vec<Scalar>> = (n..2 * n)
                    .map(|i| (n..2 * n).map(|j| f.linear()[(i, j)].clone()).collect())
                    .collect();
                let block = if n == 0 {
                    Matrix::zeros(0, 0)
                } else {
                    Matrix::from_rows(rows)?
                };
                AffineMap::linear_map(block)
            })
            .collect::<Result<_>>()?,
    )?;
    if !duality_check(&m.representation, &transverse)? {
        let g = first_duality_failure(&m.representation, &transverse).unwrap_or(0);
        return Ok(CheckResult::new(
            NAME,
            Status::Fail,
            format!("duality law fails for {}", generator_name(m, g)),
            json!({ "generator": generator_name(m, g), "transverse": matrix_json(transverse.images()[g].linear()) }),
        ));
    }
    let verified = verify(&s)?;
    if verified.status != Status::Pass {
        return Ok(CheckResult::new(
            NAME,
            Status::Fail,
            format!("suspension: {}", verified.detail),
            verified.witness,
        ));
    }
    Ok(CheckResult::new(
        NAME,
        Status::Pass,
        format!(
            "suspension {} satisfies the duality law and preserves the canonical form",
            s.name
        ),
        json!({ "suspension_dimension": count(s.dimension()) }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn catalog_meets_declared_outcomes() {
        let opts = CheckOptions::default();
        for m in catalog::catalog() {
            let report = run_declared(&m, &opts).unwrap();
            let bad: Vec<_> = report
                .unexpected(&m)
                .iter()
                .map(|c| (c.name.clone(), c.detail.clone()))
                .collect();
            assert!(bad.is_empty(), "{}: {bad:?}", m.name);
        }
    }

    #[test]
    fn fails_carry_witnesses() {
        let report = run_checks(&catalog::hgroup_torus(), CHECKS, &CheckOptions::default());
        // no tower data
        assert!(matches!(report, Err(Error::Manifest(_))));
        let names: Vec<&str> = CHECKS.iter().copied().filter(|c| *c != "tower").collect();
        let report =
            run_checks(&catalog::hgroup_torus(), &names, &CheckOptions::default()).unwrap();
        for c in report.checks.iter().filter(|c| c.status == Status::Fail) {
            assert!(!c.witness.is_null(), "{}", c.name);
        }
        assert_eq!(report.exit_code(), 1);
    }

    #[test]
    fn options_and_names_are_validated() {
        let m = catalog::flat_t2();
        let bad = CheckOptions {
            jet_degree: 0,
            ..CheckOptions::default()
        };
        assert!(matches!(
            run_check(&m, "classify", &bad),
            Err(Error::OptionRange(_))
        ));
        assert!(matches!(
            run_check(&m, "nope", &CheckOptions::default()),
            Err(Error::UnknownCheck(_))
        ));
    }

    #[test]
    fn flat_t4_growth_degree_four() {
        let opts = CheckOptions {
            radius: 10,
            ..CheckOptions::default()
        };
        let r = run_check(&catalog::flat_t4(), "growth", &opts).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(
            r.witness["estimate"],
            json!({ "label": "polynomial", "degree": 4 })
        );
        assert_eq!(r.witness["table"]["sizes"][10], json!("8361"));
    }

    #[test]
    fn tight_cap_is_inconclusive() {
        let opts = CheckOptions {
            cap: 50,
            ..CheckOptions::default()
        };
        let r = run_check(&catalog::flat_t4(), "growth", &opts).unwrap();
        assert_eq!(r.status, Status::Inconclusive);
        let report = Report {
            manifest: "x".into(),
            checks: vec![r],
        };
        assert_eq!(report.exit_code(), 3);
    }
}
