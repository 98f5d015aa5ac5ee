//! Finitely generated affine groups given by a presentation and a
//! representation `generator ↦ AffineMap`.
//!
//! Growth is measured on the word metric of the represented group: the ball
//! `B(n)` is the set of distinct affine maps expressible as words of length at
//! most `n` in the generators and their inverses. This is the group-level
//! stand-in for leaf growth; any label derived from a finite table is a
//! heuristic.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::par::{self, Execution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

/// A word in the generators, read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// `g^power` for a single generator.
    pub fn power(generator: usize, power: i64) -> Self {
        let l = Letter::new(generator, power < 0);
        Word(vec![l; power.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    /// Commutator `a b a⁻¹ b⁻¹`.
    pub fn commutator(a: usize, b: usize) -> Self {
        Word(vec![
            Letter::new(a, false),
            Letter::new(b, false),
            Letter::new(a, true),
            Letter::new(b, true),
        ])
    }

    /// Parses whitespace-separated tokens `name`, `name^-1` or `name^k`.
    /// `"1"` and the empty string denote the empty word.
    pub fn parse(s: &str, generators: &[String]) -> Result<Self> {
        let mut out = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == '*' || c == ',') {
            if tok.is_empty() || tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e = e.trim_matches(|c| c == '{' || c == '}' || c == '(' || c == ')');
                    let e: i64 = e.parse().map_err(|_| Error::MalformedWord(s.to_string()))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            let g = generators
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            out.extend(Word::power(g, exp).0);
        }
        Ok(Word(out))
    }

    /// Renders with generator names; consecutive equal letters are grouped.
    pub fn display(&self, generators: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            let name = generators.get(l.generator).map_or("?", String::as_str);
            let exp = if l.inverse { -(run as i64) } else { run as i64 };
            if exp == 1 {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{name}^{exp}"));
            }
            i += run;
        }
        parts.join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        for w in &relators {
            if let Some(l) = w.letters().iter().find(|l| l.generator >= generators.len()) {
                return Err(Error::GeneratorIndex(l.generator));
            }
        }
        Ok(Presentation {
            generators,
            relators,
        })
    }

    /// Builds a presentation from relator strings in [`Word::parse`] syntax.
    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Self> {
        let gens: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let rels = relators
            .iter()
            .map(|r| Word::parse(r, &gens))
            .collect::<Result<_>>()?;
        Self::new(gens, rels)
    }

    /// Free abelian group on `k` generators `g1..gk`.
    pub fn free_abelian(k: usize) -> Self {
        let gens = (1..=k).map(|i| format!("g{i}")).collect();
        let mut rels = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                rels.push(Word::commutator(a, b));
            }
        }
        Presentation {
            generators: gens,
            relators: rels,
        }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        Word::parse(s, &self.generators)
    }
}

/// Images of the generators, all in a common dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    dim: usize,
    images: Vec<AffineMap>,
}

impl Representation {
    pub fn new(dim: usize, images: Vec<AffineMap>) -> Result<Self> {
        if let Some(f) = images.iter().find(|f| f.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: f.dim(),
            });
        }
        Ok(Representation { dim, images })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[AffineMap] {
        &self.images
    }

    pub fn image(&self, g: usize) -> Result<&AffineMap> {
        self.images.get(g).ok_or(Error::GeneratorIndex(g))
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn linear_parts(&self) -> Vec<Matrix> {
        self.images.iter().map(|f| f.linear().clone()).collect()
    }

    /// Generator images and their inverses, in letter order
    /// `g0, g0⁻¹, g1, g1⁻¹, …`.
    fn letters(&self) -> Result<Vec<(Letter, AffineMap)>> {
        let mut out = Vec::with_capacity(2 * self.images.len());
        for (i, f) in self.images.iter().enumerate() {
            out.push((Letter::new(i, false), f.clone()));
            out.push((Letter::new(i, true), f.inverse()?));
        }
        Ok(out)
    }

    /// `γ ↦ g∘ρ(γ)∘g⁻¹`.
    pub fn conjugate_by(&self, g: &AffineMap) -> Result<Representation> {
        let gi = g.inverse()?;
        let images = self
            .images
            .iter()
            .map(|f| g.compose(f)?.compose(&gi))
            .collect::<Result<_>>()?;
        Representation::new(self.dim, images)
    }
}

/// Composes generator images left to right; `g⁻¹` uses the exact inverse.
pub fn evaluate_word(rep: &Representation, w: &Word) -> Result<AffineMap> {
    let mut acc = AffineMap::identity(rep.dim);
    for l in w.letters() {
        let f = rep.image(l.generator)?;
        let f = if l.inverse { f.inverse()? } else { f.clone() };
        acc = acc.compose_unchecked(&f);
    }
    Ok(acc)
}

/// True iff every relator evaluates to the identity map.
pub fn check_relations(p: &Presentation, rep: &Representation) -> Result<bool> {
    Ok(first_violated_relator(p, rep)?.is_none())
}

pub fn first_violated_relator(p: &Presentation, rep: &Representation) -> Result<Option<usize>> {
    for (i, r) in p.relators.iter().enumerate() {
        if !evaluate_word(rep, r)?.is_identity() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// `|B(n)|` for `n = 0..=N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub sizes: Vec<usize>,
    /// Set when the element cap stopped enumeration before the requested radius.
    pub truncated: bool,
}

impl GrowthTable {
    pub fn radius(&self) -> usize {
        self.sizes.len().saturating_sub(1)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BallOptions {
    pub cap: usize,
    pub execution: Execution,
}

pub const DEFAULT_BALL_CAP: usize = 200_000;

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions {
            cap: DEFAULT_BALL_CAP,
            execution: Execution::default(),
        }
    }
}

/// The enumerated ball: distinct elements in breadth-first order, each with a
/// shortest word reaching it.
#[derive(Clone, Debug)]
pub struct Ball {
    elements: Vec<AffineMap>,
    words: Vec<Word>,
    index: HashMap<Vec<u8>, usize>,
    table: GrowthTable,
}

impl Ball {
    pub fn elements(&self) -> &[AffineMap] {
        &self.elements
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn table(&self) -> &GrowthTable {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, f: &AffineMap) -> bool {
        self.index.contains_key(&f.canonical_key())
    }

    /// Shortest word for `f`, if it lies in the ball.
    pub fn word_of(&self, f: &AffineMap) -> Option<&Word> {
        self.index.get(&f.canonical_key()).map(|&i| &self.words[i])
    }
}

enum Stop {
    Radius,
    Found(usize),
    Cap,
}

/// Breadth-first expansion; frontier products are computed with `opts.execution`
/// and merged sequentially in frontier order, so the result is deterministic.
fn expand(
    rep: &Representation,
    radius: usize,
    opts: BallOptions,
    target: Option<&(dyn Fn(&AffineMap) -> bool + Sync)>,
) -> Result<(Ball, Stop)> {
    let letters = rep.letters()?;
    let id = AffineMap::identity(rep.dim);
    let mut ball = Ball {
        index: HashMap::from([(id.canonical_key(), 0)]),
        elements: vec![id],
        words: vec![Word::empty()],
        table: GrowthTable {
            sizes: vec![1],
            truncated: false,
        },
    };
    if let Some(t) = target {
        if t(&ball.elements[0]) {
            return Ok((ball, Stop::Found(0)));
        }
    }
    let mut frontier = 0..1usize;
    for _ in 0..radius {
        let layer: Vec<usize> = frontier.clone().collect();
        let products = par::map(opts.execution, &layer, |&i| {
            let base = &ball.elements[i];
            letters
                .iter()
                .map(|(l, g)| {
                    let f = base.compose_unchecked(g);
                    (f.canonical_key(), f, i, *l)
                })
                .collect::<Vec<_>>()
        });
        let start = ball.elements.len();
        for (key, f, parent, letter) in products.into_iter().flatten() {
            if ball.index.contains_key(&key) {
                continue;
            }
            if ball.elements.len() >= opts.cap {
                ball.table.truncated = true;
                return Ok((ball, Stop::Cap));
            }
            let mut w = ball.words[parent].clone();
            w.push(letter);
            let pos = ball.elements.len();
            ball.index.insert(key, pos);
            ball.elements.push(f);
            ball.words.push(w);
            if let Some(t) = target {
                if t(&ball.elements[pos]) {
                    return Ok((ball, Stop::Found(pos)));
                }
            }
        }
        ball.table.sizes.push(ball.elements.len());
        frontier = start..ball.elements.len();
    }
    Ok((ball, Stop::Radius))
}

/// Enumerates `B(radius)`; fails with the completed part of the table when more
/// than `opts.cap` elements would be needed.
pub fn enumerate_ball(rep: &Representation, radius: usize, opts: BallOptions) -> Result<Ball> {
    let (ball, stop) = expand(rep, radius, opts, None)?;
    match stop {
        Stop::Cap => Err(Error::CapExceeded {
            cap: opts.cap,
            partial: ball.table,
        }),
        _ => Ok(ball),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "label", rename_all = "snake_case")]
pub enum GrowthClass {
    Polynomial { degree: u32 },
    Exponential,
    Inconclusive,
}

impl fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthClass::Polynomial { degree } => write!(f, "polynomial (degree {degree})"),
            GrowthClass::Exponential => write!(f, "exponential"),
            GrowthClass::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Heuristic growth label for a finite table. Never a proof.
///
/// Exponential needs both: the last five ratios `|B(n+1)|/|B(n)|` stay at or
/// above 1.1, and the log-increment `ln(|B(N)|/|B(N−1)|)` has not decayed below
/// 3/4 of its value at `N/2` (polynomial growth makes it decay like `1/n`).
/// Otherwise the degree is the order of the finite differences when the whole
/// table is an exact polynomial, or else the rounded least-squares slope of
/// `ln|B(n)|` against `ln n` on the upper half of the table.
pub fn growth_estimate(table: &GrowthTable) -> GrowthClass {
    let b = &table.sizes;
    if table.truncated || b.len() < 6 || b[0] != 1 {
        return GrowthClass::Inconclusive;
    }
    let n_max = b.len() - 1;
    let incr = |n: usize| (b[n] as f64 / b[n - 1] as f64).ln();
    let ratios_high = (n_max - 4..=n_max).all(|n| b[n] as f64 >= 1.1 * b[n - 1] as f64);
    let half = n_max.div_ceil(2).max(1);
    let no_decay = incr(n_max) >= 0.75 * incr(half);
    if ratios_high && no_decay {
        return GrowthClass::Exponential;
    }
    if let Some(d) = exact_polynomial_degree(b) {
        return GrowthClass::Polynomial { degree: d };
    }
    let pts: Vec<(f64, f64)> = (half..=n_max)
        .map(|n| ((n as f64).ln(), (b[n] as f64).ln()))
        .collect();
    let slope = least_squares_slope(&pts);
    GrowthClass::Polynomial {
        degree: slope.round().max(0.0) as u32,
    }
}

/// Smallest `d` such that the `(d+1)`-th differences of the whole table vanish,
/// with at least two vanishing values as evidence.
fn exact_polynomial_degree(b: &[usize]) -> Option<u32> {
    let mut diffs: Vec<i128> = b.iter().map(|&x| x as i128).collect();
    let mut d = 0u32;
    loop {
        let next: Vec<i128> = diffs.windows(2).map(|w| w[1] - w[0]).collect();
        if next.len() < 2 {
            return None;
        }
        if next.iter().all(|&x| x == 0) {
            return Some(d);
        }
        diffs = next;
        d += 1;
    }
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// True iff every generator's linear part has determinant ±1.
pub fn is_unimodular(rep: &Representation) -> bool {
    rep.images.iter().all(|f| {
        let d = f.determinant();
        d.is_one() || (-d).is_one()
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TranslationSearch {
    Found {
        word: Word,
        map: AffineMap,
    },
    /// Exhaustive search up to the length bound found nothing.
    NoneFound,
    /// The element cap was hit before the search completed.
    Inconclusive {
        searched_radius: usize,
    },
}

/// Searches words of length `≤ max_len` for a nontrivial pure translation.
pub fn find_translation(
    rep: &Representation,
    max_len: usize,
    opts: BallOptions,
) -> Result<TranslationSearch> {
    if max_len == 0 {
        return Err(Error::OptionRange("max_len must be at least 1".into()));
    }
    let pred = |f: &AffineMap| f.is_translation();
    let (ball, stop) = expand(rep, max_len, opts, Some(&pred))?;
    Ok(match stop {
        Stop::Found(i) => TranslationSearch::Found {
            word: ball.words[i].clone(),
            map: ball.elements[i].clone(),
        },
        Stop::Radius => TranslationSearch::NoneFound,
        Stop::Cap => TranslationSearch::Inconclusive {
            searched_radius: ball.table.radius(),
        },
    })
}

/// Contragredient linear representation `γ ↦ ᵗL(γ)⁻¹`.
pub fn contragredient(rep: &Representation) -> Result<Representation> {
    let images = rep
        .images
        .iter()
        .map(|f| AffineMap::linear_map(f.linear().inverse()?.transpose()))
        .collect::<Result<_>>()?;
    Representation::new(rep.dim, images)
}

/// Degree-one duality law: `ᵗL(γ)·T(γ) = I` for every generator, where `L` is
/// the linear holonomy of `affine` and `T` the (linear) transverse holonomy.
pub fn duality_check(affine: &Representation, transverse: &Representation) -> Result<bool> {
    if affine.rank() != transverse.rank() {
        return Err(Error::DimensionMismatch {
            expected: affine.rank(),
            found: transverse.rank(),
        });
    }
    if affine.dim != transverse.dim {
        return Err(Error::DimensionMismatch {
            expected: affine.dim,
            found: transverse.dim,
        });
    }
    if let Some(i) = transverse
        .images
        .iter()
        .position(|t| !t.translation().is_zero())
    {
        return Err(Error::NonlinearTransverse(i));
    }
    Ok(first_duality_failure(affine, transverse).is_none())
}

pub(crate) fn first_duality_failure(
    affine: &Representation,
    transverse: &Representation,
) -> Option<usize> {
    affine
        .images
        .iter()
        .zip(&transverse.images)
        .position(|(a, t)| !(&a.linear().transpose() * t.linear()).is_identity())
}

/// How an upper group maps onto a lower one in a circle-bundle tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerProjection {
    /// Image of each upper generator as a word in the lower generators.
    pub words: Vec<Word>,
    /// Coordinate of ℝ^{m+1} collapsed by the projection to ℝ^m.
    pub fiber_axis: usize,
}

/// Checks that projecting away `fiber_axis` intertwines `upper(γ)` with
/// `lower(proj(γ))` for every upper generator.
pub fn square_commutes(
    upper: &Representation,
    lower: &Representation,
    proj: &TowerProjection,
) -> Result<bool> {
    Ok(first_square_failure(upper, lower, proj)?.is_none())
}

pub(crate) fn first_square_failure(
    upper: &Representation,
    lower: &Representation,
    proj: &TowerProjection,
) -> Result<Option<usize>> {
    if upper.dim != lower.dim + 1 {
        return Err(Error::DimensionMismatch {
            expected: lower.dim + 1,
            found: upper.dim,
        });
    }
    if proj.words.len() != upper.rank() {
        return Err(Error::DimensionMismatch {
            expected: upper.rank(),
            found: proj.words.len(),
        });
    }
    let f = proj.fiber_axis;
    if f >= upper.dim {
        return Err(Error::OptionRange(format!("fiber axis {f} out of range")));
    }
    let drop = |i: usize| if i < f { i } else { i - 1 };
    for (g, (a, w)) in upper.images.iter().zip(&proj.words).enumerate() {
        let b = evaluate_word(lower, w)?;
        let ok = (0..upper.dim).filter(|&r| r != f).all(|r| {
            a.linear()[(r, f)].is_zero()
                && a.translation()[r] == b.translation()[drop(r)]
                && (0..upper.dim)
                    .filter(|&c| c != f)
                    .all(|c| a.linear()[(r, c)] == b.linear()[(drop(r), drop(c))])
        });
        if !ok {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// The lower group of a tower obtained by killing `fiber_generator` and
/// collapsing `fiber_axis`: generators keep their order, relators lose the
/// fiber letters, and each image loses the fiber row and column.
pub fn quotient_by_fiber(
    p: &Presentation,
    rep: &Representation,
    fiber_generator: usize,
    fiber_axis: usize,
) -> Result<(Presentation, Representation, TowerProjection)> {
    if fiber_generator >= p.rank() {
        return Err(Error::GeneratorIndex(fiber_generator));
    }
    if fiber_axis >= rep.dim || rep.dim == 0 {
        return Err(Error::OptionRange(format!(
            "fiber axis {fiber_axis} out of range"
        )));
    }
    let reindex = |g: usize| if g < fiber_generator { g } else { g - 1 };
    let gens: Vec<String> = p
        .generators
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != fiber_generator)
        .map(|(_, g)| g.clone())
        .collect();
    let rels = p
        .relators
        .iter()
        .map(|w| {
            Word::new(
                w.letters()
                    .iter()
                    .filter(|l| l.generator != fiber_generator)
                    .map(|l| Letter::new(reindex(l.generator), l.inverse))
                    .collect(),
            )
        })
        .collect();
    let images = rep
        .images
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != fiber_generator)
        .map(|(_, f)| {
            let t = f.translation();
            let mut entries = t.entries().to_vec();
            entries.remove(fiber_axis);
            AffineMap::new(
                f.linear().strike(fiber_axis, fiber_axis),
                crate::linalg::Vector::new(entries),
            )
        })
        .collect::<Result<_>>()?;
    let words = (0..p.rank())
        .map(|g| {
            if g == fiber_generator {
                Word::empty()
            } else {
                Word::power(reindex(g), 1)
            }
        })
        .collect();
    Ok((
        Presentation::new(gens, rels)?,
        Representation::new(rep.dim - 1, images)?,
        TowerProjection { words, fiber_axis },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vector;
    use crate::scalar::Scalar;

    fn lattice(k: usize) -> Representation {
        Representation::new(
            k,
            (0..k)
                .map(|i| AffineMap::translation_by(Vector::unit(k, i)))
                .collect(),
        )
        .unwrap()
    }

    fn free_pair() -> Representation {
        Representation::new(
            2,
            vec![
                AffineMap::linear_map(Matrix::from_ints(&[&[1, 2], &[0, 1]])).unwrap(),
                AffineMap::linear_map(Matrix::from_ints(&[&[1, 0], &[2, 1]])).unwrap(),
            ],
        )
        .unwrap()
    }

    fn table(sizes: Vec<usize>) -> GrowthTable {
        GrowthTable {
            sizes,
            truncated: false,
        }
    }

    #[test]
    fn word_parse_and_display() {
        let gens: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let w = Word::parse("a b^-1 a^2", &gens).unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.display(&gens), "a b^-1 a^2");
        assert_eq!(Word::parse("1", &gens).unwrap(), Word::empty());
        assert!(matches!(
            Word::parse("c", &gens),
            Err(Error::UnknownGenerator(_))
        ));
        assert!(matches!(
            Word::parse("a^x", &gens),
            Err(Error::MalformedWord(_))
        ));
        assert_eq!(w.concat(&w.inverse()).len(), 8);
    }

    #[test]
    fn evaluate_simple_words() {
        let rep = lattice(2);
        assert!(evaluate_word(&rep, &Word::empty()).unwrap().is_identity());
        let w = Word::power(0, 7);
        assert_eq!(
            evaluate_word(&rep, &w).unwrap(),
            AffineMap::translation_by(Vector::from_ints(&[7, 0]))
        );
        assert!(matches!(
            evaluate_word(&rep, &Word::power(5, 1)),
            Err(Error::GeneratorIndex(5))
        ));
    }

    #[test]
    fn relations_of_flat_torus() {
        let rep = lattice(2);
        let p = Presentation::free_abelian(2);
        assert!(check_relations(&p, &rep).unwrap());
        let bad = Presentation::parse(&["g1", "g2"], &["g1 g2"]).unwrap();
        assert!(!check_relations(&bad, &rep).unwrap());
    }

    #[test]
    fn small_balls() {
        let z2 = enumerate_ball(&lattice(2), 5, BallOptions::default()).unwrap();
        assert_eq!(z2.table().sizes, vec![1, 5, 13, 25, 41, 61]);
        let trivial = Representation::new(3, vec![]).unwrap();
        assert_eq!(
            enumerate_ball(&trivial, 4, BallOptions::default())
                .unwrap()
                .table()
                .sizes,
            vec![1; 5]
        );
        let free = enumerate_ball(&free_pair(), 3, BallOptions::default()).unwrap();
        assert_eq!(free.table().sizes, vec![1, 5, 17, 53]);
    }

    #[test]
    fn cap_reports_partial_table() {
        let opts = BallOptions {
            cap: 30,
            ..Default::default()
        };
        match enumerate_ball(&lattice(2), 10, opts) {
            Err(Error::CapExceeded { cap: 30, partial }) => {
                assert_eq!(partial.sizes, vec![1, 5, 13, 25]);
                assert!(partial.truncated);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ball_words_evaluate_to_their_elements() {
        let ball = enumerate_ball(&free_pair(), 3, BallOptions::default()).unwrap();
        for (f, w) in ball.elements().iter().zip(ball.words()) {
            assert_eq!(&evaluate_word(&free_pair(), w).unwrap(), f);
            assert!(w.len() <= 3);
        }
    }

    #[test]
    fn growth_labels() {
        let z2: Vec<usize> = (0..=20).map(|n| 2 * n * n + 2 * n + 1).collect();
        assert_eq!(
            growth_estimate(&table(z2)),
            GrowthClass::Polynomial { degree: 2 }
        );
        let free: Vec<usize> = (0..=8).map(|n| 2 * 3usize.pow(n) - 1).collect();
        assert_eq!(growth_estimate(&table(free)), GrowthClass::Exponential);
        assert_eq!(
            growth_estimate(&table(vec![1; 8])),
            GrowthClass::Polynomial { degree: 0 }
        );
        assert_eq!(
            growth_estimate(&table(vec![1, 2, 3])),
            GrowthClass::Inconclusive
        );
        let finite = table(vec![1, 3, 4, 4, 4, 4, 4, 4]);
        assert_eq!(
            growth_estimate(&finite),
            GrowthClass::Polynomial { degree: 0 }
        );
        let mut cut = table(vec![1, 5, 13, 25, 41, 61]);
        cut.truncated = true;
        assert_eq!(growth_estimate(&cut), GrowthClass::Inconclusive);
    }

    #[test]
    fn unimodularity() {
        assert!(is_unimodular(&free_pair()));
        let scaled = Representation::new(
            2,
            vec![
                AffineMap::linear_map(Matrix::diagonal(&[Scalar::int(2), Scalar::one()])).unwrap(),
            ],
        )
        .unwrap();
        assert!(!is_unimodular(&scaled));
        let flip = Representation::new(
            1,
            vec![AffineMap::linear_map(Matrix::from_ints(&[&[-1]])).unwrap()],
        )
        .unwrap();
        assert!(is_unimodular(&flip));
    }

    #[test]
    fn translation_search() {
        match find_translation(&lattice(2), 3, BallOptions::default()).unwrap() {
            TranslationSearch::Found { word, map } => {
                assert_eq!(word, Word::power(0, 1));
                assert!(map.is_translation());
            }
            other => panic!("unexpected {other:?}"),
        }
        // free group on two unipotents has no translations at all
        assert_eq!(
            find_translation(&free_pair(), 4, BallOptions::default()).unwrap(),
            TranslationSearch::NoneFound
        );
        let tiny = BallOptions {
            cap: 10,
            ..Default::default()
        };
        assert!(matches!(
            find_translation(&free_pair(), 4, tiny).unwrap(),
            TranslationSearch::Inconclusive { .. }
        ));
        assert!(find_translation(&lattice(1), 0, BallOptions::default()).is_err());
    }

    #[test]
    fn duality_examples() {
        let one =
            |m: Matrix| Representation::new(2, vec![AffineMap::linear_map(m).unwrap()]).unwrap();
        let id = one(Matrix::identity(2));
        assert!(duality_check(&id, &id).unwrap());
        let l = one(Matrix::from_ints(&[&[1, 1], &[0, 1]]));
        let t = one(Matrix::from_ints(&[&[1, 0], &[-1, 1]]));
        assert!(duality_check(&l, &t).unwrap());
        assert!(!duality_check(&l, &l).unwrap());
        assert_eq!(contragredient(&l).unwrap(), t);
        let shifted = Representation::new(
            2,
            vec![AffineMap::translation_by(Vector::from_ints(&[1, 0]))],
        )
        .unwrap();
        assert!(matches!(
            duality_check(&l, &shifted),
            Err(Error::NonlinearTransverse(0))
        ));
    }

    #[test]
    fn tower_square_for_lattice() {
        let p = Presentation::free_abelian(3);
        let rep = lattice(3);
        let (lp, lower, proj) = quotient_by_fiber(&p, &rep, 2, 2).unwrap();
        assert_eq!(lp.rank(), 2);
        assert!(check_relations(&lp, &lower).unwrap());
        assert!(square_commutes(&rep, &lower, &proj).unwrap());
        // fiber generator goes to the empty word
        assert!(proj.words[2].is_empty());
        let mut bad = rep.images().to_vec();
        let mut lin = bad[0].linear().clone();
        lin[(0, 2)] = Scalar::one();
        bad[0] = AffineMap::new(lin, bad[0].translation().clone()).unwrap();
        let bad = Representation::new(3, bad).unwrap();
        assert!(!square_commutes(&bad, &lower, &proj).unwrap());
        assert!(square_commutes(&rep, &rep, &proj).is_err());
    }

    #[test]
    fn sequential_and_parallel_balls_agree() {
        let seq = BallOptions {
            execution: Execution::Sequential,
            ..Default::default()
        };
        let par = BallOptions {
            execution: Execution::Parallel,
            ..Default::default()
        };
        let a = enumerate_ball(&free_pair(), 5, seq).unwrap();
        let b = enumerate_ball(&free_pair(), 5, par).unwrap();
        assert_eq!(a.elements(), b.elements());
        assert_eq!(a.words(), b.words());
    }
}
