mod common;

use common::{jordan, naive_cocycles, naive_h1, naive_word_value, same_span};
use flatleaf::catalog;
use flatleaf::cohomology::{
    classify_germs, classify_germs_with, coboundary_space, cocycle_space, d0_star,
    evaluate_cocycle, h1, include_degree_one, is_cocycle, radiance_obstruction, Cocycle, GermFiber,
    LinearAction,
};
use flatleaf::holonomy::{contragredient, Letter, Presentation, Representation, Word};
use flatleaf::jets::jet_action;
use flatleaf::linalg::{Matrix, Vector};
use flatleaf::{AffineMap, Scalar};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn z() -> Presentation {
    Presentation::parse(&["g"], &[]).unwrap()
}

/// Presentations and actions covered by the oracle comparison.
fn oracle_cases() -> Vec<(String, Presentation, Vec<Matrix>)> {
    let nil = catalog::nilpotent_t4();
    let np = nil.presentation.clone();
    let holonomy = nil.representation.linear_parts();
    let mut cases = Vec::new();
    for m in 1..=6 {
        cases.push((format!("Z trivial {m}"), z(), vec![Matrix::identity(m)]));
        cases.push((format!("Z unipotent {m}"), z(), vec![jordan(m)]));
        cases.push((
            format!("Z2 trivial {m}"),
            Presentation::free_abelian(2),
            vec![Matrix::identity(m); 2],
        ));
        let j = jordan(m);
        cases.push((
            format!("Z2 unipotent {m}"),
            Presentation::free_abelian(2),
            vec![j.clone(), &j * &j],
        ));
        cases.push((
            format!("T4 trivial {m}"),
            np.clone(),
            vec![Matrix::identity(m); 4],
        ));
        let id = Matrix::identity(m);
        cases.push((
            format!("T4 unipotent {m}"),
            np.clone(),
            vec![id.clone(), j.clone(), id, &j * &j],
        ));
    }
    cases.push(("T4 holonomy".into(), np.clone(), holonomy.clone()));
    let dual: Vec<Matrix> = holonomy
        .iter()
        .map(|a| a.inverse().unwrap().transpose())
        .collect();
    cases.push(("T4 contragredient".into(), np.clone(), dual));
    for extra in 1..=2 {
        let padded = holonomy
            .iter()
            .map(|a| a.block_diagonal(&Matrix::identity(extra)))
            .collect();
        cases.push((format!("T4 holonomy + {extra}"), np.clone(), padded));
    }
    cases
}

#[test]
fn cocycle_space_matches_naive_solver() {
    for (name, p, mats) in oracle_cases() {
        let m = mats[0].rows();
        let action = LinearAction::new(m, mats.clone()).unwrap();
        let ours: Vec<Vector> = cocycle_space(&p, &action)
            .unwrap()
            .iter()
            .map(Cocycle::flatten)
            .collect();
        let naive = naive_cocycles(&p, &mats, m);
        assert_eq!(ours.len(), naive.len(), "{name}");
        assert!(same_span(p.rank() * m, &ours, &naive), "{name}");
        let report = h1(&p, &action).unwrap();
        assert_eq!(
            (report.dim_z(), report.dim_b(), report.dim_h()),
            naive_h1(&p, &mats, m),
            "{name}"
        );
    }
}

#[test]
fn known_dimensions() {
    let trivial = LinearAction::trivial(2, 2);
    assert_eq!(
        h1(&Presentation::free_abelian(2), &trivial)
            .unwrap()
            .dim_h(),
        4
    );
    let doubling = LinearAction::new(1, vec![Matrix::from_ints(&[&[2]])]).unwrap();
    assert_eq!(h1(&z(), &doubling).unwrap().dim_h(), 0);
}

fn random_word(rng: &mut StdRng, rank: usize, len: usize) -> Word {
    Word::new(
        (0..len)
            .map(|_| Letter::new(rng.gen_range(0..rank), rng.gen_bool(0.5)))
            .collect(),
    )
}

/// `u` with a relator (or its inverse, or a cancelling pair) spliced in.
fn equivalent_word(rng: &mut StdRng, p: &Presentation, u: &Word) -> Word {
    let at = rng.gen_range(0..=u.len());
    let insert = match rng.gen_range(0..3) {
        0 => p.relators()[rng.gen_range(0..p.relators().len())].clone(),
        1 => p.relators()[rng.gen_range(0..p.relators().len())].inverse(),
        _ => {
            let g = Word::power(rng.gen_range(0..p.rank()), 1);
            g.concat(&g.inverse())
        }
    };
    let (head, tail) = u.letters().split_at(at);
    Word::new(head.to_vec())
        .concat(&insert)
        .concat(&Word::new(tail.to_vec()))
}

#[test]
fn cocycles_are_well_defined_on_group_elements() {
    let mut rng = StdRng::seed_from_u64(7);
    for (name, p, mats) in oracle_cases()
        .into_iter()
        .filter(|(_, p, _)| !p.relators().is_empty())
    {
        let m = mats[0].rows();
        let action = LinearAction::new(m, mats).unwrap();
        for c in cocycle_space(&p, &action).unwrap().iter().take(3) {
            for _ in 0..50 {
                let len = rng.gen_range(0..8);
                let u = random_word(&mut rng, p.rank(), len);
                let mut v = equivalent_word(&mut rng, &p, &u);
                v = equivalent_word(&mut rng, &p, &v);
                assert_eq!(
                    evaluate_cocycle(&action, c, &u).unwrap(),
                    evaluate_cocycle(&action, c, &v).unwrap(),
                    "{name}"
                );
            }
        }
    }
}

#[test]
fn fox_expansion_agrees_with_affine_composition() {
    let mut rng = StdRng::seed_from_u64(11);
    let nil = catalog::nilpotent_t4();
    let mats = nil.representation.linear_parts();
    let action = LinearAction::new(4, mats.clone()).unwrap();
    for c in cocycle_space(&nil.presentation, &action).unwrap() {
        for _ in 0..20 {
            let len = rng.gen_range(0..10);
            let w = random_word(&mut rng, 4, len);
            let (_, expected) = naive_word_value(&mats, c.values(), &w);
            assert_eq!(evaluate_cocycle(&action, &c, &w).unwrap(), expected);
        }
    }
}

/// Random affine map with unimodular integer linear part.
fn random_conjugator(rng: &mut StdRng, n: usize) -> AffineMap {
    let mut l = Matrix::identity(n);
    for _ in 0..6 {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let mut e = Matrix::identity(n);
            e[(i, j)] = Scalar::int(rng.gen_range(-2..=2));
            l = &l * &e;
        }
    }
    let t = Vector::new(
        (0..n)
            .map(|_| Scalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
            .collect(),
    );
    AffineMap::new(l, t).unwrap()
}

#[test]
fn radiance_class_is_conjugation_invariant() {
    let mut rng = StdRng::seed_from_u64(3);
    for m in [
        catalog::nilpotent_t4(),
        catalog::hgroup_torus(),
        catalog::flat_t4(),
        catalog::half_compact_t4(),
    ] {
        let (p, rep) = (&m.presentation, &m.representation);
        let report = h1(p, &LinearAction::linear_parts(rep)).unwrap();
        let base = radiance_obstruction(p, rep).unwrap();
        for _ in 0..10 {
            let g = random_conjugator(&mut rng, rep.dim());
            let conj = rep.conjugate_by(&g).unwrap();
            let moved = radiance_obstruction(p, &conj).unwrap();
            assert_eq!(moved.is_radiant, base.is_radiant);
            // pull the conjugated translations back through the linear part of g
            let back = g.linear().inverse().unwrap();
            let pulled = Cocycle::new(
                moved
                    .cocycle
                    .values()
                    .iter()
                    .map(|v| back.mul_vec(v))
                    .collect(),
            );
            assert_eq!(report.class_of(&pulled).unwrap(), base.class, "{}", m.name);
            let diff = Cocycle::new(
                pulled
                    .values()
                    .iter()
                    .zip(base.cocycle.values())
                    .map(|(a, b)| a - b)
                    .collect(),
            );
            assert!(report.is_coboundary(&diff));
        }
    }
}

#[test]
fn radiance_examples() {
    for k in 1..=4 {
        let lattice = Representation::new(
            k,
            (0..k)
                .map(|i| AffineMap::translation_by(Vector::unit(k, i)))
                .collect(),
        )
        .unwrap();
        assert!(
            !radiance_obstruction(&Presentation::free_abelian(k), &lattice)
                .unwrap()
                .is_radiant
        );
    }
    let h = catalog::hgroup_torus();
    assert!(
        !radiance_obstruction(&h.presentation, &h.representation)
            .unwrap()
            .is_radiant
    );
    let nil = catalog::nilpotent_t4();
    let linear = Representation::new(
        4,
        nil.representation
            .linear_parts()
            .into_iter()
            .map(|a| AffineMap::linear_map(a).unwrap())
            .collect(),
    )
    .unwrap();
    let r = radiance_obstruction(&nil.presentation, &linear).unwrap();
    assert!(r.is_radiant);
    assert!(r.class.is_zero());
}

#[test]
fn d0_star_inverts_degree_one_inclusion() {
    let mut rng = StdRng::seed_from_u64(5);
    let nil = catalog::nilpotent_t4();
    let p = &nil.presentation;
    let transverse = LinearAction::linear_parts(&contragredient(&nil.representation).unwrap());
    let (module, jets) = jet_action(&transverse, 2).unwrap();
    let degree_one = LinearAction::new(
        4,
        jets.matrices()
            .iter()
            .map(|a| {
                Matrix::from_rows(
                    (0..4)
                        .map(|i| (0..4).map(|j| a[(i, j)].clone()).collect())
                        .collect(),
                )
                .unwrap()
            })
            .collect(),
    )
    .unwrap();
    // the degree-one block is the linear holonomy itself
    assert_eq!(
        degree_one.matrices(),
        nil.representation.linear_parts().as_slice()
    );
    let basis = cocycle_space(p, &degree_one).unwrap();
    for _ in 0..20 {
        let c = basis.iter().fold(Cocycle::zero(4, 4), |acc, b| {
            let s = Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4));
            Cocycle::new(
                acc.values()
                    .iter()
                    .zip(b.values())
                    .map(|(x, y)| x + &y.scale(&s))
                    .collect(),
            )
        });
        assert!(is_cocycle(p, &degree_one, &c).unwrap());
        let lifted = include_degree_one(&module, &c);
        assert!(is_cocycle(p, &jets, &lifted).unwrap());
        assert_eq!(d0_star(p, &module, &jets, &lifted).unwrap(), c);
    }
    // truncations of genuine jet cocycles satisfy the degree-one law
    for z in cocycle_space(p, &jets).unwrap() {
        let t = d0_star(p, &module, &jets, &z).unwrap();
        assert!(is_cocycle(p, &degree_one, &t).unwrap());
    }
}

/// Fiber dimension over the flat circle by solving the two blocks by hand:
/// cocycles of `ℤ` are arbitrary, `B¹ = 0`, so the fiber is
/// `{(a, b) : a = target}` in `K·x ⊕ K·x²`.
#[test]
fn flat_circle_matches_two_block_solve() {
    let rep =
        Representation::new(1, vec![AffineMap::translation_by(Vector::from_ints(&[1]))]).unwrap();
    let action = LinearAction::trivial(1, 1);
    let (_, jets) = jet_action(&action, 2).unwrap();
    let z1 = cocycle_space(&z(), &jets).unwrap();
    let b1 = coboundary_space(&jets);
    let constrained: Vec<_> = z1.iter().filter(|c| c.values()[0][0].is_zero()).collect();
    let brute = constrained.len() - b1.len();
    match classify_germs(&z(), &rep, 2).unwrap() {
        GermFiber::Fiber {
            dimension,
            representative,
        } => {
            assert_eq!(dimension, brute);
            assert_eq!(dimension, 1);
            assert_eq!(representative.values()[0][0], Scalar::one());
        }
        GermFiber::Empty => panic!("flat circle has germs"),
    }
}

#[test]
fn infeasible_target_is_empty() {
    let p = Presentation::parse(&["a", "b"], &["a b^-1"]).unwrap();
    let two = AffineMap::linear_map(Matrix::from_ints(&[&[2]])).unwrap();
    let rep = Representation::new(1, vec![two.clone(), two]).unwrap();
    let transverse = contragredient(&rep).unwrap();
    let target = Cocycle::new(vec![Vector::from_ints(&[1]), Vector::from_ints(&[0])]);
    assert_eq!(
        classify_germs_with(&p, &rep, &transverse, 2, Some(&target)).unwrap(),
        GermFiber::Empty
    );
    assert!(matches!(
        classify_germs_with(&p, &rep, &transverse, 2, None).unwrap(),
        GermFiber::Fiber { .. }
    ));
}

#[test]
fn catalog_germ_fibers_are_nonempty() {
    for m in catalog::catalog() {
        let fiber = classify_germs(&m.presentation, &m.representation, 2).unwrap();
        assert!(matches!(fiber, GermFiber::Fiber { .. }), "{}", m.name);
    }
}

fn unipotent_upper(entries: &[i64], n: usize) -> Matrix {
    let mut a = Matrix::identity(n);
    let mut it = entries.iter();
    for i in 0..n {
        for j in i + 1..n {
            a[(i, j)] = Scalar::int(*it.next().unwrap_or(&0));
        }
    }
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Powers of one unipotent matrix commute, so they give a `ℤ²` action.
    #[test]
    fn coboundaries_are_cocycles(entries in prop::collection::vec(-3i64..=3, 6), n in 1usize..=4, e in 1u32..=3) {
        let a = unipotent_upper(&entries, n);
        let mut b = Matrix::identity(n);
        for _ in 0..e {
            b = &b * &a;
        }
        let p = Presentation::free_abelian(2);
        let action = LinearAction::new(n, vec![a, b]).unwrap();
        let report = h1(&p, &action).unwrap();
        for c in &report.coboundaries {
            prop_assert!(is_cocycle(&p, &action, c).unwrap());
            prop_assert!(report.is_coboundary(c));
        }
        prop_assert_eq!(report.dim_h(), report.dim_z() - report.dim_b());
    }
}
