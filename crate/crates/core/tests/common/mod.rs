//! Oracles that recompute library results by unrelated, deliberately naive
//! means. Shared by the integration tests and the acceptance target.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use flatleaf::holonomy::{Presentation, Representation, Word};
use flatleaf::linalg::{span_rank, Matrix, Vector};
use flatleaf::{AffineMap, Scalar};

/// `|B(n)|` for `ℤᵏ` with the standard generators, by BFS on integer points.
pub fn lattice_ball_sizes(k: usize, radius: usize) -> Vec<usize> {
    let origin = vec![0i64; k];
    let mut seen: HashSet<Vec<i64>> = HashSet::from([origin.clone()]);
    let mut frontier = vec![origin];
    let mut sizes = vec![1];
    for _ in 0..radius {
        let mut next = Vec::new();
        for p in &frontier {
            for i in 0..k {
                for step in [-1, 1] {
                    let mut q = p.clone();
                    q[i] += step;
                    if seen.insert(q.clone()) {
                        next.push(q);
                    }
                }
            }
        }
        sizes.push(seen.len());
        frontier = next;
    }
    sizes
}

/// Number of reduced words of length `≤ n` in a free group of rank 2.
pub fn free_group_ball_size(n: u32) -> usize {
    // 1 + Σ_{j=1}^{n} 4·3^{j−1}
    1 + (1..=n).map(|j| 4 * 3usize.pow(j - 1)).sum::<usize>()
}

/// Sanov's free pair in `SL(2, ℤ)`.
pub fn free_pair() -> Representation {
    Representation::new(
        2,
        vec![
            AffineMap::linear_map(Matrix::from_ints(&[&[1, 2], &[0, 1]])).unwrap(),
            AffineMap::linear_map(Matrix::from_ints(&[&[1, 0], &[2, 1]])).unwrap(),
        ],
    )
    .unwrap()
}

/// `(ρ(w), c(w))` by composing the affine maps `x ↦ ρ(g)x + c(g)` letter by
/// letter, written out with bare matrix arithmetic.
pub fn naive_word_value(mats: &[Matrix], values: &[Vector], w: &Word) -> (Matrix, Vector) {
    let m = values
        .first()
        .map_or(mats.first().map_or(0, Matrix::rows), Vector::len);
    let mut lin = Matrix::identity(m);
    let mut tr = Vector::zeros(m);
    for l in w.letters() {
        let (a, c) = if l.inverse {
            let inv = mats[l.generator].inverse().unwrap();
            let c = -&inv.mul_vec(&values[l.generator]);
            (inv, c)
        } else {
            (mats[l.generator].clone(), values[l.generator].clone())
        };
        // (lin, tr) ∘ (a, c)
        tr = &tr + &lin.mul_vec(&c);
        lin = &lin * &a;
    }
    (lin, tr)
}

/// Matrix of the linear map `c ↦ (c(r))_r` built column by column from unit
/// cochains, one affine-composition evaluation per column.
pub fn naive_constraints(p: &Presentation, mats: &[Matrix], m: usize) -> Matrix {
    let k = mats.len();
    let rows = p.relators().len() * m;
    let mut a = Matrix::zeros(rows, k * m);
    for col in 0..k * m {
        let values: Vec<Vector> = (0..k)
            .map(|g| {
                let mut v = Vector::zeros(m);
                if col / m == g {
                    v[col % m] = Scalar::one();
                }
                v
            })
            .collect();
        for (r, w) in p.relators().iter().enumerate() {
            let (_, value) = naive_word_value(mats, &values, w);
            for i in 0..m {
                a[(r * m + i, col)] = value[i].clone();
            }
        }
    }
    a
}

/// `(dim Z¹, dim B¹, dim H¹)` from the naive constraint system.
pub fn naive_h1(p: &Presentation, mats: &[Matrix], m: usize) -> (usize, usize, usize) {
    let k = mats.len();
    let dim_z = k * m
        - if p.relators().is_empty() {
            0
        } else {
            naive_constraints(p, mats, m).rank()
        };
    let coboundaries: Vec<Vector> = (0..m)
        .map(|i| {
            let e = Vector::unit(m, i);
            Vector::new(
                mats.iter()
                    .flat_map(|a| (&a.mul_vec(&e) - &e).into_entries())
                    .collect(),
            )
        })
        .collect();
    let dim_b = span_rank(k * m, &coboundaries);
    (dim_z, dim_b, dim_z - dim_b)
}

/// Kernel of the naive constraints, as flattened cochains.
pub fn naive_cocycles(p: &Presentation, mats: &[Matrix], m: usize) -> Vec<Vector> {
    let k = mats.len();
    if p.relators().is_empty() {
        return (0..k * m).map(|i| Vector::unit(k * m, i)).collect();
    }
    naive_constraints(p, mats, m).kernel()
}

/// Whether two families span the same subspace of `K^n`.
pub fn same_span(n: usize, a: &[Vector], b: &[Vector]) -> bool {
    let joint: Vec<Vector> = a.iter().chain(b).cloned().collect();
    let r = span_rank(n, &joint);
    r == span_rank(n, a) && r == span_rank(n, b)
}

/// `n × n` upper Jordan block with eigenvalue 1.
pub fn jordan(n: usize) -> Matrix {
    let mut j = Matrix::identity(n);
    for i in 0..n.saturating_sub(1) {
        j[(i, i + 1)] = Scalar::one();
    }
    j
}

/// BFS distinct group elements of word length `≤ radius`, keyed by the
/// affine map itself.
pub fn naive_ball(rep: &Representation, radius: usize) -> Vec<AffineMap> {
    let mut letters = Vec::new();
    for f in rep.images() {
        letters.push(f.clone());
        letters.push(f.inverse().unwrap());
    }
    let id = AffineMap::identity(rep.dim());
    let mut seen: HashSet<AffineMap> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([(id.clone(), 0usize)]);
    let mut out = vec![id];
    while let Some((f, d)) = queue.pop_front() {
        if d == radius {
            continue;
        }
        for g in &letters {
            let h = f.compose(g).unwrap();
            if seen.insert(h.clone()) {
                out.push(h.clone());
                queue.push_back((h, d + 1));
            }
        }
    }
    out
}
