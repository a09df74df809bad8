//! The affine cross-section of generic continuous-factor orbits on the
//! sample space, and the unique reduction of a generic sample into it.
//!
//! The column map `f` is built inductively up a linear extension of the
//! class poset: each class gets the smallest columns not used by its strict
//! down set, which makes `f` invariant under the lifted quotient
//! automorphisms. Where a down set contains incomparable classes (graphs
//! with blue edges), `f` alone underdetermines the reduction; each class
//! then also pins a canonical set of extra zero columns so that every
//! class solves a square system and the reduced point is a true orbit
//! invariant.

use super::{numeric_rank, one_based, GENERICITY_TOL};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::preorder::{compute_preorder, poset_pc, Preorder};
use nalgebra::{DMatrix, DVector};
use std::collections::BTreeSet;

/// The column-assignment map `f : [m] → [n]` together with, per class, the
/// full ordered column set against which its rows are eliminated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceMap {
    n: usize,
    /// `f[v]` = 0-based column assigned to vertex `v`.
    f: Vec<usize>,
    /// Per class: the `|↓i|` columns pivoting its row block, sorted; the
    /// columns `f(↓i)` followed by the canonical extra zero columns.
    class_cols: Vec<Vec<usize>>,
    /// Linear extension in which classes are processed.
    order: Vec<usize>,
}

impl SliceMap {
    pub fn sample_size(&self) -> usize {
        self.n
    }

    /// 0-based assigned column of vertex `v`.
    pub fn column_of(&self, v: usize) -> usize {
        self.f[v]
    }

    pub fn columns(&self) -> &[usize] {
        &self.f
    }

    pub fn class_columns(&self, class: usize) -> &[usize] {
        &self.class_cols[class]
    }

    /// Is `x` inside the slice (within `tol`)? The row block of every class
    /// must be the indicator of its assigned columns across the class's
    /// pivot columns.
    pub fn contains(&self, p: &Preorder, x: &DMatrix<f64>, tol: f64) -> bool {
        let scale = 1.0 + crate::group::max_abs(x);
        for (c, members) in p.classes().iter().enumerate() {
            for &r in members {
                for &col in &self.class_cols[c] {
                    let want = if col == self.f[r] { 1.0 } else { 0.0 };
                    if (x[(r, col)] - want).abs() > tol * scale {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Builds the slice map for sample size `n ≥ max|↓i|`.
pub fn build_slice_map(g: &Graph, n: usize) -> Result<SliceMap> {
    let p = compute_preorder(g);
    build_slice_map_from(&p, n)
}

pub(crate) fn build_slice_map_from(p: &Preorder, n: usize) -> Result<SliceMap> {
    let q = p.max_down_set_size();
    if n < q {
        return Err(Error::SampleTooSmall { n, min: q });
    }
    let poset = poset_pc(p);
    let order = poset.linear_extension();
    let m = p.vertex_count();
    let mut f = vec![usize::MAX; m];
    for &c in &order {
        let members = &p.classes()[c];
        let rep = members[0];
        let used: BTreeSet<usize> = p
            .down_set(rep)
            .iter()
            .filter(|v| !members.contains(v))
            .map(|&v| f[v])
            .collect();
        let mut avail = (0..n).filter(|col| !used.contains(col));
        for &v in members {
            f[v] = avail.next().expect("n >= |down set| guarantees a free column");
        }
    }
    let mut class_cols = Vec::with_capacity(p.class_count());
    for c in 0..p.class_count() {
        let rep = p.class_rep(c);
        let d = p.down_set(rep);
        let assigned: BTreeSet<usize> = d.iter().map(|&v| f[v]).collect();
        let mut cols: Vec<usize> = assigned.iter().copied().collect();
        let mut extra = (0..n).filter(|col| !assigned.contains(col));
        while cols.len() < d.len() {
            cols.push(extra.next().expect("n >= |down set| guarantees spare columns"));
        }
        class_cols.push(cols);
    }
    Ok(SliceMap {
        n,
        f,
        class_cols,
        order,
    })
}

/// Reduces a generic sample into the slice: returns the unique
/// pattern-compliant `g₀` with `g₀ x` in the slice, together with the
/// reduced sample.
pub fn reduce_to_slice(g: &Graph, x: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let p = compute_preorder(g);
    let map = build_slice_map_from(&p, x.ncols())?;
    reduce_with(&p, &map, x)
}

pub(crate) fn reduce_with(
    p: &Preorder,
    map: &SliceMap,
    x: &DMatrix<f64>,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let m = p.vertex_count();
    if x.nrows() != m {
        return Err(Error::InvalidInput("sample row count does not match graph".into()));
    }
    let mut g0 = DMatrix::zeros(m, m);
    for &c in &map.order {
        let rep = p.class_rep(c);
        let d = p.down_set(rep);
        let cols = &map.class_cols[c];
        // Square pivot block x[↓i, cols], one linear system per class row.
        let pivot = DMatrix::from_fn(d.len(), d.len(), |a, b| x[(d[a], cols[b])]);
        if numeric_rank(&pivot, GENERICITY_TOL) < d.len() {
            return Err(Error::DegenerateSample(format!(
                "slice pivot block of down set {:?} is singular",
                one_based(d)
            )));
        }
        let lu = pivot.transpose().lu();
        for &r in &p.classes()[c] {
            let target = DVector::from_fn(d.len(), |b, _| {
                if cols[b] == map.column_of(r) {
                    1.0
                } else {
                    0.0
                }
            });
            let solution = lu.solve(&target).ok_or_else(|| {
                Error::DegenerateSample(format!(
                    "slice pivot block of down set {:?} is singular",
                    one_based(d)
                ))
            })?;
            for (a, &v) in d.iter().enumerate() {
                g0[(r, v)] = solution[a];
            }
        }
    }
    let reduced = &g0 * x;
    Ok((g0, reduced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::group::g0_pattern;
    use crate::sampling;
    use crate::testgraphs::{bull, p3};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn p3_column_map() {
        let map = build_slice_map(&p3(), 4).unwrap();
        assert_eq!(map.columns(), &[0, 1, 1]);
        // Down sets are chains: no extra columns beyond f(↓i).
        assert_eq!(map.class_columns(0), &[0]);
        assert_eq!(map.class_columns(1), &[0, 1]);
        assert_eq!(map.class_columns(2), &[0, 1]);
    }

    #[test]
    fn complete_graph_column_map_is_identity() {
        let g = Graph::complete(4).unwrap();
        let map = build_slice_map(&g, 4).unwrap();
        assert_eq!(map.columns(), &[0, 1, 2, 3]);
    }

    #[test]
    fn bull_column_map() {
        let map = build_slice_map(&bull(), 3).unwrap();
        // Tracing the induction: 1 and 2 have trivial strict down sets, so
        // both take column 1; 3, 4, 5 sit above them and take column 2.
        assert_eq!(map.columns(), &[0, 0, 1, 1, 1]);
        // The down set {1,2,3} has a repeated column, so class 3 pins the
        // extra zero column 3.
        assert_eq!(map.class_columns(2), &[0, 1, 2]);
        assert_eq!(map.class_columns(3), &[0, 1]);
    }

    #[test]
    fn column_map_is_invariant_under_lifted_automorphisms() {
        for g in [p3(), bull(), crate::testgraphs::star(3)] {
            let p = compute_preorder(&g);
            let q = crate::preorder::quotient_colored(&g, &p);
            let lifted = crate::perm::lifted_quotient_group(&p, &q);
            let map = build_slice_map(&g, 6).unwrap();
            for sigma in lifted.elements() {
                for v in 0..g.vertex_count() {
                    assert_eq!(map.column_of(sigma.apply(v)), map.column_of(v));
                }
            }
        }
    }

    #[test]
    fn requires_minimum_sample_size() {
        assert!(build_slice_map(&bull(), 2).is_err());
        assert!(build_slice_map(&bull(), 3).is_ok());
    }

    #[test]
    fn reduce_p3_has_displayed_shape() {
        let g = p3();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let x = sampling::random_sample(3, 5, &mut rng);
        let (g0, xl) = reduce_to_slice(&g, &x).unwrap();
        let p = compute_preorder(&g);
        assert!(g0_pattern(&p).complies(&g0, 1e-12));
        // Reduced shape: column 1 = (1,0,0), column 2 = (*,1,1).
        assert!((xl[(0, 0)] - 1.0).abs() < 1e-10);
        assert!(xl[(1, 0)].abs() < 1e-10);
        assert!(xl[(2, 0)].abs() < 1e-10);
        assert!((xl[(1, 1)] - 1.0).abs() < 1e-10);
        assert!((xl[(2, 1)] - 1.0).abs() < 1e-10);
        let map = build_slice_map(&g, 5).unwrap();
        assert!(map.contains(&p, &xl, 1e-9));
    }

    #[test]
    fn reduce_fixes_slice_points() {
        let g = bull();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let x = sampling::random_sample(5, 4, &mut rng);
        let (_, xl) = reduce_to_slice(&g, &x).unwrap();
        let (h, yl) = reduce_to_slice(&g, &xl).unwrap();
        assert!((h - DMatrix::<f64>::identity(5, 5)).abs().max() < 1e-9);
        assert!((yl - &xl).abs().max() < 1e-9);
    }

    #[test]
    fn reduction_is_orbit_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for g in [p3(), bull(), crate::testgraphs::four_cycle()] {
            let p = compute_preorder(&g);
            let pattern = g0_pattern(&p);
            let n = p.max_down_set_size() + 2;
            for _ in 0..10 {
                let x = sampling::random_sample(g.vertex_count(), n, &mut rng);
                let g0 = sampling::random_pattern_matrix(&pattern, &mut rng);
                let (_, xl) = reduce_to_slice(&g, &x).unwrap();
                let (_, yl) = reduce_to_slice(&g, &(&g0 * &x)).unwrap();
                let scale = 1.0 + xl.abs().max();
                assert!(
                    (&yl - &xl).abs().max() <= 1e-8 * scale,
                    "orbit reduction differs on {:?}",
                    g.edges()
                );
            }
        }
    }

    #[test]
    fn reduction_rejects_degenerate_samples() {
        let g = p3();
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 1.0, 2.0, 2.0, 3.0, 4.0]);
        assert!(reduce_to_slice(&g, &x).unwrap_err().is_degenerate_sample());
    }
}
