//! Dimension of the orbit space of the stabilizer group on the cone of
//! concentration matrices, computed three independent ways: the blue-edge
//! deletion procedure, the closed formula through generic stabilizer
//! dimensions, and a numeric tangent-space nullity oracle. Also decides
//! transitivity through three equivalent combinatorial conditions.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::{lie_algebra_basis, max_abs};
use crate::preorder::{
    color_edges, compute_preorder, poset_pc, quotient_colored, EdgeColor, Preorder,
};
use nalgebra::{Cholesky, DMatrix};
use rand::Rng;
use serde::Serialize;

/// Default relative singular-value threshold for the numeric nullity.
pub const SVD_TOL: f64 = 1e-8;

/// Outcome of the blue-edge deletion procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeletionOutcome {
    pub dimension: usize,
    /// Red edges still present in the residual graph.
    pub surviving_red: usize,
}

/// Runs the deletion procedure with the default (ascending lexicographic)
/// blue-edge order: delete green edges, then repeatedly remove a blue edge
/// together with both endpoints and all incident blue and red edges, and
/// return `#blue − #red + #red surviving`.
pub fn orbit_dim_combinatorial(g: &Graph) -> DeletionOutcome {
    run_deletion(g, |_| 0)
}

/// Same procedure, picking each blue edge uniformly at random. The returned
/// dimension is order-independent; the residual graph need not be.
pub fn orbit_dim_combinatorial_shuffled<R: Rng>(g: &Graph, rng: &mut R) -> DeletionOutcome {
    run_deletion(g, |blues| rng.random_range(0..blues.len()))
}

fn run_deletion<F>(g: &Graph, mut pick: F) -> DeletionOutcome
where
    F: FnMut(&[(usize, usize)]) -> usize,
{
    let p = compute_preorder(g);
    let coloring = color_edges(g, &p);
    let blue_total = coloring.count(EdgeColor::Blue);
    let red_total = coloring.count(EdgeColor::Red);

    let mut alive = vec![true; g.vertex_count()];
    // Green edges are deleted up front (their endpoints stay); the loop
    // then only ever sees blue and red edges between living vertices.
    let mut blues: Vec<(usize, usize)> = Vec::new();
    let mut reds: Vec<(usize, usize)> = Vec::new();
    for (&edge, &color) in g.edges().iter().zip(coloring.colors()) {
        match color {
            EdgeColor::Blue => blues.push(edge),
            EdgeColor::Red => reds.push(edge),
            EdgeColor::Green => {}
        }
    }
    while !blues.is_empty() {
        let (i, j) = blues[pick(&blues)];
        alive[i] = false;
        alive[j] = false;
        blues.retain(|&(a, b)| alive[a] && alive[b]);
        reds.retain(|&(a, b)| alive[a] && alive[b]);
    }
    let surviving_red = reds.len();
    let dimension = blue_total + surviving_red - red_total;
    DeletionOutcome {
        dimension,
        surviving_red,
    }
}

/// The per-class deficiency values `n_ī = max{0, |ī| − Σ |j̄|}`, the sum
/// over quotient neighbors `j̄` of `ī` incomparable to `ī`.
pub fn class_deficiencies(g: &Graph) -> Vec<usize> {
    let p = compute_preorder(g);
    let q = quotient_colored(g, &p);
    let k = q.class_count();
    (0..k)
        .map(|a| {
            let ra = p.class_rep(a);
            let incomparable_mass: usize = q
                .neighbors(a)
                .filter(|&b| !p.comparable(ra, p.class_rep(b)))
                .map(|b| q.sizes()[b])
                .sum();
            q.sizes()[a].saturating_sub(incomparable_mass)
        })
        .collect()
}

fn choose2(n: usize) -> usize {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// Dimension of the stabilizer of a generic concentration matrix:
/// `Σ_ī C(n_ī, 2)`.
pub fn stabilizer_dim_formula(g: &Graph) -> usize {
    class_deficiencies(g).iter().map(|&n| choose2(n)).sum()
}

/// Orbit-space dimension through the Lie-theoretic count:
/// `dim S⁺_G − dim G⁰ + dim G⁰_K = (m + |E|) − Σ_i |↓i| + Σ_ī C(n_ī, 2)`.
pub fn orbit_dim_formula(g: &Graph) -> usize {
    let p = compute_preorder(g);
    let model_dim = g.vertex_count() + g.edge_count();
    model_dim + stabilizer_dim_formula(g) - p.pattern_dimension()
}

/// Numeric oracle for the generic stabilizer dimension: the nullity of the
/// linearized fixed-point map `A ↦ AᵀK + KA` restricted to pattern-
/// compliant `A`, by singular-value thresholding at `tol·σ_max`.
pub fn stabilizer_dim_numeric(g: &Graph, k: &DMatrix<f64>, tol: f64) -> Result<usize> {
    let m = g.vertex_count();
    if k.nrows() != m || k.ncols() != m {
        return Err(Error::InvalidInput("matrix size does not match graph".into()));
    }
    let scale = 1.0 + max_abs(k);
    for i in 0..m {
        for j in i..m {
            if (k[(i, j)] - k[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::InvalidInput("matrix is not symmetric".into()));
            }
            if i != j && !g.has_edge(i, j) && k[(i, j)].abs() > 1e-12 * scale {
                return Err(Error::InvalidInput(
                    "matrix violates the model's zero pattern".into(),
                ));
            }
        }
    }
    if Cholesky::new(k.clone()).is_none() {
        return Err(Error::InvalidInput("matrix is not positive definite".into()));
    }

    let p = compute_preorder(g);
    let basis = lie_algebra_basis(&p);
    let d = basis.len();
    let rows = m * (m + 1) / 2;
    // Column for basis element E_ij: upper triangle of (E_ij)ᵀK + K E_ij,
    // whose (a,b) entry is [a=j]·K_ib + [b=j]·K_ai.
    let mut map = DMatrix::zeros(rows, d);
    for (col, &(i, j)) in basis.iter().enumerate() {
        let mut r = 0;
        for a in 0..m {
            for b in a..m {
                let mut v = 0.0;
                if a == j {
                    v += k[(i, b)];
                }
                if b == j {
                    v += k[(a, i)];
                }
                map[(r, col)] = v;
                r += 1;
            }
        }
    }
    let svals = map.svd(false, false).singular_values;
    let smax = svals.iter().cloned().fold(0.0f64, f64::max);
    if smax == 0.0 {
        return Ok(d);
    }
    let rank = svals.iter().filter(|&&s| s > tol * smax).count();
    Ok(d - rank)
}

/// Per-condition transitivity verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TransitivityReport {
    /// Every edge joins comparable vertices (no blue edges).
    pub edges_comparable: bool,
    /// Chordal with no induced path on four vertices.
    pub decomposable_no_4chain: bool,
    /// Per connected component, the Hasse diagram of the class poset is a
    /// tree with a unique minimal class.
    pub hasse_tree_unique_minimum: bool,
    pub transitive: bool,
}

/// Evaluates the three transitivity conditions without cross-checking;
/// the verification sweep counts disagreements instead of aborting.
pub fn transitivity_conditions(g: &Graph) -> TransitivityReport {
    let p = compute_preorder(g);
    let coloring = color_edges(g, &p);
    let edges_comparable = coloring.count(EdgeColor::Blue) == 0;
    let decomposable_no_4chain = g.is_chordal() && !g.has_induced_4chain();
    let hasse_tree_unique_minimum = hasse_condition(g, &p);
    TransitivityReport {
        edges_comparable,
        decomposable_no_4chain,
        hasse_tree_unique_minimum,
        transitive: edges_comparable,
    }
}

/// Evaluates the three equivalent transitivity conditions and checks that
/// they agree.
///
/// # Panics
/// If the conditions disagree — they are provably equivalent, so a mismatch
/// is an implementation bug, not an input error.
pub fn is_transitive(g: &Graph) -> TransitivityReport {
    let report = transitivity_conditions(g);
    assert!(
        report.edges_comparable == report.decomposable_no_4chain
            && report.edges_comparable == report.hasse_tree_unique_minimum,
        "transitivity conditions disagree on edges {:?}: ({}, {}, {})",
        g.edges(),
        report.edges_comparable,
        report.decomposable_no_4chain,
        report.hasse_tree_unique_minimum
    );
    report
}

/// The Hasse diagram of the class poset restricted to each connected
/// component must be a tree with a unique minimal class. (Classes never
/// straddle components, and no comparabilities cross components.)
fn hasse_condition(g: &Graph, p: &Preorder) -> bool {
    let poset = poset_pc(p);
    for comp in g.components() {
        let classes: Vec<usize> = {
            let mut cs: Vec<usize> = comp.iter().map(|&v| p.class_of(v)).collect();
            cs.sort_unstable();
            cs.dedup();
            cs
        };
        let index_of = |c: usize| classes.binary_search(&c).unwrap();
        let covers: Vec<(usize, usize)> = poset
            .hasse_edges()
            .iter()
            .filter(|&&(a, b)| classes.binary_search(&a).is_ok() && classes.binary_search(&b).is_ok())
            .map(|&(a, b)| (index_of(a), index_of(b)))
            .collect();
        // Tree: |V| - 1 cover edges and connected.
        if covers.len() + 1 != classes.len() {
            return false;
        }
        let mut parent: Vec<usize> = (0..classes.len()).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for &(a, b) in &covers {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        let minima = classes
            .iter()
            .filter(|&&c| {
                classes
                    .iter()
                    .all(|&d| d == c || !poset.leq(d, c))
            })
            .count();
        if minima != 1 {
            return false;
        }
    }
    true
}

/// Full orbit-space summary; the cross-checked dimensions plus the edge
/// census that drives them.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub dim_combinatorial: usize,
    pub dim_formula: usize,
    /// Numeric oracle value, when requested.
    pub dim_numeric: Option<usize>,
    /// Per-class deficiency values, in class order.
    pub n_bar: Vec<usize>,
    pub blue_count: usize,
    pub green_count: usize,
    pub red_count: usize,
    pub surviving_red: usize,
    pub transitive: bool,
}

/// Assembles the orbit report. When `numeric_rng` is given, the numeric
/// stabilizer dimension is evaluated at one random generic concentration
/// matrix drawn from it.
pub fn orbit_report<R: Rng>(g: &Graph, numeric_rng: Option<&mut R>) -> Result<OrbitReport> {
    let p = compute_preorder(g);
    let coloring = color_edges(g, &p);
    let outcome = orbit_dim_combinatorial(g);
    let dim_formula = orbit_dim_formula(g);
    let dim_numeric = match numeric_rng {
        Some(rng) => {
            let k = crate::sampling::random_concentration(g, rng);
            let stab = stabilizer_dim_numeric(g, &k, SVD_TOL)?;
            Some(g.vertex_count() + g.edge_count() + stab - p.pattern_dimension())
        }
        None => None,
    };
    let transitivity = is_transitive(g);
    // The zero-dimension case is exactly the transitive case.
    assert_eq!(
        outcome.dimension == 0,
        transitivity.transitive,
        "dimension/transitivity mismatch on {:?}",
        g.edges()
    );
    Ok(OrbitReport {
        dim_combinatorial: outcome.dimension,
        dim_formula,
        dim_numeric,
        n_bar: class_deficiencies(g),
        blue_count: coloring.count(EdgeColor::Blue),
        green_count: coloring.count(EdgeColor::Green),
        red_count: coloring.count(EdgeColor::Red),
        surviving_red: outcome.surviving_red,
        transitive: transitivity.transitive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testgraphs::{bull, four_cycle, p3, path, star};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn combinatorial_examples() {
        assert_eq!(orbit_dim_combinatorial(&Graph::complete(5).unwrap()).dimension, 0);
        assert_eq!(orbit_dim_combinatorial(&p3()).dimension, 0);
        assert_eq!(orbit_dim_combinatorial(&bull()).dimension, 1);
        assert_eq!(orbit_dim_combinatorial(&four_cycle()).dimension, 4);
    }

    #[test]
    fn formula_examples() {
        assert_eq!(orbit_dim_formula(&p3()), 0);
        assert_eq!(orbit_dim_formula(&four_cycle()), 4);
        assert_eq!(orbit_dim_formula(&Graph::empty(4).unwrap()), 0);
        assert_eq!(orbit_dim_formula(&bull()), 1);
    }

    #[test]
    fn stabilizer_formula_examples() {
        // Single class of size m with no incomparable neighbors: the
        // orthogonal-group dimension.
        assert_eq!(stabilizer_dim_formula(&Graph::complete(4).unwrap()), 6);
        assert_eq!(stabilizer_dim_formula(&bull()), 0);
        // Star trees with unit classes: every term degenerates.
        assert_eq!(stabilizer_dim_formula(&star(3)), 0);
    }

    #[test]
    fn numeric_stabilizer_on_identity_complete_graph() {
        for m in 2..=4 {
            let g = Graph::complete(m).unwrap();
            let k = DMatrix::identity(m, m);
            // A ᵀ + A = 0: antisymmetric matrices.
            assert_eq!(
                stabilizer_dim_numeric(&g, &k, SVD_TOL).unwrap(),
                m * (m - 1) / 2
            );
        }
    }

    #[test]
    fn numeric_stabilizer_on_random_bull() {
        let g = bull();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let k = crate::sampling::random_concentration(&g, &mut rng);
        assert_eq!(stabilizer_dim_numeric(&g, &k, SVD_TOL).unwrap(), 0);
    }

    #[test]
    fn numeric_stabilizer_rejects_bad_input() {
        let g = p3();
        let mut k = DMatrix::identity(3, 3);
        k[(1, 2)] = 0.5;
        k[(2, 1)] = 0.5;
        assert!(stabilizer_dim_numeric(&g, &k, SVD_TOL).is_err());
        let negative = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            1.0, -1.0, 1.0,
        ]));
        assert!(stabilizer_dim_numeric(&g, &negative, SVD_TOL).is_err());
    }

    #[test]
    fn transitivity_examples() {
        assert!(is_transitive(&p3()).transitive);
        assert!(is_transitive(&Graph::complete(6).unwrap()).transitive);
        assert!(is_transitive(&Graph::empty(4).unwrap()).transitive);
        assert!(is_transitive(&star(4)).transitive);
        assert!(!is_transitive(&path(4)).transitive);
        assert!(!is_transitive(&four_cycle()).transitive);
        assert!(!is_transitive(&bull()).transitive);
        // Two disjoint edges: transitive, with a two-tree Hasse forest.
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(is_transitive(&g).transitive);
    }

    #[test]
    fn deletion_order_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for g in [bull(), four_cycle(), path(5), p3()] {
            let reference = orbit_dim_combinatorial(&g).dimension;
            for _ in 0..10 {
                assert_eq!(
                    orbit_dim_combinatorial_shuffled(&g, &mut rng).dimension,
                    reference
                );
            }
        }
    }

    #[test]
    fn report_is_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let report = orbit_report(&bull(), Some(&mut rng)).unwrap();
        assert_eq!(report.dim_combinatorial, 1);
        assert_eq!(report.dim_formula, 1);
        assert_eq!(report.dim_numeric, Some(1));
        assert_eq!(report.blue_count, 1);
        assert_eq!(report.green_count, 4);
        assert_eq!(report.red_count, 0);
        assert!(!report.transitive);
    }
}
