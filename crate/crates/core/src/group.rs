//! The matrix group stabilizing a graphical model's concentration cone:
//! the zero pattern of its continuous part, Lie-algebra index basis,
//! membership testing, the permutation/continuous decomposition, and the
//! action `g · K = g⁻ᵀ K g⁻¹` on concentration matrices.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm::{graph_automorphisms, Permutation};
use crate::preorder::Preorder;
use nalgebra::DMatrix;

/// Default tolerance for membership and pattern checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// The admissible zero pattern of the continuous stabilizer factor:
/// `allowed[i][j]` iff `j ≼ i`, so entry `(i, j)` may be nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroPattern {
    allowed: Vec<Vec<bool>>,
}

/// Builds the zero pattern from the preorder: position `(i, j)` is allowed
/// exactly when `j ≼ i`.
pub fn g0_pattern(p: &Preorder) -> ZeroPattern {
    let m = p.vertex_count();
    let allowed = (0..m)
        .map(|i| (0..m).map(|j| p.leq(j, i)).collect())
        .collect();
    ZeroPattern { allowed }
}

impl ZeroPattern {
    pub fn size(&self) -> usize {
        self.allowed.len()
    }

    pub fn is_allowed(&self, i: usize, j: usize) -> bool {
        self.allowed[i][j]
    }

    /// Number of allowed positions; the dimension of the continuous factor.
    pub fn dimension(&self) -> usize {
        self.allowed
            .iter()
            .map(|row| row.iter().filter(|&&b| b).count())
            .sum()
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.allowed
    }

    /// Does `g` vanish (within `tol`, scaled by its largest entry) at every
    /// disallowed position?
    pub fn complies(&self, g: &DMatrix<f64>, tol: f64) -> bool {
        let scale = 1.0 + max_abs(g);
        for i in 0..self.size() {
            for j in 0..self.size() {
                if !self.allowed[i][j] && g[(i, j)].abs() > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    /// Zeroes out the disallowed entries of `g`.
    pub fn project(&self, g: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(self.size(), self.size(), |i, j| {
            if self.allowed[i][j] {
                g[(i, j)]
            } else {
                0.0
            }
        })
    }
}

/// The sorted index pairs `(i, j)` with `j ≼ i`: positions of the matrix
/// units spanning the stabilizer's Lie algebra. 0-based.
pub fn lie_algebra_basis(p: &Preorder) -> Vec<(usize, usize)> {
    let m = p.vertex_count();
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if p.leq(j, i) {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()))
}

fn invert(g: &DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    g.clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular(what.into()))
}

/// The symmetric basis element of the model's linear span for a diagonal
/// position or an edge: `E_ii`, or `E_ij + E_ji`.
fn span_basis_element(m: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(m, m);
    b[(i, j)] = 1.0;
    b[(j, i)] = 1.0;
    if i == j {
        b[(i, i)] = 1.0;
    }
    b
}

/// Tests whether `g` stabilizes the model: the action `B ↦ g⁻ᵀ B g⁻¹` must
/// keep every basis element of the span (diagonal units and symmetrized
/// edge units) inside the span, i.e. produce zeros at non-edge positions.
/// An entry counts as zero if `|entry| ≤ tol·(1 + ‖g‖_∞·‖B'‖_∞)` where `B'`
/// is the transformed element.
pub fn is_in_group(g: &DMatrix<f64>, graph: &Graph, tol: f64) -> Result<bool> {
    let m = graph.vertex_count();
    if g.nrows() != m || g.ncols() != m {
        return Err(Error::InvalidInput(format!(
            "matrix is {}x{} but the graph has {m} vertices",
            g.nrows(),
            g.ncols()
        )));
    }
    let ginv = invert(g, "membership test requires an invertible matrix")?;
    let ginv_t = ginv.transpose();
    let gnorm = max_abs(g);
    let mut basis: Vec<DMatrix<f64>> = (0..m).map(|i| span_basis_element(m, i, i)).collect();
    basis.extend(
        graph
            .edges()
            .iter()
            .map(|&(i, j)| span_basis_element(m, i, j)),
    );
    for b in &basis {
        let transformed = &ginv_t * b * &ginv;
        let scale = 1.0 + gnorm * max_abs(&transformed);
        for i in 0..m {
            for j in i + 1..m {
                if !graph.has_edge(i, j) && transformed[(i, j)].abs() > tol * scale {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Splits a group member as `g = P_σ · g₀` with `σ` a graph automorphism
/// and `g₀` matching the zero pattern. Searches the (finite) automorphism
/// group in its fixed enumeration order; the first compliant split wins.
pub fn decompose(
    g: &DMatrix<f64>,
    graph: &Graph,
    tol: f64,
) -> Result<(Permutation, DMatrix<f64>)> {
    let p = crate::preorder::compute_preorder(graph);
    let pattern = g0_pattern(&p);
    let automorphisms = graph_automorphisms(graph);
    for sigma in automorphisms.elements() {
        // P_σ⁻¹ g: permutation matrices are orthogonal, so the inverse is
        // the transpose.
        let candidate = sigma.matrix().transpose() * g;
        if pattern.complies(&candidate, tol) {
            return Ok((sigma.clone(), candidate));
        }
    }
    Err(Error::NotInGroup(
        "no automorphism makes the matrix pattern-compliant".into(),
    ))
}

/// The action on concentration matrices: `g · K = g⁻ᵀ K g⁻¹`. This is the
/// concentration matrix of `g X` when `K` is the concentration matrix
/// of `X`.
pub fn act_on_concentration(g: &DMatrix<f64>, k: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let ginv = invert(g, "action requires an invertible matrix")?;
    Ok(ginv.transpose() * k * &ginv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preorder::compute_preorder;
    use crate::sampling;
    use crate::testgraphs::{bull, p3};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pattern_pairs(p: &ZeroPattern) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..p.size() {
            for j in 0..p.size() {
                if p.is_allowed(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    #[test]
    fn p3_pattern() {
        let p = compute_preorder(&p3());
        let pat = g0_pattern(&p);
        assert_eq!(
            pattern_pairs(&pat),
            vec![(0, 0), (1, 0), (1, 1), (2, 0), (2, 2)]
        );
        assert_eq!(pat.dimension(), 5);
    }

    #[test]
    fn complete_pattern_is_full() {
        let p = compute_preorder(&Graph::complete(3).unwrap());
        assert_eq!(g0_pattern(&p).dimension(), 9);
    }

    #[test]
    fn bull_pattern() {
        let p = compute_preorder(&bull());
        let pat = g0_pattern(&p);
        let off_diag: Vec<(usize, usize)> = pattern_pairs(&pat)
            .into_iter()
            .filter(|&(i, j)| i != j)
            .collect();
        assert_eq!(off_diag, vec![(2, 0), (2, 1), (3, 0), (4, 1)]);
        assert_eq!(pat.dimension(), 9);
    }

    #[test]
    fn lie_basis_p3() {
        let p = compute_preorder(&p3());
        assert_eq!(
            lie_algebra_basis(&p),
            vec![(0, 0), (1, 0), (1, 1), (2, 0), (2, 2)]
        );
        let empty = compute_preorder(&Graph::empty(4).unwrap());
        assert_eq!(lie_algebra_basis(&empty).len(), 4);
    }

    #[test]
    fn lie_basis_transitively_closed() {
        for m in 1..=5 {
            for g in crate::graph::enumerate_labeled(m) {
                let p = compute_preorder(&g);
                let basis = lie_algebra_basis(&p);
                for &(i, j) in &basis {
                    for &(k, l) in &basis {
                        if j == k && i != l {
                            assert!(basis.contains(&(i, l)), "not closed: {:?}", g.edges());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_matrices_are_members() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, -1.0, 0.5]));
        assert!(is_in_group(&d, &p3(), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn automorphism_matrices_are_members() {
        let g = p3();
        for sigma in graph_automorphisms(&g).elements() {
            assert!(is_in_group(&sigma.matrix(), &g, DEFAULT_TOL).unwrap());
        }
    }

    #[test]
    fn e12_perturbation_is_not_a_member() {
        let mut g = DMatrix::identity(3, 3);
        g[(0, 1)] = 1.0;
        assert!(!is_in_group(&g, &p3(), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let z = DMatrix::zeros(3, 3);
        assert!(is_in_group(&z, &p3(), DEFAULT_TOL).is_err());
    }

    #[test]
    fn random_pattern_matrices_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for graph in [p3(), bull()] {
            let p = compute_preorder(&graph);
            let pattern = g0_pattern(&p);
            for _ in 0..20 {
                let g0 = sampling::random_pattern_matrix(&pattern, &mut rng);
                assert!(is_in_group(&g0, &graph, DEFAULT_TOL).unwrap());
            }
        }
    }

    #[test]
    fn action_preserves_pattern_and_composes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let graph = p3();
        let p = compute_preorder(&graph);
        let pattern = g0_pattern(&p);
        for _ in 0..20 {
            let g0 = sampling::random_pattern_matrix(&pattern, &mut rng);
            let k = sampling::random_concentration(&graph, &mut rng);
            let moved = act_on_concentration(&g0, &k).unwrap();
            // Non-edge of P3 is {2,3}.
            let scale = 1.0 + max_abs(&moved);
            assert!(moved[(1, 2)].abs() <= 1e-10 * scale);
            assert!(moved[(2, 1)].abs() <= 1e-10 * scale);
        }
        // Identity acts trivially; diag(2,1,1) sends I to diag(1/4,1,1).
        let k = DMatrix::identity(3, 3);
        let id = DMatrix::identity(3, 3);
        assert_eq!(act_on_concentration(&id, &k).unwrap(), k);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 1.0, 1.0]));
        let moved = act_on_concentration(&d, &k).unwrap();
        assert!((moved[(0, 0)] - 0.25).abs() < 1e-15);
        assert!((moved[(1, 1)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pattern_matrices_closed_under_product_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for graph in [p3(), bull()] {
            let p = compute_preorder(&graph);
            let pattern = g0_pattern(&p);
            for _ in 0..10 {
                let a = sampling::random_pattern_matrix(&pattern, &mut rng);
                let b = sampling::random_pattern_matrix(&pattern, &mut rng);
                assert!(pattern.complies(&(&a * &b), 1e-10));
                let inv = a.clone().try_inverse().unwrap();
                assert!(pattern.complies(&inv, 1e-8));
            }
        }
    }

    #[test]
    fn decompose_pattern_member_yields_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let graph = p3();
        let p = compute_preorder(&graph);
        let pattern = g0_pattern(&p);
        let g0 = sampling::random_pattern_matrix(&pattern, &mut rng);
        let (sigma, part) = decompose(&g0, &graph, DEFAULT_TOL).unwrap();
        assert!(sigma.is_identity());
        assert!((part - g0).abs().max() < 1e-12);
    }

    #[test]
    fn decompose_permutation_times_diagonal() {
        let graph = bull();
        let sigma = Permutation::from_images(vec![1, 0, 2, 4, 3]).unwrap();
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            1.0, 2.0, 3.0, 4.0, 5.0,
        ]));
        let g = sigma.matrix() * &d;
        let (found, g0) = decompose(&g, &graph, DEFAULT_TOL).unwrap();
        // Bull classes are singletons, so the split is unique.
        assert_eq!(found, sigma);
        assert!((&found.matrix() * &g0 - &g).abs().max() < 1e-12);
        assert!((g0 - d).abs().max() < 1e-12);
    }

    #[test]
    fn decompose_recomposes_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for graph in [p3(), bull()] {
            let p = compute_preorder(&graph);
            let pattern = g0_pattern(&p);
            let auts = graph_automorphisms(&graph);
            for sigma in auts.elements() {
                let g0 = sampling::random_pattern_matrix(&pattern, &mut rng);
                let g = sigma.matrix() * &g0;
                let (tau, h0) = decompose(&g, &graph, DEFAULT_TOL).unwrap();
                let recomposed = tau.matrix() * h0;
                let scale = max_abs(&g);
                assert!((recomposed - &g).abs().max() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn decompose_rejects_non_members() {
        let mut g = DMatrix::identity(3, 3);
        g[(0, 1)] = 1.0;
        assert!(decompose(&g, &p3(), DEFAULT_TOL).is_err());
    }
}
