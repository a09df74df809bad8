//! Closed-form maximum-likelihood estimation of the concentration matrix
//! for decomposable models: padded inverses of clique marginal covariances
//! minus separator terms along a junction forest.

use super::ConcentrationMatrix;
use crate::error::{Error, Result};
use crate::graph::Graph;
use nalgebra::{Cholesky, DMatrix};

/// The maximum-likelihood concentration matrix of a chordal model.
///
/// `K̂ = Σ_C [(Σ̂_C)⁻¹]⁰ − Σ_S [(Σ̂_S)⁻¹]⁰` with `Σ̂ = x xᵀ / n`, cliques `C`
/// and separators `S` (with multiplicity) from a junction forest. The
/// matching conditions hold: `K̂⁻¹` agrees with `Σ̂` on the diagonal and on
/// edges, and `K̂` vanishes on non-edges.
pub fn mle_decomposable(g: &Graph, x: &DMatrix<f64>, tol: f64) -> Result<ConcentrationMatrix> {
    if !g.is_chordal() {
        return Err(Error::NotChordal);
    }
    let m = g.vertex_count();
    if x.nrows() != m {
        return Err(Error::InvalidInput("sample row count does not match graph".into()));
    }
    let n = x.ncols();
    let cliques = g.maximal_cliques();
    let largest = cliques.iter().map(Vec::len).max().unwrap_or(0);
    if n < largest {
        return Err(Error::SampleTooSmall { n, min: largest });
    }
    let cov = (x * x.transpose()) / n as f64;

    let mut k = DMatrix::zeros(m, m);
    for clique in &cliques {
        accumulate(&mut k, &cov, clique, 1.0)?;
    }
    for sep in junction_separators(&cliques) {
        accumulate(&mut k, &cov, &sep, -1.0)?;
    }
    // Zeros at non-edges are exact by construction; positive definiteness
    // still deserves a check against numerically marginal samples.
    ConcentrationMatrix::new(k, g, tol)
        .map_err(|e| Error::DegenerateSample(format!("estimated matrix invalid: {e}")))
}

fn accumulate(k: &mut DMatrix<f64>, cov: &DMatrix<f64>, idx: &[usize], sign: f64) -> Result<()> {
    let sub = DMatrix::from_fn(idx.len(), idx.len(), |a, b| cov[(idx[a], idx[b])]);
    let chol = Cholesky::new(sub).ok_or_else(|| {
        Error::DegenerateSample(format!(
            "marginal covariance on {:?} is singular",
            super::one_based(idx)
        ))
    })?;
    let inv = chol.inverse();
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            k[(i, j)] += sign * inv[(a, b)];
        }
    }
    Ok(())
}

/// Separators (with multiplicity) of a maximum-weight junction forest over
/// the clique intersection graph, built with Kruskal's rule. For chordal
/// graphs a maximum-weight spanning forest is a junction forest.
fn junction_separators(cliques: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let k = cliques.len();
    let mut candidates = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            let inter: Vec<usize> = cliques[a]
                .iter()
                .copied()
                .filter(|v| cliques[b].contains(v))
                .collect();
            if !inter.is_empty() {
                candidates.push((inter.len(), a, b, inter));
            }
        }
    }
    // Stable order: by descending weight, then clique indices.
    candidates.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut Vec<usize>, v: usize) -> usize {
        if parent[v] != v {
            let root = find(parent, parent[v]);
            parent[v] = root;
        }
        parent[v]
    }
    let mut separators = Vec::new();
    for (_, a, b, inter) in candidates {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            separators.push(inter);
        }
    }
    separators
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use crate::testgraphs::{bull, four_cycle, p3, path};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn matching_conditions_hold(g: &Graph, x: &DMatrix<f64>, k: &DMatrix<f64>, tol: f64) {
        let n = x.ncols() as f64;
        let cov = (x * x.transpose()) / n;
        let sigma = k.clone().try_inverse().unwrap();
        let m = g.vertex_count();
        let scale = 1.0 + cov.abs().max();
        for i in 0..m {
            for j in i..m {
                if i == j || g.has_edge(i, j) {
                    assert!(
                        (sigma[(i, j)] - cov[(i, j)]).abs() <= tol * scale,
                        "covariance mismatch at ({i},{j})"
                    );
                } else {
                    assert_eq!(k[(i, j)], 0.0, "nonzero at non-edge ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn complete_graph_mle_is_inverse_covariance() {
        let g = Graph::complete(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let x = sampling::random_sample(3, 10, &mut rng);
        let k = mle_decomposable(&g, &x, 1e-9).unwrap();
        let direct = ((&x * x.transpose()) / 10.0).try_inverse().unwrap();
        assert!((k.matrix() - direct).abs().max() < 1e-9);
    }

    #[test]
    fn empty_graph_mle_is_diagonal() {
        let g = Graph::empty(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let x = sampling::random_sample(4, 6, &mut rng);
        let k = mle_decomposable(&g, &x, 1e-9).unwrap();
        for i in 0..4 {
            let ssq: f64 = (0..6).map(|c| x[(i, c)] * x[(i, c)]).sum();
            assert!((k.matrix()[(i, i)] - 6.0 / ssq).abs() < 1e-10);
        }
    }

    #[test]
    fn matching_conditions_on_small_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for g in [p3(), bull(), path(5), crate::testgraphs::star(4)] {
            for _ in 0..5 {
                let x = sampling::random_sample(g.vertex_count(), 8, &mut rng);
                let k = mle_decomposable(&g, &x, 1e-9).unwrap();
                matching_conditions_hold(&g, &x, k.matrix(), 1e-9);
            }
        }
    }

    #[test]
    fn disconnected_graph_is_block_diagonal() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let x = sampling::random_sample(4, 7, &mut rng);
        let k = mle_decomposable(&g, &x, 1e-9).unwrap();
        matching_conditions_hold(&g, &x, k.matrix(), 1e-9);
        assert_eq!(k.matrix()[(0, 2)], 0.0);
        assert_eq!(k.matrix()[(1, 3)], 0.0);
    }

    #[test]
    fn rejects_non_chordal_and_small_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let x = sampling::random_sample(4, 8, &mut rng);
        assert!(matches!(
            mle_decomposable(&four_cycle(), &x, 1e-9),
            Err(Error::NotChordal)
        ));
        let g = Graph::complete(4).unwrap();
        let short = sampling::random_sample(4, 3, &mut rng);
        assert!(matches!(
            mle_decomposable(&g, &short, 1e-9),
            Err(Error::SampleTooSmall { .. })
        ));
    }

    #[test]
    fn mle_is_equivariant() {
        let g = p3();
        let p = crate::preorder::compute_preorder(&g);
        let pattern = crate::group::g0_pattern(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        for _ in 0..10 {
            let x = sampling::random_sample(3, 6, &mut rng);
            let t = sampling::random_pattern_matrix(&pattern, &mut rng);
            let lhs = mle_decomposable(&g, &(&t * &x), 1e-9).unwrap();
            let rhs = crate::group::act_on_concentration(
                &t,
                mle_decomposable(&g, &x, 1e-9).unwrap().matrix(),
            )
            .unwrap();
            let scale = 1.0 + rhs.abs().max();
            assert!((lhs.matrix() - rhs).abs().max() <= 1e-8 * scale);
        }
    }
}
