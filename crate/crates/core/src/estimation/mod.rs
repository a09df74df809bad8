//! Sample-facing statistics: minimal sample sizes, breakdown bounds, the
//! maximal invariant, slice reduction, equivariant estimators, the
//! decomposable maximum-likelihood estimator, and stabilizer diagnostics.

mod equivariant;
mod mle;
mod slice;
mod stabilizer;

pub use equivariant::{
    equivariant_estimator, g0_factorization, identity_t_prime, transitive_equivariant_estimator,
};
pub use mle::mle_decomposable;
pub use slice::{build_slice_map, reduce_to_slice, SliceMap};
pub use stabilizer::{verify_stabilizer_triviality, RowStabilizer, StabilizerReport};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::max_abs;
use crate::preorder::{compute_preorder, Preorder};
use nalgebra::{Cholesky, DMatrix};
use num_rational::Ratio;

/// Relative singular-value threshold below which a sample block counts as
/// rank-deficient.
pub const GENERICITY_TOL: f64 = 1e-10;

/// A concentration matrix in the model cone: symmetric positive definite
/// with zeros (within tolerance) at non-edge positions.
#[derive(Clone, Debug, PartialEq)]
pub struct ConcentrationMatrix {
    k: DMatrix<f64>,
}

impl ConcentrationMatrix {
    /// Validates and wraps `k` for the model of `graph`.
    pub fn new(k: DMatrix<f64>, graph: &Graph, tol: f64) -> Result<Self> {
        let m = graph.vertex_count();
        if k.nrows() != m || k.ncols() != m {
            return Err(Error::InvalidInput(format!(
                "matrix is {}x{} but the graph has {m} vertices",
                k.nrows(),
                k.ncols()
            )));
        }
        let scale = 1.0 + max_abs(&k);
        for i in 0..m {
            for j in i..m {
                if (k[(i, j)] - k[(j, i)]).abs() > tol * scale {
                    return Err(Error::InvalidInput("matrix is not symmetric".into()));
                }
                if i != j && !graph.has_edge(i, j) && k[(i, j)].abs() > tol * scale {
                    return Err(Error::InvalidInput(format!(
                        "nonzero entry at non-edge position ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        if Cholesky::new(k.clone()).is_none() {
            return Err(Error::InvalidInput("matrix is not positive definite".into()));
        }
        Ok(ConcentrationMatrix { k })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.k
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.k
    }
}

/// Minimal sample size for which an equivariant estimator of the
/// concentration matrix exists: `max_i |↓i|`.
pub fn min_sample_size(g: &Graph) -> usize {
    compute_preorder(g).max_down_set_size()
}

/// Upper bound on the finite-sample breakdown point of any equivariant
/// estimator at a generic `n`-sample: `⌈(n − max|↓i| + 1)/2⌉ / n`, exact.
pub fn breakdown_upper_bound(g: &Graph, n: usize) -> Result<Ratio<u64>> {
    let q = min_sample_size(g);
    if n < q {
        return Err(Error::SampleTooSmall { n, min: q });
    }
    let altered = (n as u64 - q as u64 + 2) / 2; // ⌈(n - q + 1)/2⌉
    Ok(Ratio::new(altered, n as u64))
}

/// Verifies the genericity certificate of a sample: every down-set row
/// block `x[↓i]` must have full row rank at the [`GENERICITY_TOL`]
/// threshold. Returns the offending down set (1-based) otherwise.
pub fn check_genericity(p: &Preorder, x: &DMatrix<f64>) -> Result<()> {
    for c in 0..p.class_count() {
        let rep = p.class_rep(c);
        let d = p.down_set(rep);
        let block = rows(x, d);
        if numeric_rank(&block, GENERICITY_TOL) < d.len() {
            return Err(Error::DegenerateSample(format!(
                "rows of the down set {:?} are rank-deficient",
                one_based(d)
            )));
        }
    }
    Ok(())
}

pub(crate) fn one_based(vs: &[usize]) -> Vec<usize> {
    vs.iter().map(|&v| v + 1).collect()
}

pub(crate) fn rows(x: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), x.ncols(), |r, c| x[(idx[r], c)])
}

pub(crate) fn numeric_rank(a: &DMatrix<f64>, rel_tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let svals = a.clone().svd(false, false).singular_values;
    let smax = svals.iter().cloned().fold(0.0f64, f64::max);
    if smax == 0.0 {
        return 0;
    }
    svals.iter().filter(|&&s| s >= rel_tol * smax).count()
}

/// The maximal invariant of the continuous stabilizer factor: one `n × n`
/// orthogonal projector per equivalence class, onto the row space of the
/// down-set block `x[↓i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantValue {
    /// Projectors in class order.
    projectors: Vec<DMatrix<f64>>,
    /// `|↓i|` per class: the rank of each projector.
    down_sizes: Vec<usize>,
}

impl InvariantValue {
    pub fn projectors(&self) -> &[DMatrix<f64>] {
        &self.projectors
    }

    pub fn expected_ranks(&self) -> &[usize] {
        &self.down_sizes
    }
}

/// Computes the maximal invariant `x ↦ (x[↓i]ᵀ (x[↓i] x[↓i]ᵀ)⁻¹ x[↓i])_ī`.
/// Requires `n ≥ max|↓i|` and a generic sample.
///
/// Each component is the orthogonal projector onto the row space of
/// `x[↓i]`; it is evaluated from the right singular vectors of the block,
/// which agrees with the Gram-inverse formula but stays accurate on
/// ill-conditioned blocks.
pub fn maximal_invariant(g: &Graph, x: &DMatrix<f64>) -> Result<InvariantValue> {
    let p = compute_preorder(g);
    let n = x.ncols();
    let q = p.max_down_set_size();
    if n < q {
        return Err(Error::SampleTooSmall { n, min: q });
    }
    if x.nrows() != g.vertex_count() {
        return Err(Error::InvalidInput("sample row count does not match graph".into()));
    }
    let mut projectors = Vec::with_capacity(p.class_count());
    let mut down_sizes = Vec::with_capacity(p.class_count());
    for c in 0..p.class_count() {
        let rep = p.class_rep(c);
        let d = p.down_set(rep);
        let block = rows(x, d);
        let svd = block.clone().svd(false, true);
        let svals = &svd.singular_values;
        let smax = svals.iter().cloned().fold(0.0f64, f64::max);
        let full_rank = smax > 0.0 && svals.iter().all(|&s| s >= GENERICITY_TOL * smax);
        if !full_rank {
            return Err(Error::DegenerateSample(format!(
                "rows of the down set {:?} are rank-deficient",
                one_based(d)
            )));
        }
        let v_t = svd.v_t.expect("right singular vectors requested");
        projectors.push(v_t.transpose() * &v_t);
        down_sizes.push(d.len());
    }
    Ok(InvariantValue {
        projectors,
        down_sizes,
    })
}

/// The log-determinant pseudo-metric `D(K₁, K₂) = |log det(K₁ K₂⁻¹)|`,
/// evaluated through Cholesky log-determinants.
pub fn pseudo_metric_d(k1: &DMatrix<f64>, k2: &DMatrix<f64>) -> Result<f64> {
    Ok((log_det_pd(k1)? - log_det_pd(k2)?).abs())
}

fn log_det_pd(k: &DMatrix<f64>) -> Result<f64> {
    let chol = Cholesky::new(k.clone())
        .ok_or_else(|| Error::InvalidInput("matrix is not positive definite".into()))?;
    Ok(2.0 * chol.l().diagonal().iter().map(|&d| d.ln()).sum::<f64>())
}
