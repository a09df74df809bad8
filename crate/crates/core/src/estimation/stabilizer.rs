//! Diagnostics for the stabilizer of a random generic sample inside the
//! continuous group factor: per-row solvability of the fixing equations
//! `Σ_{j ≼ i} g_ij x_j = x_i`, and whether the unconstrained directions
//! leave the trace (hence the determinant) free to drift.

use crate::graph::Graph;
use crate::preorder::compute_preorder;
use crate::sampling;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Solvability of one row's fixing equations.
#[derive(Clone, Debug, Serialize)]
pub struct RowStabilizer {
    /// 1-based vertex.
    pub vertex: usize,
    pub down_set_size: usize,
    /// The row of a fixing group element is uniquely determined.
    pub unique: bool,
    /// Some unconstrained direction moves the diagonal entry.
    pub diagonal_free: bool,
}

/// Stabilizer triviality report for a random generic sample.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizerReport {
    pub n: usize,
    pub max_down_set_size: usize,
    pub rows: Vec<RowStabilizer>,
    /// All rows unique: the stabilizer of the sample is the identity.
    pub stabilizer_trivial: bool,
    /// Some row leaves its diagonal entry free, so the stabilizer contains
    /// elements of non-unit determinant (the breakdown mechanism).
    pub trace_unconstrained: bool,
}

/// Draws a generic `n`-sample from the seed and reports, per row, whether
/// the fixing equations pin the row uniquely, and otherwise whether the
/// diagonal entry is unconstrained.
pub fn verify_stabilizer_triviality(g: &Graph, n: usize, seed: u64) -> StabilizerReport {
    let p = compute_preorder(g);
    let m = g.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = sampling::random_sample(m, n, &mut rng);

    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let d = p.down_set(i);
        let (unique, diagonal_free) = if n == 0 {
            (false, true)
        } else {
            let block = super::rows(&x, d);
            row_solvability(&block, d.iter().position(|&v| v == i).unwrap())
        };
        rows.push(RowStabilizer {
            vertex: i + 1,
            down_set_size: d.len(),
            unique,
            diagonal_free,
        });
    }
    let stabilizer_trivial = rows.iter().all(|r| r.unique);
    let trace_unconstrained = rows.iter().any(|r| r.diagonal_free);
    StabilizerReport {
        n,
        max_down_set_size: p.max_down_set_size(),
        rows,
        stabilizer_trivial,
        trace_unconstrained,
    }
}

/// For the row system `a · block = 0`: is the solution space trivial, and
/// does it move the coordinate `diag_pos`? The solution space is the
/// orthogonal complement of the column space of `block`; its projector is
/// `I − Σ u_k u_kᵀ` over the significant left singular vectors.
fn row_solvability(block: &DMatrix<f64>, diag_pos: usize) -> (bool, bool) {
    let d = block.nrows();
    let svd = block.clone().svd(true, false);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let svals = &svd.singular_values;
    let smax = svals.iter().cloned().fold(0.0f64, f64::max);
    let mut null_proj = DMatrix::<f64>::identity(d, d);
    for (k, &s) in svals.iter().enumerate() {
        if smax > 0.0 && s >= 1e-10 * smax {
            let col = u.column(k);
            null_proj -= &col * col.transpose();
        }
    }
    let null_dim_zero = null_proj.abs().max() <= 1e-9;
    let diag_free = null_proj[(diag_pos, diag_pos)] > 1e-9;
    (null_dim_zero, diag_free)
}
