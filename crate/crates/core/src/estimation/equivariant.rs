//! Constructive equivariant estimators: the slice-based construction for
//! arbitrary graphs and the factorized closed form for transitive models.

use super::slice::{build_slice_map_from, reduce_with};
use super::{mle_decomposable, ConcentrationMatrix};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::{act_on_concentration, g0_pattern, max_abs};
use crate::orbit::is_transitive;
use crate::perm::lifted_quotient_group;
use crate::preorder::{compute_preorder, poset_pc, quotient_colored};
use nalgebra::{Cholesky, DMatrix};

/// The general equivariant estimator: reduce the sample to the slice,
/// average `T′` over the lifted quotient automorphisms there, and pull the
/// result back along the reducing group element.
///
/// `t_prime` may be any map from slice points into the model cone; its
/// output is validated. The resulting estimator satisfies
/// `T(g x) = g · T(x)` for every group member `g` and generic `x`.
pub fn equivariant_estimator<F>(g: &Graph, x: &DMatrix<f64>, t_prime: F) -> Result<ConcentrationMatrix>
where
    F: Fn(&DMatrix<f64>) -> Result<DMatrix<f64>>,
{
    let m = g.vertex_count();
    let p = compute_preorder(g);
    let q = quotient_colored(g, &p);
    let lifted = lifted_quotient_group(&p, &q);
    let map = build_slice_map_from(&p, x.ncols())?;
    let (g0, xl) = reduce_with(&p, &map, x)?;

    let mut acc = DMatrix::zeros(m, m);
    for sigma in lifted.elements() {
        // σ⁻¹ · xl stays in the slice; permutation matrices are orthogonal.
        let pulled = sigma.matrix().transpose() * &xl;
        let t = t_prime(&pulled)?;
        let t = ConcentrationMatrix::new(t, g, 1e-9)
            .map_err(|e| Error::InvalidInput(format!("T' left the model cone: {e}")))?;
        acc += act_on_concentration(&sigma.matrix(), t.matrix())?;
    }
    acc /= lifted.order() as f64;

    // Action by the inverse of the reducer: g₀⁻¹ · M = g₀ᵀ M g₀.
    let result = g0.transpose() * acc * &g0;
    ConcentrationMatrix::new(result, g, 1e-8)
        .map_err(|e| Error::Numeric(format!("estimator output invalid: {e}")))
}

/// A constant map into the model cone; the simplest admissible `T′`.
pub fn identity_t_prime(m: usize) -> impl Fn(&DMatrix<f64>) -> Result<DMatrix<f64>> {
    move |_| Ok(DMatrix::identity(m, m))
}

/// Factorizes `S⁻¹ = hᵀ h` with `h` carrying the stabilizer zero pattern,
/// normalized by upper-triangular diagonal blocks with positive diagonal
/// (for the complete graph this is the plain Cholesky factor `R` with
/// `RᵀR = S⁻¹`). Only transitive models admit such a factorization for
/// every cone member.
pub fn g0_factorization(g: &Graph, s_inv: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    if !is_transitive(g).transitive {
        return Err(Error::NotTransitive);
    }
    let s_inv_checked = ConcentrationMatrix::new(s_inv.clone(), g, tol.max(1e-9))?;
    let s = s_inv_checked.matrix();
    let p = compute_preorder(g);
    let poset = poset_pc(&p);
    let m = p.vertex_count();
    let mut h = DMatrix::zeros(m, m);
    // Eliminate classes from the top of the poset down; at each step the
    // residual S − hᵀh restricted to the current class is the Gram matrix
    // of its remaining block row.
    for &c in poset.linear_extension().iter().rev() {
        let members = &p.classes()[c];
        let cur = h.transpose() * &h;
        let mut diag_block = DMatrix::from_fn(members.len(), members.len(), |a, b| {
            s[(members[a], members[b])] - cur[(members[a], members[b])]
        });
        // Symmetrize against accumulated roundoff before factoring.
        diag_block = (&diag_block + diag_block.transpose()) * 0.5;
        let chol = Cholesky::new(diag_block).ok_or_else(|| {
            Error::Numeric(format!(
                "residual block of class {:?} is not positive definite",
                super::one_based(members)
            ))
        })?;
        let r = chol.l().transpose(); // upper, positive diagonal
        for (a, &i) in members.iter().enumerate() {
            for (b, &j) in members.iter().enumerate() {
                h[(i, j)] = r[(a, b)];
            }
        }
        // Off-diagonal blocks toward every class strictly below.
        for d in 0..p.class_count() {
            if d == c || !poset.leq(d, c) {
                continue;
            }
            let lower = &p.classes()[d];
            let rhs = DMatrix::from_fn(members.len(), lower.len(), |a, b| {
                s[(members[a], lower[b])] - cur[(members[a], lower[b])]
            });
            // Solve Rᵀ · X = rhs with Rᵀ lower triangular.
            let solved = r
                .transpose()
                .solve_lower_triangular(&rhs)
                .ok_or_else(|| Error::Numeric("triangular solve failed".into()))?;
            for (a, &i) in members.iter().enumerate() {
                for (b, &j) in lower.iter().enumerate() {
                    h[(i, j)] = solved[(a, b)];
                }
            }
        }
    }
    let residual = h.transpose() * &h - s;
    let scale = 1.0 + max_abs(s);
    if max_abs(&residual) > tol.max(1e-10) * scale {
        return Err(Error::Numeric(format!(
            "factorization residual {:.3e} exceeds tolerance",
            max_abs(&residual)
        )));
    }
    let pattern = g0_pattern(&p);
    debug_assert!(pattern.complies(&h, 1e-12));
    Ok(h)
}

/// The closed-form equivariant estimator for transitive models:
/// `T = (h₀ h)ᵀ (h₀ h)` with `h` the pattern factor of `(n Σ̂)⁻¹`.
///
/// `h₀` must carry the zero pattern and be invertible. The estimator is
/// exactly equivariant when `h₀ᵀh₀` is fixed by the (finite) stabilizer of
/// the identity in the group — in particular for any scalar `h₀ = c·I` and
/// for diagonal `h₀ᵀh₀` constant on automorphism orbits.
pub fn transitive_equivariant_estimator(
    g: &Graph,
    x: &DMatrix<f64>,
    h0: &DMatrix<f64>,
) -> Result<ConcentrationMatrix> {
    if !is_transitive(g).transitive {
        return Err(Error::NotTransitive);
    }
    let p = compute_preorder(g);
    let pattern = g0_pattern(&p);
    if h0.nrows() != p.vertex_count() || h0.ncols() != p.vertex_count() {
        return Err(Error::InvalidInput("h0 size does not match graph".into()));
    }
    if !pattern.complies(h0, 1e-9) {
        return Err(Error::InvalidInput(
            "h0 does not match the stabilizer zero pattern".into(),
        ));
    }
    if h0.determinant().abs() < 1e-12 {
        return Err(Error::Singular("h0 must be invertible".into()));
    }
    let n = x.ncols();
    let mle = mle_decomposable(g, x, 1e-9)?;
    // S(x)⁻¹ = (n Σ̂)⁻¹ = K̂ / n.
    let s_inv = mle.matrix() / n as f64;
    let h = g0_factorization(g, &s_inv, 1e-8)?;
    let hh = h0 * h;
    let t = hh.transpose() * &hh;
    ConcentrationMatrix::new(t, g, 1e-8)
        .map_err(|e| Error::Numeric(format!("estimator output invalid: {e}")))
}
