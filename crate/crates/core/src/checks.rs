//! Per-graph property checks cross-validating the modules against each
//! other, shared by the `verify` subcommand and the exhaustive sweep. Each
//! check returns a description of the first failure, if any.

use crate::error::Result;
use crate::estimation::{
    equivariant_estimator, maximal_invariant, mle_decomposable, reduce_to_slice,
    verify_stabilizer_triviality,
};
use crate::graph::Graph;
use crate::group::{act_on_concentration, g0_pattern, max_abs};
use crate::orbit::{
    orbit_dim_combinatorial, orbit_dim_combinatorial_shuffled, orbit_dim_formula,
    stabilizer_dim_numeric, transitivity_conditions, SVD_TOL,
};
use crate::perm::lifted_quotient_group;
use crate::preorder::{compute_preorder, quotient_colored};
use crate::sampling;
use nalgebra::DMatrix;
use rand::Rng;

pub type CheckOutcome = std::result::Result<(), String>;

/// Combinatorial, formula and numeric orbit dimensions agree, and the
/// combinatorial value is independent of the deletion order.
pub fn check_orbit_dims<R: Rng>(
    g: &Graph,
    rng: &mut R,
    k_draws: usize,
    orders: usize,
) -> Result<CheckOutcome> {
    let combinatorial = orbit_dim_combinatorial(g).dimension;
    let formula = orbit_dim_formula(g);
    if combinatorial != formula {
        return Ok(Err(format!(
            "combinatorial {combinatorial} != formula {formula} on {:?}",
            g.edges()
        )));
    }
    let p = compute_preorder(g);
    for _ in 0..k_draws {
        let k = sampling::random_concentration(g, rng);
        let stab = stabilizer_dim_numeric(g, &k, SVD_TOL)?;
        let numeric = g.vertex_count() + g.edge_count() + stab - p.pattern_dimension();
        if numeric != combinatorial {
            return Ok(Err(format!(
                "numeric {numeric} != combinatorial {combinatorial} on {:?}",
                g.edges()
            )));
        }
    }
    for _ in 0..orders {
        let shuffled = orbit_dim_combinatorial_shuffled(g, rng).dimension;
        if shuffled != combinatorial {
            return Ok(Err(format!(
                "deletion order changed the dimension on {:?}",
                g.edges()
            )));
        }
    }
    Ok(Ok(()))
}

/// The three transitivity conditions agree, and transitivity is equivalent
/// to orbit dimension zero.
pub fn check_transitivity(g: &Graph) -> CheckOutcome {
    let report = transitivity_conditions(g);
    if report.edges_comparable != report.decomposable_no_4chain
        || report.edges_comparable != report.hasse_tree_unique_minimum
    {
        return Err(format!(
            "transitivity conditions disagree on {:?}: ({}, {}, {})",
            g.edges(),
            report.edges_comparable,
            report.decomposable_no_4chain,
            report.hasse_tree_unique_minimum
        ));
    }
    let dim = orbit_dim_combinatorial(g).dimension;
    if (dim == 0) != report.transitive {
        return Err(format!(
            "dim {dim} vs transitive {} on {:?}",
            report.transitive,
            g.edges()
        ));
    }
    Ok(())
}

/// The maximal invariant is unchanged along continuous-factor orbits and
/// its components are projectors of the right rank.
pub fn check_tau_invariance<R: Rng>(g: &Graph, rng: &mut R, trials: usize) -> Result<CheckOutcome> {
    let p = compute_preorder(g);
    let pattern = g0_pattern(&p);
    let n = p.max_down_set_size() + 1;
    for _ in 0..trials {
        let x = sampling::random_sample(g.vertex_count(), n, rng);
        let tau = maximal_invariant(g, &x)?;
        for (proj, &rank) in tau.projectors().iter().zip(tau.expected_ranks()) {
            let idem = (proj * proj - proj).abs().max();
            let sym = (proj - proj.transpose()).abs().max();
            let trace: f64 = proj.diagonal().iter().sum();
            if idem > 1e-9 || sym > 1e-12 || (trace - rank as f64).abs() > 1e-6 {
                return Ok(Err(format!(
                    "projector laws fail on {:?}: idem {idem:.2e} sym {sym:.2e}",
                    g.edges()
                )));
            }
        }
        let g0 = sampling::random_pattern_matrix(&pattern, rng);
        let tau_moved = maximal_invariant(g, &(&g0 * &x))?;
        for (a, b) in tau.projectors().iter().zip(tau_moved.projectors()) {
            let scale = 1.0 + max_abs(a);
            if (a - b).abs().max() > 1e-8 * scale {
                return Ok(Err(format!("invariance fails on {:?}", g.edges())));
            }
        }
    }
    Ok(Ok(()))
}

/// Reduction into the slice is constant along continuous-factor orbits.
pub fn check_slice_uniqueness<R: Rng>(g: &Graph, rng: &mut R, trials: usize) -> Result<CheckOutcome> {
    let p = compute_preorder(g);
    let pattern = g0_pattern(&p);
    let n = p.max_down_set_size() + 1;
    for _ in 0..trials {
        let x = sampling::random_sample(g.vertex_count(), n, rng);
        let g0 = sampling::random_pattern_matrix(&pattern, rng);
        let (_, xl) = reduce_to_slice(g, &x)?;
        let (_, yl) = reduce_to_slice(g, &(&g0 * &x))?;
        let scale = 1.0 + max_abs(&xl);
        if (&yl - &xl).abs().max() > 1e-8 * scale {
            return Ok(Err(format!("slice reduction not unique on {:?}", g.edges())));
        }
    }
    Ok(Ok(()))
}

/// The slice-averaged estimator satisfies the defining equivariance
/// property under random group members.
pub fn check_estimator_equivariance<R: Rng>(
    g: &Graph,
    rng: &mut R,
    trials: usize,
) -> Result<CheckOutcome> {
    let m = g.vertex_count();
    let p = compute_preorder(g);
    let pattern = g0_pattern(&p);
    let q = quotient_colored(g, &p);
    let lifted = lifted_quotient_group(&p, &q);
    let n = p.max_down_set_size() + 1;
    let t_prime = |_: &DMatrix<f64>| Ok(DMatrix::<f64>::identity(m, m));
    for _ in 0..trials {
        let x = sampling::random_sample(m, n, rng);
        let member = sampling::random_group_element(&pattern, &lifted, rng);
        let lhs = equivariant_estimator(g, &(&member * &x), t_prime)?;
        let rhs = act_on_concentration(&member, equivariant_estimator(g, &x, t_prime)?.matrix())?;
        let scale = 1.0 + max_abs(&rhs);
        if (lhs.matrix() - &rhs).abs().max() > 1e-8 * scale {
            return Ok(Err(format!("estimator not equivariant on {:?}", g.edges())));
        }
    }
    Ok(Ok(()))
}

/// Thm-style sample-size thresholds: the generic stabilizer is trivial
/// exactly from `max|↓i|` on, with a trace-free direction one below.
pub fn check_stabilizer_thresholds(g: &Graph, seed: u64, trials: usize) -> CheckOutcome {
    let q = compute_preorder(g).max_down_set_size();
    for t in 0..trials as u64 {
        let at = verify_stabilizer_triviality(g, q, seed ^ t);
        if !at.stabilizer_trivial {
            return Err(format!("stabilizer not trivial at n = {q} on {:?}", g.edges()));
        }
        let above = verify_stabilizer_triviality(g, q + 1, seed ^ t);
        if !above.stabilizer_trivial {
            return Err(format!(
                "stabilizer not trivial at n = {} on {:?}",
                q + 1,
                g.edges()
            ));
        }
        let below = verify_stabilizer_triviality(g, q - 1, seed ^ t);
        if below.stabilizer_trivial || !below.trace_unconstrained {
            return Err(format!(
                "missing free trace direction at n = {} on {:?}",
                q - 1,
                g.edges()
            ));
        }
    }
    Ok(())
}

/// Decomposable-MLE matching conditions on chordal graphs: the inverse
/// matches the sample covariance on diagonal and edges, and the estimate
/// vanishes on non-edges. Skipped (trivially passing) on non-chordal
/// graphs.
pub fn check_mle_matching<R: Rng>(g: &Graph, rng: &mut R, trials: usize) -> Result<CheckOutcome> {
    if !g.is_chordal() {
        return Ok(Ok(()));
    }
    let m = g.vertex_count();
    let largest = g.maximal_cliques().iter().map(Vec::len).max().unwrap_or(1);
    let n = largest + 2;
    for _ in 0..trials {
        let x = sampling::random_sample(m, n, rng);
        let k = mle_decomposable(g, &x, 1e-9)?;
        let cov = (&x * x.transpose()) / n as f64;
        let sigma = match k.matrix().clone().try_inverse() {
            Some(s) => s,
            None => return Ok(Err(format!("estimate not invertible on {:?}", g.edges()))),
        };
        let scale = 1.0 + max_abs(&cov);
        for i in 0..m {
            for j in i..m {
                if i == j || g.has_edge(i, j) {
                    if (sigma[(i, j)] - cov[(i, j)]).abs() > 1e-9 * scale {
                        return Ok(Err(format!(
                            "covariance mismatch at ({}, {}) on {:?}",
                            i + 1,
                            j + 1,
                            g.edges()
                        )));
                    }
                } else if k.matrix()[(i, j)].abs() > 1e-9 {
                    return Ok(Err(format!(
                        "nonzero concentration at non-edge ({}, {}) on {:?}",
                        i + 1,
                        j + 1,
                        g.edges()
                    )));
                }
            }
        }
    }
    Ok(Ok(()))
}
