//! Seeded random generation of generic objects: pattern-constrained group
//! elements, concentration matrices inside the model cone, arbitrary group
//! members, and Gaussian sample matrices. All randomness flows through a
//! caller-supplied RNG; nothing here touches global state.

use crate::graph::Graph;
use crate::group::ZeroPattern;
use crate::perm::PermGroup;
use nalgebra::{Cholesky, DMatrix};
use rand::Rng;
use rand_distr::StandardNormal;

fn normal<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// An invertible matrix with the given zero pattern: allowed entries are
/// i.i.d. standard normal, resampled while `|det| < 1e-6`.
pub fn random_pattern_matrix<R: Rng>(pattern: &ZeroPattern, rng: &mut R) -> DMatrix<f64> {
    let m = pattern.size();
    loop {
        let g = DMatrix::from_fn(m, m, |i, j| {
            if pattern.is_allowed(i, j) {
                normal(rng)
            } else {
                0.0
            }
        });
        if g.determinant().abs() >= 1e-6 {
            return g;
        }
    }
}

/// A generic concentration matrix in the model cone: diagonal entries
/// `|N(0,1)| + m`, edge entries `N(0,1)`, zeros elsewhere. The recipe is
/// diagonally dominant with high probability; positive definiteness is
/// certified by a Cholesky factorization, resampling on failure.
pub fn random_concentration<R: Rng>(g: &Graph, rng: &mut R) -> DMatrix<f64> {
    let m = g.vertex_count();
    loop {
        let mut k = DMatrix::zeros(m, m);
        for i in 0..m {
            k[(i, i)] = normal(rng).abs() + m as f64;
        }
        for &(i, j) in g.edges() {
            let v = normal(rng);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
        if Cholesky::new(k.clone()).is_some() {
            return k;
        }
    }
}

/// An i.i.d. standard normal `m × n` sample matrix.
pub fn random_sample<R: Rng>(m: usize, n: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(m, n, |_, _| normal(rng))
}

/// A random group member `P_σ · g₀`: `σ` uniform over the lifted quotient
/// automorphisms, `g₀` a random pattern matrix.
pub fn random_group_element<R: Rng>(
    pattern: &ZeroPattern,
    lifted: &PermGroup,
    rng: &mut R,
) -> DMatrix<f64> {
    let idx = rng.random_range(0..lifted.order());
    let sigma = &lifted.elements()[idx];
    sigma.matrix() * random_pattern_matrix(pattern, rng)
}
