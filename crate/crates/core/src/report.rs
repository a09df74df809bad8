//! Assembly of the full per-graph analysis report: combinatorial structure,
//! group description, orbit dimensions, transitivity and sample bounds.

use crate::error::Result;
use crate::estimation::{breakdown_upper_bound, min_sample_size};
use crate::graph::Graph;
use crate::group::g0_pattern;
use crate::orbit::{is_transitive, orbit_report, OrbitReport, TransitivityReport};
use crate::perm::{colored_quotient_automorphisms, graph_automorphisms, lifted_quotient_group};
use crate::preorder::{color_edges, compute_preorder, poset_pc, quotient_colored, EdgeColor};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Group description fragment: the continuous factor's dimension and
/// pattern plus the discrete factor's orders and generators.
#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub g0_dimension: usize,
    pub pattern: Vec<Vec<bool>>,
    pub aut_graph_order: usize,
    pub aut_quotient_order: usize,
    /// Generators of the colored-quotient automorphism group, as 1-based
    /// image vectors on class indices.
    pub quotient_generators: Vec<Vec<usize>>,
}

/// Exact rational bound, serialized as numerator/denominator.
#[derive(Clone, Debug, Serialize)]
pub struct BreakdownReport {
    pub n: usize,
    pub numerator: u64,
    pub denominator: u64,
}

/// The full analysis of one graph.
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub vertex_count: usize,
    /// 1-based edges.
    pub edges: Vec<(usize, usize)>,
    /// Equivalence classes of the preorder, 1-based, ordered by smallest
    /// member.
    pub classes: Vec<Vec<usize>>,
    /// Cover relations of the class poset, as 1-based class index pairs
    /// (lower, upper).
    pub hasse: Vec<(usize, usize)>,
    /// Class sizes in class order: the quotient coloring.
    pub class_sizes: Vec<usize>,
    pub group: GroupReport,
    pub red_count: usize,
    pub green_count: usize,
    pub blue_count: usize,
    pub orbit: OrbitReport,
    pub transitivity: TransitivityReport,
    pub min_sample_size: usize,
    pub breakdown: Option<BreakdownReport>,
    pub seed: u64,
}

/// Options for [`analyze`].
#[derive(Clone, Copy, Debug, Default)]
pub struct AnalyzeOptions {
    /// Also evaluate the numeric orbit-dimension oracle.
    pub check_numeric: bool,
    /// Seed for the oracle's random concentration matrix.
    pub seed: u64,
    /// Sample size at which to evaluate the breakdown bound.
    pub n: Option<usize>,
}

/// Runs every analysis the library offers on one graph. Deterministic
/// given the options.
pub fn analyze(g: &Graph, opts: AnalyzeOptions) -> Result<AnalysisReport> {
    let p = compute_preorder(g);
    let poset = poset_pc(&p);
    let q = quotient_colored(g, &p);
    let coloring = color_edges(g, &p);
    let pattern = g0_pattern(&p);
    let aut_graph = graph_automorphisms(g);
    let aut_quotient = colored_quotient_automorphisms(&q);
    // The lifted copy shares the quotient group's order; building it
    // exercises the size checks.
    let lifted = lifted_quotient_group(&p, &q);
    debug_assert_eq!(lifted.order(), aut_quotient.order());

    let orbit = if opts.check_numeric {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        orbit_report(g, Some(&mut rng))?
    } else {
        orbit_report::<ChaCha8Rng>(g, None)?
    };
    let transitivity = is_transitive(g);
    let min_n = min_sample_size(g);
    let breakdown = match opts.n {
        Some(n) => {
            let bound = breakdown_upper_bound(g, n)?;
            Some(BreakdownReport {
                n,
                numerator: *bound.numer(),
                denominator: *bound.denom(),
            })
        }
        None => None,
    };

    Ok(AnalysisReport {
        vertex_count: g.vertex_count(),
        edges: g.edges().iter().map(|&(i, j)| (i + 1, j + 1)).collect(),
        classes: p
            .classes()
            .iter()
            .map(|c| c.iter().map(|&v| v + 1).collect())
            .collect(),
        hasse: poset
            .hasse_edges()
            .iter()
            .map(|&(a, b)| (a + 1, b + 1))
            .collect(),
        class_sizes: q.sizes().to_vec(),
        group: GroupReport {
            g0_dimension: pattern.dimension(),
            pattern: pattern.rows().to_vec(),
            aut_graph_order: aut_graph.order(),
            aut_quotient_order: aut_quotient.order(),
            quotient_generators: aut_quotient
                .generators()
                .iter()
                .map(|p| p.images_one_based())
                .collect(),
        },
        red_count: coloring.count(EdgeColor::Red),
        green_count: coloring.count(EdgeColor::Green),
        blue_count: coloring.count(EdgeColor::Blue),
        orbit,
        transitivity,
        min_sample_size: min_n,
        breakdown,
        seed: opts.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testgraphs::{bull, four_cycle, p3};

    #[test]
    fn p3_report() {
        let r = analyze(&p3(), AnalyzeOptions::default()).unwrap();
        assert_eq!(r.group.g0_dimension, 5);
        assert_eq!(r.group.aut_graph_order, 2);
        assert_eq!(r.group.aut_quotient_order, 2);
        assert_eq!(r.orbit.dim_combinatorial, 0);
        assert!(r.transitivity.transitive);
        assert_eq!(r.min_sample_size, 2);
        assert_eq!(r.hasse, vec![(1, 2), (1, 3)]);
    }

    #[test]
    fn bull_report() {
        let r = analyze(&bull(), AnalyzeOptions::default()).unwrap();
        assert_eq!(r.group.g0_dimension, 9);
        assert_eq!(r.group.aut_graph_order, 2);
        assert_eq!(r.group.aut_quotient_order, 2);
        assert_eq!(r.orbit.dim_combinatorial, 1);
        assert!(!r.transitivity.transitive);
        assert_eq!(r.min_sample_size, 3);
        assert_eq!(r.blue_count, 1);
    }

    #[test]
    fn four_cycle_report() {
        let r = analyze(&four_cycle(), AnalyzeOptions::default()).unwrap();
        assert_eq!(r.group.g0_dimension, 4);
        assert_eq!(r.group.aut_graph_order, 8);
        assert_eq!(r.group.aut_quotient_order, 8);
        assert_eq!(r.orbit.dim_combinatorial, 4);
        assert!(!r.transitivity.transitive);
        // Every down set is a singleton here.
        assert_eq!(r.min_sample_size, 1);
    }

    #[test]
    fn reports_are_deterministic() {
        let opts = AnalyzeOptions {
            check_numeric: true,
            seed: 123,
            n: Some(10),
        };
        let a = serde_json::to_string(&analyze(&bull(), opts).unwrap()).unwrap();
        let b = serde_json::to_string(&analyze(&bull(), opts).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn breakdown_field() {
        let opts = AnalyzeOptions {
            n: Some(10),
            ..Default::default()
        };
        let r = analyze(&p3(), opts).unwrap();
        let b = r.breakdown.unwrap();
        assert_eq!((b.numerator, b.denominator), (1, 2));
    }
}
