//! Exhaustive verification over every labeled graph up to a vertex bound:
//! runs the cross-checks of the orbit and estimation modules and tallies
//! failures per property.

use crate::checks;
use crate::error::{Error, Result};
use crate::graph::enumerate_labeled;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Hard bound on the sweep size: beyond six vertices the labeled-graph
/// count explodes.
pub const MAX_SWEEP_M: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub graphs_checked: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub max_m: usize,
    pub seed: u64,
    pub graphs_total: usize,
    pub properties: Vec<PropertyResult>,
    pub passed: bool,
}

struct Tally {
    name: &'static str,
    checked: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checked: 0,
            failures: 0,
            first: None,
        }
    }

    fn record(&mut self, outcome: checks::CheckOutcome) {
        self.checked += 1;
        if let Err(msg) = outcome {
            self.failures += 1;
            self.first.get_or_insert(msg);
        }
    }

    fn into_result(self) -> PropertyResult {
        PropertyResult {
            name: self.name.to_string(),
            graphs_checked: self.checked,
            failures: self.failures,
            first_failure: self.first,
        }
    }
}

/// Runs every cross-check on all labeled graphs with at most `max_m`
/// vertices. Numeric orbit checks run on connected graphs (with a reduced
/// draw count on disconnected ones as a smoke test); estimation checks
/// use two random trials per graph.
pub fn sweep(max_m: usize, seed: u64) -> Result<SweepSummary> {
    if max_m > MAX_SWEEP_M {
        return Err(Error::LimitExceeded(format!(
            "sweep supports at most {MAX_SWEEP_M} vertices, requested {max_m}"
        )));
    }
    if max_m == 0 {
        return Err(Error::InvalidInput("max_m must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orbit = Tally::new("orbit_dimension_triple_agreement");
    let mut transitivity = Tally::new("transitivity_equivalence");
    let mut tau = Tally::new("maximal_invariant_properties");
    let mut slice = Tally::new("slice_reduction_uniqueness");
    let mut estimator = Tally::new("estimator_equivariance");
    let mut stabilizer = Tally::new("stabilizer_sample_thresholds");
    let mut mle = Tally::new("mle_matching_conditions");

    let mut graphs_total = 0usize;
    for m in 1..=max_m {
        for g in enumerate_labeled(m) {
            graphs_total += 1;
            let connected = g.is_connected();
            let (k_draws, orders) = if connected { (2, 3) } else { (1, 1) };
            orbit.record(checks::check_orbit_dims(&g, &mut rng, k_draws, orders)?);
            transitivity.record(checks::check_transitivity(&g));
            tau.record(checks::check_tau_invariance(&g, &mut rng, 2)?);
            slice.record(checks::check_slice_uniqueness(&g, &mut rng, 2)?);
            estimator.record(checks::check_estimator_equivariance(&g, &mut rng, 2)?);
            stabilizer.record(checks::check_stabilizer_thresholds(&g, seed, 2));
            mle.record(checks::check_mle_matching(&g, &mut rng, 2)?);
        }
    }

    let properties: Vec<PropertyResult> = vec![
        orbit.into_result(),
        transitivity.into_result(),
        tau.into_result(),
        slice.into_result(),
        estimator.into_result(),
        stabilizer.into_result(),
        mle.into_result(),
    ];
    let passed = properties.iter().all(|p| p.failures == 0);
    Ok(SweepSummary {
        max_m,
        seed,
        graphs_total,
        properties,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_m2_passes() {
        let summary = sweep(2, 0).unwrap();
        assert_eq!(summary.graphs_total, 3);
        assert!(summary.passed);
    }

    #[test]
    fn sweep_m4_passes() {
        let summary = sweep(4, 0).unwrap();
        assert_eq!(summary.graphs_total, 1 + 2 + 8 + 64);
        assert!(summary.passed, "{:?}", summary.properties);
    }

    #[test]
    fn sweep_rejects_large_bounds() {
        assert!(matches!(sweep(7, 0), Err(Error::LimitExceeded(_))));
    }
}
