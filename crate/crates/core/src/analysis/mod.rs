//! Exact success probabilities, closing bounds, fidelities and the classical
//! collision baseline.

pub mod bounds;
pub mod collision;
pub mod fidelity;
pub mod histogram;
pub mod success;

pub use bounds::{analytic_bounds, copies_needed, cubic_bound, quadratic_bound, QueryBoundReport};
pub use collision::{collision_exhaustive, collision_experiment, CollisionReport};
pub use fidelity::{fidelity_exact, FidelityReport};
pub use histogram::{eta_histogram_forward, eta_histogram_with_solver, per_x_success, EtaHistogram};
pub use success::{total_success, SuccessMode, SuccessReport};

use serde::Serialize;

use crate::error::{checked_power, Result};
use crate::ff::PrimeModulus;
use crate::systems::cubic::is_good_cubic_pair;
use crate::systems::BRUTE_FORCE_LIMIT;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaBoundReport {
    pub p: u64,
    pub good_pairs: u64,
    pub max_eta: u64,
    /// `(x, y)` attaining `max_eta`, first in lexicographic order.
    pub argmax: Option<(u64, u64)>,
}

/// Largest `eta` over every good normalized label `(1, x, y)` and every target.
pub fn verify_eta_bound(m: PrimeModulus) -> Result<EtaBoundReport> {
    let p = m.value();
    checked_power("eta bound scan", p, 5, BRUTE_FORCE_LIMIT * 100)?;
    let mut report = EtaBoundReport {
        p,
        good_pairs: 0,
        max_eta: 0,
        argmax: None,
    };
    for x in m.elements() {
        for y in m.elements() {
            if !is_good_cubic_pair(x, y) {
                continue;
            }
            report.good_pairs += 1;
            let h = eta_histogram_forward(m, &[m.one(), x, y], 3)?;
            if h.max_eta() > report.max_eta {
                report.max_eta = h.max_eta();
                report.argmax = Some((x.value(), y.value()));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_bound_small_primes() {
        for (p, pairs, max) in [(7u64, 10u64, 6u64), (11, 50, 4), (13, 82, 6)] {
            let r = verify_eta_bound(PrimeModulus::new(p).unwrap()).unwrap();
            assert_eq!(r.good_pairs, pairs);
            assert_eq!(r.max_eta, max);
        }
    }
}
