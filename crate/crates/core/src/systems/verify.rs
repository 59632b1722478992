//! Exhaustive agreement checks between the closed-form solvers and
//! enumeration.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{checked_power, Result};
use crate::ff::PrimeModulus;
use crate::poly::RootStrategy;

use super::cubic::{is_good_cubic_pair, solve_cubic_with, CubicBranch, DEFAULT_ROOT_SEED};
use super::{
    all_tuples, solution_sets_forward, solve_bruteforce, solve_quadratic, SystemInstance,
    BRUTE_FORCE_LIMIT,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticVerification {
    pub p: u64,
    pub instances: u64,
    pub mismatches: u64,
    pub max_eta_good: u64,
}

/// `solve_quadratic` against `solve_bruteforce` on every `(x, w)`.
pub fn verify_quadratic_exhaustive(m: PrimeModulus) -> Result<QuadraticVerification> {
    checked_power("quadratic verification", m.value(), 6, BRUTE_FORCE_LIMIT * 10)?;
    let xs: Vec<_> = all_tuples(m, 2).collect();
    let rows = xs
        .par_iter()
        .map(|x| -> Result<(u64, u64, u64)> {
            let mut count = 0;
            let mut bad = 0;
            let mut max_eta = 0;
            for w in all_tuples(m, 2) {
                let inst = SystemInstance::new(m, 2, x.clone(), w)?;
                let closed = solve_quadratic(&inst)?;
                count += 1;
                bad += u64::from(closed != solve_bruteforce(&inst)?);
                if super::is_good_quadratic_pair(x[0], x[1]) {
                    max_eta = max_eta.max(closed.eta() as u64);
                }
            }
            Ok((count, bad, max_eta))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = QuadraticVerification {
        p: m.value(),
        instances: 0,
        mismatches: 0,
        max_eta_good: 0,
    };
    for (c, b, e) in rows {
        out.instances += c;
        out.mismatches += b;
        out.max_eta_good = out.max_eta_good.max(e);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubicVerification {
    pub p: u64,
    /// Normalized tuples `(x, y, u, v, w)` checked: `p^5`.
    pub instances: u64,
    pub mismatches: u64,
    pub good_pairs: u64,
    pub branch_counts: BTreeMap<CubicBranch, u64>,
    pub branch_max_eta: BTreeMap<CubicBranch, u64>,
    /// Solution sets larger than their branch cap.
    pub cap_violations: u64,
    /// Largest `eta` over good pairs.
    pub max_eta_good: u64,
}

/// `solve_cubic_with` against forward enumeration for every label
/// `(1, x, y)` and target `(u, v, w)`.
pub fn verify_cubic_exhaustive(m: PrimeModulus, strategy: RootStrategy) -> Result<CubicVerification> {
    let p = m.value();
    checked_power("cubic verification", p, 8, BRUTE_FORCE_LIMIT * 1000)?;
    let pairs: Vec<_> = all_tuples(m, 2).collect();
    let rows = pairs
        .par_iter()
        .enumerate()
        .map(|(i, xy)| -> Result<CubicVerification> {
            let x = vec![m.one(), xy[0], xy[1]];
            let good = is_good_cubic_pair(xy[0], xy[1]);
            let sets = solution_sets_forward(m, &x, 3)?;
            let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_ROOT_SEED ^ i as u64);
            let mut part = CubicVerification {
                p,
                instances: 0,
                mismatches: 0,
                good_pairs: u64::from(good),
                branch_counts: BTreeMap::new(),
                branch_max_eta: BTreeMap::new(),
                cap_violations: 0,
                max_eta_good: 0,
            };
            for (w, expected) in all_tuples(m, 3).zip(&sets) {
                let inst = SystemInstance::new(m, 3, x.clone(), w)?;
                let got = solve_cubic_with(&inst, strategy, &mut rng)?;
                let eta = got.solutions.eta() as u64;
                part.instances += 1;
                part.mismatches += u64::from(&got.solutions != expected);
                *part.branch_counts.entry(got.branch).or_insert(0) += 1;
                let slot = part.branch_max_eta.entry(got.branch).or_insert(0);
                *slot = (*slot).max(eta);
                if got.branch.cap().is_some_and(|cap| eta > cap as u64) {
                    part.cap_violations += 1;
                }
                if good {
                    part.max_eta_good = part.max_eta_good.max(eta);
                }
            }
            Ok(part)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = CubicVerification {
        p,
        instances: 0,
        mismatches: 0,
        good_pairs: 0,
        branch_counts: BTreeMap::new(),
        branch_max_eta: BTreeMap::new(),
        cap_violations: 0,
        max_eta_good: 0,
    };
    for part in rows {
        out.instances += part.instances;
        out.mismatches += part.mismatches;
        out.good_pairs += part.good_pairs;
        out.cap_violations += part.cap_violations;
        out.max_eta_good = out.max_eta_good.max(part.max_eta_good);
        for (b, c) in part.branch_counts {
            *out.branch_counts.entry(b).or_insert(0) += c;
        }
        for (b, e) in part.branch_max_eta {
            let slot = out.branch_max_eta.entry(b).or_insert(0);
            *slot = (*slot).max(e);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_small() {
        let r = verify_quadratic_exhaustive(PrimeModulus::new(5).unwrap()).unwrap();
        assert_eq!(r.instances, 625);
        assert_eq!(r.mismatches, 0);
        assert_eq!(r.max_eta_good, 2);
    }

    #[test]
    fn cubic_small() {
        let m = PrimeModulus::new(7).unwrap();
        let r = verify_cubic_exhaustive(m, RootStrategy::Exhaustive).unwrap();
        assert_eq!(r.instances, 16_807);
        assert_eq!(r.mismatches, 0);
        assert_eq!(r.cap_violations, 0);
        assert_eq!(r.good_pairs, 10);
        let s = verify_cubic_exhaustive(m, RootStrategy::Split).unwrap();
        assert_eq!(s.mismatches, 0);
        assert_eq!(s.branch_counts, r.branch_counts);
    }
}
