use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::PrimeModulus;
use crate::qsim::oracle::BlackBox;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollisionReport {
    pub p: u64,
    pub degree: usize,
    pub seed: u64,
    pub trials: u64,
    pub collisions: u64,
    pub estimate: f64,
    /// `1/p`.
    pub expected: f64,
    /// `sqrt(q (1 - q) / trials)` at `q = 1/p`.
    pub std_error: f64,
    pub z_score: f64,
}

impl CollisionReport {
    pub fn within_sigmas(&self, sigmas: f64) -> bool {
        self.z_score.abs() <= sigmas
    }
}

/// Monte Carlo estimate of `Pr[B(r, s) = B(r', s')]` over `r != r'`.
pub fn collision_experiment(
    m: PrimeModulus,
    degree: usize,
    trials: u64,
    seed: u64,
) -> Result<CollisionReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bb = BlackBox::random(m, degree, &mut rng)?;
    let p = m.value();
    let mut collisions = 0u64;
    for _ in 0..trials {
        let r = rng.random_range(0..p);
        let r2 = (r + rng.random_range(1..p)) % p;
        let s = rng.random_range(0..p);
        let s2 = rng.random_range(0..p);
        let a = bb.query(m.from_residue(r), m.from_residue(s));
        let b = bb.query(m.from_residue(r2), m.from_residue(s2));
        collisions += u64::from(a == b);
    }
    let expected = 1.0 / p as f64;
    let estimate = collisions as f64 / trials as f64;
    let std_error = (expected * (1.0 - expected) / trials as f64).sqrt();
    Ok(CollisionReport {
        p,
        degree,
        seed,
        trials,
        collisions,
        estimate,
        expected,
        std_error,
        z_score: (estimate - expected) / std_error,
    })
}

/// `(collisions, pairs)` over every `(r, s), (r', s')` with `r != r'`.
pub fn collision_exhaustive(bb: &mut BlackBox) -> (u64, u64) {
    let m = bb.modulus();
    let p = m.value();
    let mut table = vec![0u64; (p * p) as usize];
    for r in m.elements() {
        for s in m.elements() {
            table[(r.value() * p + s.value()) as usize] = bb.query(r, s).value();
        }
    }
    let mut hits = 0;
    let mut pairs = 0;
    for r in 0..p {
        for r2 in (0..p).filter(|&r2| r2 != r) {
            for s in 0..p {
                for s2 in 0..p {
                    pairs += 1;
                    hits += u64::from(table[(r * p + s) as usize] == table[(r2 * p + s2) as usize]);
                }
            }
        }
    }
    (hits, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn exhaustive_rate_is_one_over_p() {
        let m = fp(5);
        for seed in 0..4 {
            let mut bb = BlackBox::random(m, 2, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let (hits, pairs) = collision_exhaustive(&mut bb);
            assert_eq!(pairs, 5 * 4 * 25);
            assert_eq!(hits * 5, pairs);
        }
    }

    #[test]
    fn rejects_zero_trials() {
        assert!(collision_experiment(fp(5), 2, 0, 1).is_err());
    }

    #[test]
    fn small_run_is_reproducible() {
        let a = collision_experiment(fp(11), 2, 5000, 42).unwrap();
        let b = collision_experiment(fp(11), 2, 5000, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.within_sigmas(4.0));
    }
}
