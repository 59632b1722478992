use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{checked_power, Error, Result};
use crate::systems::{eta_counts_forward, tuple_from_index, tuple_index, BRUTE_FORCE_LIMIT};

use super::detect::outcome_distribution;
use super::oracle::BlackBox;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeasurementOutcome {
    pub x: Vec<u64>,
    pub q_hat: Vec<u64>,
    pub success: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunTranscript {
    pub p: u64,
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub outcomes: Vec<MeasurementOutcome>,
    pub successes: u64,
    pub success_rate: f64,
    pub queries: u64,
}

/// Samples the `k = n` algorithm `repetitions` times against `bb`.
///
/// Each repetition prepares `k` copies (one oracle query each on a uniform
/// `(r, s)`), draws a uniform Fourier label `x`, and samples `q^` from
/// [`outcome_distribution`].
pub fn run_algorithm(bb: &mut BlackBox, repetitions: u64, seed: u64) -> Result<RunTranscript> {
    if repetitions == 0 {
        return Err(Error::InvalidArgument("repetitions must be at least 1".into()));
    }
    let m = bb.modulus();
    let p = m.value();
    let n = bb.degree();
    let k = n;
    let labels = checked_power("sampled run", p, k, BRUTE_FORCE_LIMIT)?;
    checked_power("sampled run", p, 2 * k, BRUTE_FORCE_LIMIT * 10)?;
    let q = bb.hidden().to_vec();
    let q_index = tuple_index(&q);
    let queries_before = bb.queries();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cache: HashMap<usize, Vec<f64>> = HashMap::new();
    let mut outcomes = Vec::with_capacity(repetitions as usize);
    let mut successes = 0;
    for _ in 0..repetitions {
        for _ in 0..k {
            let r = m.from_residue(rng.random_range(0..p));
            let s = m.from_residue(rng.random_range(0..p));
            bb.query(r, s);
        }
        let x_index = rng.random_range(0..labels as usize);
        let x = tuple_from_index(m, k, x_index);
        let dist = match cache.get(&x_index) {
            Some(d) => d,
            None => {
                let etas = eta_counts_forward(m, &x, n)?;
                let d = outcome_distribution(m, &q, &etas)?;
                cache.entry(x_index).or_insert(d)
            }
        };
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut pick = dist.len() - 1;
        for (i, &pr) in dist.iter().enumerate() {
            acc += pr;
            if u < acc {
                pick = i;
                break;
            }
        }
        let success = pick == q_index;
        successes += u64::from(success);
        outcomes.push(MeasurementOutcome {
            x: x.iter().map(|e| e.value()).collect(),
            q_hat: tuple_from_index(m, n, pick).iter().map(|e| e.value()).collect(),
            success,
        });
    }
    Ok(RunTranscript {
        p,
        n,
        k,
        seed,
        outcomes,
        successes,
        success_rate: successes as f64 / repetitions as f64,
        queries: bb.queries() - queries_before,
    })
}
