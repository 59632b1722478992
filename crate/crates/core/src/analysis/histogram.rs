use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::ff::{FieldElement, PrimeModulus};
use crate::systems::{all_tuples, eta_counts_forward, Solver, SystemInstance};

/// `N_h = #{w : eta_w^x = h}` for one label `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaHistogram {
    p: u64,
    degree: usize,
    x: Vec<u64>,
    counts: BTreeMap<u64, u64>,
}

impl EtaHistogram {
    /// Compresses per-`w` solution counts into a histogram.
    pub fn from_eta_counts(
        m: PrimeModulus,
        degree: usize,
        x: &[FieldElement],
        etas: impl IntoIterator<Item = u64>,
    ) -> Self {
        let mut counts = BTreeMap::new();
        for eta in etas {
            *counts.entry(eta).or_insert(0) += 1;
        }
        EtaHistogram {
            p: m.value(),
            degree,
            x: x.iter().map(|e| e.value()).collect(),
            counts,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn copies(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[u64] {
        &self.x
    }

    /// `N_h`; zero for absent keys.
    pub fn count(&self, h: u64) -> u64 {
        self.counts.get(&h).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// `sum_h N_h`, which is `p^n`.
    pub fn labels(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `sum_h h N_h`, which is `p^k`.
    pub fn solutions(&self) -> u64 {
        self.counts.iter().map(|(h, n)| h * n).sum()
    }

    pub fn max_eta(&self) -> u64 {
        self.counts
            .iter()
            .rev()
            .find(|(_, &n)| n > 0)
            .map_or(0, |(&h, _)| h)
    }

    /// `sum_w sqrt(eta_w^x)`, accumulated in ascending `h`.
    pub fn sqrt_sum(&self) -> f64 {
        self.counts
            .iter()
            .map(|(&h, &n)| n as f64 * (h as f64).sqrt())
            .sum()
    }
}

/// Histogram by evaluating `Phi^(n)(b) x` on every `b` in `F_p^k`.
pub fn eta_histogram_forward(
    m: PrimeModulus,
    x: &[FieldElement],
    n: usize,
) -> Result<EtaHistogram> {
    let etas = eta_counts_forward(m, x, n)?;
    Ok(EtaHistogram::from_eta_counts(
        m,
        n,
        x,
        etas.into_iter().map(u64::from),
    ))
}

/// Histogram by running `solver` on every target `w`.
pub fn eta_histogram_with_solver(
    m: PrimeModulus,
    x: &[FieldElement],
    n: usize,
    solver: Solver,
) -> Result<EtaHistogram> {
    let mut etas = Vec::new();
    for w in all_tuples(m, n) {
        let inst = SystemInstance::new(m, n, x.to_vec(), w)?;
        etas.push(solver.solve(&inst)?.eta() as u64);
    }
    Ok(EtaHistogram::from_eta_counts(m, n, x, etas))
}

/// Probability that the final measurement returns the hidden coefficients
/// given label `x`: `(sum_w sqrt(eta_w^x))^2 / p^(k+n)`.
pub fn per_x_success(hist: &EtaHistogram) -> f64 {
    let s = hist.sqrt_sum();
    let scale = (hist.p as f64).powi((hist.copies() + hist.degree) as i32);
    s * s / scale
}
