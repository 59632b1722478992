use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ff::PrimeModulus;

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// `(p^2 - 3p + 2) (p(p+1)/2)^2 / p^6`.
pub fn quadratic_bound(p: u64) -> f64 {
    let p = p as f64;
    (p - 1.0) * (p - 2.0) * (p + 1.0) * (p + 1.0) / (4.0 * p.powi(4))
}

/// `(p - 1)(p - 4)^2 / (100 p^3)`.
pub fn cubic_bound(p: u64) -> f64 {
    let p = p as f64;
    (p - 1.0) * (p - 4.0) * (p - 4.0) / (100.0 * p.powi(3))
}

/// Upper bound `n / sqrt(p)` on the fidelity of two distinct univariate
/// polynomial states of degree at most `n`.
pub fn fidelity_bound(p: u64, n: usize) -> f64 {
    n as f64 / (p as f64).sqrt()
}

/// Smallest integer `k >= 2 (log N - log eps) / (-log F)` with
/// `log N = exponent * ln p`. `None` unless `F, eps` lie in `(0, 1)`.
pub fn copies_needed(p: u64, exponent: u64, epsilon: f64, fidelity: f64) -> Option<u64> {
    if !(fidelity > 0.0 && fidelity < 1.0 && epsilon > 0.0 && epsilon < 1.0) {
        return None;
    }
    let log_n = exponent as f64 * (p as f64).ln();
    let k = 2.0 * (log_n - epsilon.ln()) / -fidelity.ln();
    Some(k.ceil().max(0.0) as u64)
}

fn ratio_as_f64<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(*r.numer() as f64 / *r.denom() as f64)
}

/// Query-complexity bounds for `n`-degree polynomials in `m` variables at `p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QueryBoundReport {
    pub p: u64,
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    /// `C(n + m, m)`.
    pub binomial: u64,
    /// `log_p N = C(n + m, n) - 1`.
    pub log_p_states: u64,
    /// `4 C(n + m, m)`.
    pub upper: u64,
    /// `C(n + m, m)/m - 1`.
    #[serde(serialize_with = "ratio_as_f64")]
    pub lower: Ratio<u64>,
    pub fidelity_bound: f64,
    /// Copies that drive the error below `epsilon` at `F = n/sqrt p`.
    pub copies_needed: Option<u64>,
    pub quadratic_bound: f64,
    pub cubic_bound: f64,
}

pub fn analytic_bounds(
    m: PrimeModulus,
    n: usize,
    vars: usize,
    epsilon: f64,
) -> Result<QueryBoundReport> {
    if n == 0 || vars == 0 {
        return Err(Error::InvalidArgument(format!(
            "degree and variable count must be positive, got n = {n}, m = {vars}"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let overflow = || Error::InvalidArgument(format!("C({}, {vars}) overflows", n + vars));
    let c = binomial((n + vars) as u64, vars as u64).ok_or_else(overflow)?;
    let p = m.value();
    let lower = Ratio::new(c, vars as u64) - Ratio::from_integer(1);
    let fidelity = fidelity_bound(p, n);
    Ok(QueryBoundReport {
        p,
        n,
        m: vars,
        epsilon,
        binomial: c,
        log_p_states: c - 1,
        upper: 4 * c,
        lower,
        fidelity_bound: fidelity,
        copies_needed: copies_needed(p, c - 1, epsilon, fidelity),
        quadratic_bound: quadratic_bound(p),
        cubic_bound: cubic_bound(p),
    })
}
