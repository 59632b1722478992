use rayon::prelude::*;
use serde::Serialize;

use crate::error::{checked_power, Error, Result};
use crate::ff::{FieldElement, PrimeModulus};
use crate::systems::cubic::is_good_cubic_pair;
use crate::systems::{is_good_quadratic_pair, Tuple, BRUTE_FORCE_LIMIT};

use super::bounds::{cubic_bound, quadratic_bound};
use super::histogram::{eta_histogram_forward, per_x_success};

/// Cap on `rays * p^k` for one success computation.
pub const SUCCESS_WORK_LIMIT: u128 = 200_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuccessMode {
    /// Every label `x`.
    Full,
    /// Only the labels the closing bounds are derived from.
    #[serde(rename = "paper_restricted")]
    Restricted,
}

impl SuccessMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SuccessMode::Full => "full",
            SuccessMode::Restricted => "paper_restricted",
        }
    }
}

/// Contribution of one projective ray of labels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RaySuccess {
    /// Representative with first nonzero coordinate 1 (or all zero).
    pub x: Vec<u64>,
    /// Labels on the ray: `p - 1`, or 1 for the zero label.
    pub multiplicity: u64,
    pub restricted: bool,
    /// Detection probability shared by every label on the ray.
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuccessReport {
    pub p: u64,
    pub n: usize,
    pub k: usize,
    pub total_success: f64,
    pub restricted_success: f64,
    pub closing_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_x: Option<Vec<RaySuccess>>,
}

impl SuccessReport {
    pub fn success(&self, mode: SuccessMode) -> f64 {
        match mode {
            SuccessMode::Full => self.total_success,
            SuccessMode::Restricted => self.restricted_success,
        }
    }
}

/// One label per projective ray of `F_p^k`, zero label first.
pub fn projective_representatives(m: PrimeModulus, k: usize) -> Vec<Tuple> {
    let p = m.value() as usize;
    let mut reps = vec![vec![m.zero(); k]];
    for lead in 0..k {
        let tail = k - lead - 1;
        for idx in 0..p.pow(tail as u32) {
            let mut x = vec![m.zero(); lead];
            x.push(m.one());
            let mut rest = vec![m.zero(); tail];
            let mut v = idx;
            for slot in rest.iter_mut().rev() {
                *slot = m.from_residue((v % p) as u64);
                v /= p;
            }
            x.extend(rest);
            reps.push(x);
        }
    }
    reps
}

/// Whether `x` is one of the labels kept by the restricted analysis:
/// a good `(x, y)` for `n = 2`, or `x_1 != 0` with a good normalized pair
/// for `n = 3`.
pub fn is_restricted_label(x: &[FieldElement], n: usize) -> bool {
    match (n, x) {
        (2, [a, b]) => is_good_quadratic_pair(*a, *b),
        (3, [a, b, c]) => !a.is_zero() && is_good_cubic_pair(*b / *a, *c / *a),
        _ => false,
    }
}

/// Closing lower bound for the restricted success, `n = 2` or `3`.
pub fn closing_bound(p: u64, n: usize) -> Option<f64> {
    match n {
        2 => Some(quadratic_bound(p)),
        3 => Some(cubic_bound(p)),
        _ => None,
    }
}

/// Exact success probability `P = p^-(2k+n) sum_x (sum_w sqrt eta_w^x)^2`
/// for `n = k`, in both modes.
///
/// Runs on the current rayon pool. Per-ray values are collected in ray order
/// and summed sequentially, so the result does not depend on the thread count.
pub fn total_success(m: PrimeModulus, n: usize, keep_per_x: bool) -> Result<SuccessReport> {
    let Some(bound) = closing_bound(m.value(), n) else {
        return Err(Error::Shape(format!(
            "success analysis covers n = k in {{2, 3}}, got n = {n}"
        )));
    };
    let k = n;
    let p = m.value();
    let per_ray = checked_power("success enumeration", p, k, BRUTE_FORCE_LIMIT)?;
    let rays = (p.pow(k as u32) - 1) / (p - 1) + 1;
    let work = per_ray * rays as u128;
    if work > SUCCESS_WORK_LIMIT {
        return Err(Error::guard("success enumeration", work, SUCCESS_WORK_LIMIT));
    }

    let reps = projective_representatives(m, k);
    let rows: Vec<RaySuccess> = reps
        .par_iter()
        .map(|x| -> Result<RaySuccess> {
            let hist = eta_histogram_forward(m, x, n)?;
            let zero = x.iter().all(|e| e.is_zero());
            Ok(RaySuccess {
                x: x.iter().map(|e| e.value()).collect(),
                multiplicity: if zero { 1 } else { p - 1 },
                restricted: is_restricted_label(x, n),
                probability: per_x_success(&hist),
            })
        })
        .collect::<Result<_>>()?;

    let pk = (p as f64).powi(k as i32);
    let mut full = 0.0;
    let mut restricted = 0.0;
    for row in &rows {
        let term = row.multiplicity as f64 * row.probability;
        full += term;
        if row.restricted {
            restricted += term;
        }
    }
    Ok(SuccessReport {
        p,
        n,
        k,
        total_success: full / pk,
        restricted_success: restricted / pk,
        closing_bound: bound,
        per_x: keep_per_x.then_some(rows),
    })
}
