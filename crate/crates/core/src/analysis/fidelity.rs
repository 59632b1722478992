use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{FieldElement, PrimeModulus};

use super::bounds::fidelity_bound;

/// Largest `p` for the dense Gram-matrix SVD.
pub const FIDELITY_MAX_P: u64 = 512;

/// `Q(r) = sum_i q_i r^i` for `q = (q_1, ..., q_n)`.
pub fn evaluate_hidden(q: &[FieldElement], r: FieldElement) -> FieldElement {
    let mut acc = r.modulus().zero();
    for &c in q.iter().rev() {
        acc = (acc + c) * r;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FidelityReport {
    pub p: u64,
    pub q: Vec<FieldElement>,
    pub q_tilde: Vec<FieldElement>,
    /// `#{r : Q(r) + z = Q~(r) + z~}`, indexed `[z][z~]`; the Gram matrix is this over `p`.
    pub gram_counts: Vec<Vec<u32>>,
    pub max_intersections: u32,
    pub fidelity: f64,
    /// `alpha * sqrt(p)` with `alpha` the largest Gram entry.
    pub spectral_bound: f64,
    /// `n / sqrt(p)`.
    pub bound: f64,
}

impl FidelityReport {
    pub fn within_bounds(&self, tol: f64) -> bool {
        self.fidelity >= -tol
            && self.fidelity <= self.spectral_bound + tol
            && self.spectral_bound <= self.bound + tol
    }
}

/// Fidelity of the two polynomial states from the `p x p` overlap matrix.
///
/// The coset states of one polynomial are orthonormal, so
/// `F = (1/p) ||G||_1` with `G_{z,z~} = <phi_{Q,z}|phi_{Q~,z~}>`.
pub fn fidelity_exact(
    m: PrimeModulus,
    q: &[FieldElement],
    q_tilde: &[FieldElement],
) -> Result<FidelityReport> {
    let p = m.value();
    if p > FIDELITY_MAX_P {
        return Err(Error::guard("fidelity Gram matrix", p as u128, FIDELITY_MAX_P as u128));
    }
    if q.iter().chain(q_tilde).any(|e| e.modulus() != m) {
        return Err(Error::InvalidArgument("coefficients from another field".into()));
    }
    let n = q.len().max(q_tilde.len());
    if n == 0 {
        return Err(Error::InvalidArgument("empty coefficient tuple".into()));
    }
    let pad = |c: &[FieldElement]| {
        let mut v = c.to_vec();
        v.resize(n, m.zero());
        v
    };
    let (a, b) = (pad(q), pad(q_tilde));
    if a == b {
        return Err(Error::InvalidArgument("the two polynomials coincide".into()));
    }

    // Q(r) + z = Q~(r) + z~  iff  z - z~ = Q~(r) - Q(r)
    let ps = p as usize;
    let mut diff_hist = vec![0u32; ps];
    for r in m.elements() {
        diff_hist[(evaluate_hidden(&b, r) - evaluate_hidden(&a, r)).value() as usize] += 1;
    }
    let mut counts = vec![vec![0u32; ps]; ps];
    for (z, row) in counts.iter_mut().enumerate() {
        for (zt, c) in row.iter_mut().enumerate() {
            *c = diff_hist[(z + ps - zt) % ps];
        }
    }
    let max_intersections = diff_hist.iter().copied().max().unwrap_or(0);

    let gram = DMatrix::from_fn(ps, ps, |i, j| counts[i][j] as f64 / p as f64);
    let trace_norm: f64 = gram.singular_values().iter().sum();
    let alpha = max_intersections as f64 / p as f64;
    Ok(FidelityReport {
        p,
        q: a,
        q_tilde: b,
        gram_counts: counts,
        max_intersections,
        fidelity: trace_norm / p as f64,
        spectral_bound: alpha * (p as f64).sqrt(),
        bound: fidelity_bound(p, n),
    })
}

/// `sqrt(A)` for a Hermitian positive semidefinite `A`.
pub fn psd_sqrt(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = a.clone().symmetric_eigen();
    let roots = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    let v = &eig.eigenvectors;
    v * DMatrix::from_diagonal(&roots) * v.adjoint()
}

/// `||A||_1`, the sum of singular values.
pub fn trace_norm(a: &DMatrix<Complex64>) -> f64 {
    a.singular_values().iter().sum()
}

/// `F(rho, sigma) = || sqrt(rho) sqrt(sigma) ||_1`.
pub fn fidelity_dense(rho: &DMatrix<Complex64>, sigma: &DMatrix<Complex64>) -> f64 {
    trace_norm(&(psd_sqrt(rho) * psd_sqrt(sigma)))
}

/// A state given by its spectral decomposition: weights and eigenvector columns.
#[derive(Clone, Debug)]
pub struct SpectralState {
    pub weights: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl SpectralState {
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let d = DVector::from_iterator(
            self.weights.len(),
            self.weights.iter().map(|&w| Complex64::new(w, 0.0)),
        );
        &self.vectors * DMatrix::from_diagonal(&d) * self.vectors.adjoint()
    }

    /// Random weights on a random orthonormal basis of `C^dim`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let raw = DMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let vectors = raw.qr().q();
        let mut weights: Vec<f64> = (0..dim)
            .map(|_| {
                if rng.random_bool(0.2) {
                    0.0
                } else {
                    rng.random::<f64>()
                }
            })
            .collect();
        if weights.iter().all(|&w| w == 0.0) {
            weights[0] = 1.0;
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        SpectralState { weights, vectors }
    }
}

/// `alpha * min(sum sqrt(lambda_i), sum sqrt(mu_j))` with
/// `alpha = max |<psi_i|phi_j>|`.
pub fn overlap_fidelity_bound(rho: &SpectralState, sigma: &SpectralState) -> f64 {
    let overlaps = rho.vectors.adjoint() * &sigma.vectors;
    let alpha = overlaps.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let s = |w: &[f64]| w.iter().map(|x| x.sqrt()).sum::<f64>();
    alpha * s(&rho.weights).min(s(&sigma.weights))
}
