use num_complex::Complex64;
use serde::Serialize;

use crate::error::{checked_power, Error, Result};
use crate::ff::{FieldElement, PrimeModulus};
use crate::analysis::{eta_histogram_forward, per_x_success};
use crate::systems::{eta_counts_forward, solution_sets_forward, tuple_index, BRUTE_FORCE_LIMIT};

use super::dense::{
    fourier_conjugate, max_abs_diff, measure_x_block, off_block_residual, polynomial_state,
    roots_of_unity, DensityOperator,
};
use super::relabel::{build_ux, psi_state, reduced_state_from_solutions, CompletionOrder};

/// `A(delta) = sum_w f_w omega^<delta|w>` for every `delta`, one axis at a time.
fn character_sums(p: u64, n: usize, f: &[f64]) -> Vec<Complex64> {
    let ps = p as usize;
    let omega = roots_of_unity(p);
    let mut data: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut line = vec![Complex64::new(0.0, 0.0); ps];
    for axis in 0..n {
        let stride = ps.pow((n - 1 - axis) as u32);
        let block = stride * ps;
        for start in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (d, slot) in line.iter_mut().enumerate() {
                    *slot = (0..ps)
                        .map(|t| data[base + t * stride] * omega[(d * t) % ps])
                        .sum();
                }
                for (d, v) in line.iter().enumerate() {
                    data[base + d * stride] = *v;
                }
            }
        }
    }
    data
}

/// `Pr(q^) = p^-(k+n) |sum_w sqrt(eta_w) omega^<q - q^|w>|^2`, indexed by
/// `tuple_index(q^)`. `etas` is indexed by `tuple_index(w)`.
pub fn outcome_distribution(m: PrimeModulus, q: &[FieldElement], etas: &[u32]) -> Result<Vec<f64>> {
    let n = q.len();
    let p = m.value();
    let labels = checked_power("outcome distribution", p, n, BRUTE_FORCE_LIMIT)? as usize;
    if etas.len() != labels {
        return Err(Error::LengthMismatch {
            expected: labels,
            actual: etas.len(),
        });
    }
    let points: u64 = etas.iter().map(|&e| e as u64).sum();
    let roots: Vec<f64> = etas.iter().map(|&e| (e as f64).sqrt()).collect();
    let sums = character_sums(p, n, &roots);
    let scale = points as f64 * labels as f64;
    let mut out = vec![0.0; labels];
    for (idx, qh) in crate::systems::all_tuples(m, n).enumerate() {
        let delta: Vec<FieldElement> = q.iter().zip(&qh).map(|(&a, &b)| a - b).collect();
        out[idx] = sums[tuple_index(&delta)].norm_sqr() / scale;
    }
    Ok(out)
}

/// Dense `k = n` pipeline for one hidden polynomial: `rho_Q`, its Fourier
/// conjugate, and the `k`-fold tensor power.
pub struct DensePipeline {
    modulus: PrimeModulus,
    q: Vec<FieldElement>,
    single: DensityOperator,
    conjugated: DensityOperator,
    tensor: DensityOperator,
}

impl DensePipeline {
    pub fn new(modulus: PrimeModulus, q: &[FieldElement]) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidArgument("hidden polynomial needs degree >= 1".into()));
        }
        let single = polynomial_state(modulus, q)?;
        let conjugated = fourier_conjugate(&single, modulus.value())?;
        let tensor = conjugated.tensor_power(q.len())?;
        Ok(DensePipeline {
            modulus,
            q: q.to_vec(),
            single,
            conjugated,
            tensor,
        })
    }

    pub fn copies(&self) -> usize {
        self.q.len()
    }

    pub fn single(&self) -> &DensityOperator {
        &self.single
    }

    pub fn conjugated(&self) -> &DensityOperator {
        &self.conjugated
    }

    pub fn tensor(&self) -> &DensityOperator {
        &self.tensor
    }

    pub fn off_block_residual(&self) -> f64 {
        off_block_residual(&self.tensor, self.modulus.value(), self.copies())
    }

    pub fn measure(&self, x: &[FieldElement]) -> Result<(f64, DensityOperator)> {
        if x.len() != self.copies() {
            return Err(Error::Shape(format!(
                "label has {} entries, pipeline has k = n = {}",
                x.len(),
                self.copies()
            )));
        }
        measure_x_block(&self.tensor, self.modulus.value(), x)
    }

    /// Largest entry deviation between the dense block at `x` and the state
    /// assembled from solution sets.
    pub fn reduced_state_residual(&self, x: &[FieldElement]) -> Result<f64> {
        let (_, block) = self.measure(x)?;
        let sets = solution_sets_forward(self.modulus, x, self.copies())?;
        let built = reduced_state_from_solutions(self.modulus, &self.q, &sets);
        Ok(max_abs_diff(block.matrix(), &built))
    }

    /// `<psi_q^| U_x rho~^x U_x^dagger |psi_q^>` for every `q^`.
    pub fn outcome_distribution(&self, x: &[FieldElement], order: CompletionOrder) -> Result<Vec<f64>> {
        let (_, block) = self.measure(x)?;
        let sets = solution_sets_forward(self.modulus, x, self.copies())?;
        let u = build_ux(&sets, order)?;
        let sigma = &u * block.matrix() * u.adjoint();
        Ok(crate::systems::all_tuples(self.modulus, self.copies())
            .map(|qh| {
                let psi = psi_state(self.modulus, &qh);
                (psi.adjoint() * &sigma * &psi)[(0, 0)].re
            })
            .collect())
    }

    /// Probability that the final measurement returns the hidden coefficients.
    pub fn detection_probability(&self, x: &[FieldElement], order: CompletionOrder) -> Result<f64> {
        let (_, block) = self.measure(x)?;
        let sets = solution_sets_forward(self.modulus, x, self.copies())?;
        let u = build_ux(&sets, order)?;
        let psi = psi_state(self.modulus, &self.q);
        let sigma = &u * block.matrix() * u.adjoint();
        Ok((psi.adjoint() * sigma * &psi)[(0, 0)].re)
    }
}

/// Worst-case deviations of the dense pipeline from the combinatorial
/// formulas over every label `x`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineValidation {
    pub p: u64,
    pub n: usize,
    pub k: usize,
    pub labels: u64,
    pub off_block_residual: f64,
    pub max_trace_error: f64,
    pub max_reduced_state_error: f64,
    pub max_detection_error: f64,
    pub max_distribution_error: f64,
    /// `|canonical - reversed|` completion of `U_x`.
    pub max_completion_gap: f64,
}

impl PipelineValidation {
    pub fn passes(&self) -> bool {
        self.off_block_residual < 1e-12
            && self.max_trace_error < 1e-12
            && self.max_reduced_state_error < 1e-10
            && self.max_detection_error < 1e-10
            && self.max_distribution_error < 1e-10
            && self.max_completion_gap < 1e-10
    }
}

/// Runs the dense pipeline for `q` on every label and compares it with
/// [`per_x_success`] and [`outcome_distribution`].
pub fn validate_pipeline(m: PrimeModulus, q: &[FieldElement]) -> Result<PipelineValidation> {
    let pipe = DensePipeline::new(m, q)?;
    let n = q.len();
    let p = m.value();
    let pk = (p as f64).powi(n as i32);
    let mut out = PipelineValidation {
        p,
        n,
        k: n,
        labels: 0,
        off_block_residual: pipe.off_block_residual(),
        max_trace_error: 0.0,
        max_reduced_state_error: 0.0,
        max_detection_error: 0.0,
        max_distribution_error: 0.0,
        max_completion_gap: 0.0,
    };
    let q_index = tuple_index(q);
    for x in crate::systems::all_tuples(m, n) {
        out.labels += 1;
        let (prob, _) = pipe.measure(&x)?;
        out.max_trace_error = out.max_trace_error.max((prob - 1.0 / pk).abs());
        out.max_reduced_state_error = out.max_reduced_state_error.max(pipe.reduced_state_residual(&x)?);
        let expected = per_x_success(&eta_histogram_forward(m, &x, n)?);
        let canonical = pipe.outcome_distribution(&x, CompletionOrder::Canonical)?;
        let reversed = pipe.outcome_distribution(&x, CompletionOrder::Reversed)?;
        let comb = outcome_distribution(m, q, &eta_counts_forward(m, &x, n)?)?;
        out.max_detection_error = out.max_detection_error.max((canonical[q_index] - expected).abs());
        for ((a, b), c) in canonical.iter().zip(&reversed).zip(&comb) {
            out.max_completion_gap = out.max_completion_gap.max((a - b).abs());
            out.max_distribution_error = out.max_distribution_error.max((a - c).abs());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::all_tuples;

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn example_detection_probability() {
        let m = fp(5);
        let x = m.tuple(&[1, 2]);
        for q in [m.tuple(&[0, 0]), m.tuple(&[3, 1])] {
            let pipe = DensePipeline::new(m, &q).unwrap();
            let d = pipe.detection_probability(&x, CompletionOrder::Canonical).unwrap();
            assert!((d - 0.586_274_169_979_695).abs() < 1e-10);
        }
    }

    #[test]
    fn dense_matches_combinatorial_small() {
        let m = fp(3);
        let q = m.tuple(&[2, 1]);
        let pipe = DensePipeline::new(m, &q).unwrap();
        assert!(pipe.off_block_residual() < 1e-12);
        for x in all_tuples(m, 2) {
            let (prob, _) = pipe.measure(&x).unwrap();
            assert!((prob - 1.0 / 9.0).abs() < 1e-12);
            assert!(pipe.reduced_state_residual(&x).unwrap() < 1e-10);
            let hist = eta_histogram_forward(m, &x, 2).unwrap();
            let a = pipe.detection_probability(&x, CompletionOrder::Canonical).unwrap();
            let b = pipe.detection_probability(&x, CompletionOrder::Reversed).unwrap();
            assert!((a - per_x_success(&hist)).abs() < 1e-10);
            assert!((a - b).abs() < 1e-12);
            let dense = pipe.outcome_distribution(&x, CompletionOrder::Reversed).unwrap();
            let comb = outcome_distribution(m, &q, &eta_counts_forward(m, &x, 2).unwrap()).unwrap();
            for (d, c) in dense.iter().zip(&comb) {
                assert!((d - c).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn distribution_sums_to_one_and_shifts() {
        let m = fp(7);
        let x = m.tuple(&[3, 5]);
        let etas = eta_counts_forward(m, &x, 2).unwrap();
        let q = m.tuple(&[1, 4]);
        let d = outcome_distribution(m, &q, &etas).unwrap();
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let hist = eta_histogram_forward(m, &x, 2).unwrap();
        assert!((d[tuple_index(&q)] - per_x_success(&hist)).abs() < 1e-12);
        let q2 = m.tuple(&[6, 2]);
        let d2 = outcome_distribution(m, &q2, &etas).unwrap();
        for qh in all_tuples(m, 2) {
            let shifted: Vec<_> = qh.iter().zip(q2.iter().zip(&q)).map(|(&a, (&b, &c))| a + b - c).collect();
            assert!((d[tuple_index(&qh)] - d2[tuple_index(&shifted)]).abs() < 1e-12);
        }
    }

    #[test]
    fn cubic_pipeline_at_three() {
        let m = fp(3);
        let v = validate_pipeline(m, &m.tuple(&[1, 0, 2])).unwrap();
        assert_eq!(v.labels, 27);
        assert!(v.passes(), "{v:?}");
    }

    #[test]
    fn zero_label_detection() {
        let m = fp(3);
        let pipe = DensePipeline::new(m, &m.tuple(&[1, 1])).unwrap();
        let d = pipe.detection_probability(&m.tuple(&[0, 0]), CompletionOrder::Canonical).unwrap();
        assert!((d - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_wrong_label_length() {
        let m = fp(3);
        let pipe = DensePipeline::new(m, &m.tuple(&[1, 1])).unwrap();
        assert!(pipe.measure(&m.tuple(&[1])).is_err());
    }
}
