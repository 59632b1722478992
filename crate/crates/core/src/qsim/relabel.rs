use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{FieldElement, PrimeModulus};
use crate::systems::{tuple_index, SolutionSet};

use super::dense::{max_abs_diff, roots_of_unity, CMatrix};

/// Order in which canonical basis vectors feed the complement Gram-Schmidt.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CompletionOrder {
    Canonical,
    Reversed,
}

pub const UNITARITY_TOL: f64 = 1e-10;

/// `|S_w> = eta^(-1/2) sum_{b in S_w} |b>` in the `p^k` basis.
pub fn solution_vector(set: &SolutionSet, dim: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(dim);
    let amp = Complex64::new(1.0 / (set.eta() as f64).sqrt(), 0.0);
    for b in set.iter() {
        v[tuple_index(b)] = amp;
    }
    v
}

/// `U_x` with `U_x |S_w> = |w>` for every `w` with `eta_w > 0`; the
/// orthogonal complement goes onto the unused labels in increasing order.
///
/// `sets` is indexed by `tuple_index(w)` and must cover `p^k = p^n` labels.
pub fn build_ux(sets: &[SolutionSet], order: CompletionOrder) -> Result<CMatrix> {
    let dim = sets.len();
    let total: usize = sets.iter().map(SolutionSet::eta).sum();
    if total != dim {
        return Err(Error::Shape(format!(
            "relabeling needs k = n: {total} points for {dim} labels"
        )));
    }
    let mut u = CMatrix::zeros(dim, dim);
    let mut basis: Vec<DVector<Complex64>> = Vec::with_capacity(dim);
    let mut unused = Vec::new();
    for (w, set) in sets.iter().enumerate() {
        if set.is_empty() {
            unused.push(w);
        } else {
            let v = solution_vector(set, dim);
            u.set_row(w, &v.adjoint());
            basis.push(v);
        }
    }

    let candidates: Box<dyn Iterator<Item = usize>> = match order {
        CompletionOrder::Canonical => Box::new(0..dim),
        CompletionOrder::Reversed => Box::new((0..dim).rev()),
    };
    let mut slots = unused.into_iter();
    for e in candidates {
        if basis.len() == dim {
            break;
        }
        let mut v = DVector::zeros(dim);
        v[e] = Complex64::new(1.0, 0.0);
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let c = b.dotc(&v);
                v -= b * c;
            }
        }
        let norm = v.norm();
        if norm < 1e-8 {
            continue;
        }
        v /= Complex64::new(norm, 0.0);
        let w = slots.next().expect("complement larger than unused labels");
        u.set_row(w, &v.adjoint());
        basis.push(v);
    }
    if basis.len() != dim {
        return Err(Error::InvalidArgument("Gram-Schmidt completion failed".into()));
    }
    let dev = max_abs_diff(&(&u * u.adjoint()), &CMatrix::identity(dim, dim));
    if dev > UNITARITY_TOL {
        return Err(Error::InvalidArgument(format!("U_x not unitary (deviation {dev:e})")));
    }
    Ok(u)
}

/// `|psi_q> = p^(-n/2) sum_w omega^<q|w> |w>`.
pub fn psi_state(m: PrimeModulus, q: &[FieldElement]) -> DVector<Complex64> {
    let p = m.value();
    let n = q.len();
    let omega = roots_of_unity(p);
    let dim = (p as usize).pow(n as u32);
    let scale = (p as f64).powf(-(n as f64) / 2.0);
    let mut v = DVector::zeros(dim);
    for (idx, w) in crate::systems::all_tuples(m, n).enumerate() {
        let e: FieldElement = q.iter().zip(&w).fold(m.zero(), |acc, (&a, &b)| acc + a * b);
        v[idx] = omega[e.value() as usize] * scale;
    }
    v
}

/// `(1/p^k) |a><a|` with `a = sum_w omega^<q|w> sqrt(eta_w) |S_w>`.
pub fn reduced_state_from_solutions(m: PrimeModulus, q: &[FieldElement], sets: &[SolutionSet]) -> CMatrix {
    let dim = sets.len();
    let omega = roots_of_unity(m.value());
    let mut a = DVector::zeros(dim);
    for (w_idx, (w, set)) in crate::systems::all_tuples(m, q.len()).zip(sets).enumerate() {
        debug_assert_eq!(tuple_index(&w), w_idx);
        if set.is_empty() {
            continue;
        }
        let e: FieldElement = q.iter().zip(&w).fold(m.zero(), |acc, (&c, &d)| acc + c * d);
        let coeff = omega[e.value() as usize] * (set.eta() as f64).sqrt();
        a += solution_vector(set, dim) * coeff;
    }
    let total: usize = sets.iter().map(SolutionSet::eta).sum();
    &a * a.adjoint() / Complex64::new(total as f64, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{all_tuples, solution_sets_forward};

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn unitary_for_every_label() {
        for (p, n) in [(3u64, 2usize), (5, 2), (3, 3)] {
            let m = fp(p);
            for x in all_tuples(m, n) {
                let sets = solution_sets_forward(m, &x, n).unwrap();
                for order in [CompletionOrder::Canonical, CompletionOrder::Reversed] {
                    let u = build_ux(&sets, order).unwrap();
                    for (w, set) in sets.iter().enumerate() {
                        if set.is_empty() {
                            continue;
                        }
                        let image = &u * solution_vector(set, sets.len());
                        for (i, c) in image.iter().enumerate() {
                            let want = if i == w { 1.0 } else { 0.0 };
                            assert!((c - Complex64::new(want, 0.0)).norm() < 1e-10);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn singleton_maps_basis_state() {
        let m = fp(5);
        let x = m.tuple(&[1, 2]);
        let sets = solution_sets_forward(m, &x, 2).unwrap();
        let u = build_ux(&sets, CompletionOrder::Canonical).unwrap();
        let (w, set) = sets.iter().enumerate().find(|(_, s)| s.eta() == 1).unwrap();
        let b = tuple_index(&set.solutions()[0]);
        assert!((u[(w, b)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_non_square_shapes() {
        let m = fp(3);
        let sets = solution_sets_forward(m, &m.tuple(&[1, 2, 1]), 2).unwrap();
        assert!(build_ux(&sets, CompletionOrder::Canonical).is_err());
    }

    #[test]
    fn psi_states_are_orthonormal() {
        let m = fp(3);
        let a = psi_state(m, &m.tuple(&[1, 2]));
        let b = psi_state(m, &m.tuple(&[2, 2]));
        assert!((a.norm() - 1.0).abs() < 1e-12);
        assert!(a.dotc(&b).norm() < 1e-12);
    }
}
