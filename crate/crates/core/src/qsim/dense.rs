use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::analysis::fidelity::evaluate_hidden;
use crate::error::{Error, Result};
use crate::ff::{FieldElement, PrimeModulus};
use crate::systems::Tuple;

/// Largest total dimension a dense operator may have.
pub const DENSE_DIM_LIMIT: usize = 4096;

pub type CMatrix = DMatrix<Complex64>;

/// `omega^j = exp(2 pi i j / p)` for `j = 0..p`.
pub fn roots_of_unity(p: u64) -> Vec<Complex64> {
    (0..p)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / p as f64))
        .collect()
}

fn check_dim(what: &'static str, dim: u128) -> Result<usize> {
    if dim > DENSE_DIM_LIMIT as u128 {
        Err(Error::guard(what, dim, DENSE_DIM_LIMIT as u128))
    } else {
        Ok(dim as usize)
    }
}

/// Largest entry modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Hermitian, unit-trace complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub const HERMITIAN_TOL: f64 = 1e-12;
    pub const TRACE_TOL: f64 = 1e-12;
    pub const PSD_TOL: f64 = 1e-10;

    /// Checks Hermiticity and trace. Positivity is checked separately by
    /// [`DensityOperator::min_eigenvalue`].
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape(format!(
                "density operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_dim("density operator", matrix.nrows() as u128)?;
        let herm = max_abs_diff(&matrix, &matrix.adjoint());
        if herm > Self::HERMITIAN_TOL {
            return Err(Error::InvalidArgument(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > Self::TRACE_TOL {
            return Err(Error::InvalidArgument(format!("trace is {tr}, not 1")));
        }
        Ok(DensityOperator { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.symmetric_eigenvalues().min()
    }

    pub fn is_positive(&self) -> bool {
        self.min_eigenvalue() >= -Self::PSD_TOL
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.matrix
            .symmetric_eigenvalues()
            .iter()
            .filter(|&&l| l.abs() > tol)
            .count()
    }

    pub fn kron(&self, other: &DensityOperator) -> Result<DensityOperator> {
        check_dim("tensor power", self.dim() as u128 * other.dim() as u128)?;
        Ok(DensityOperator {
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    /// `rho^(x) k`.
    pub fn tensor_power(&self, k: usize) -> Result<DensityOperator> {
        if k == 0 {
            return Err(Error::InvalidArgument("tensor power needs k >= 1".into()));
        }
        check_dim("tensor power", (self.dim() as u128).saturating_pow(k as u32))?;
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.kron(self)?;
        }
        Ok(acc)
    }
}

/// `|phi_{Q,z}> = p^(-1/2) sum_r |r>|Q(r) + z>`, index `r * p + s`.
pub fn coset_state(m: PrimeModulus, q: &[FieldElement], z: FieldElement) -> Result<DVector<Complex64>> {
    let p = m.value() as usize;
    let dim = check_dim("coset state", (p * p) as u128)?;
    let amp = Complex64::new(1.0 / (p as f64).sqrt(), 0.0);
    let mut v = DVector::zeros(dim);
    for r in m.elements() {
        let s = (evaluate_hidden(q, r) + z).value() as usize;
        v[r.value() as usize * p + s] = amp;
    }
    Ok(v)
}

/// `rho_Q = (1/p) sum_z |phi_{Q,z}><phi_{Q,z}|`.
pub fn polynomial_state(m: PrimeModulus, q: &[FieldElement]) -> Result<DensityOperator> {
    let p = m.value() as usize;
    let mut rho = CMatrix::zeros(p * p, p * p);
    let w = Complex64::new(1.0 / p as f64, 0.0);
    for z in m.elements() {
        let v = coset_state(m, q, z)?;
        rho += &v * v.adjoint() * w;
    }
    DensityOperator::new(rho)
}

/// `F|s> = p^(-1/2) sum_u omega^(us) |u>`.
pub fn fourier_matrix(p: u64) -> CMatrix {
    let omega = roots_of_unity(p);
    let scale = 1.0 / (p as f64).sqrt();
    CMatrix::from_fn(p as usize, p as usize, |u, s| omega[(u * s) % p as usize] * scale)
}

/// `S|s> = |s + 1>`.
pub fn shift_matrix(p: u64) -> CMatrix {
    let p = p as usize;
    CMatrix::from_fn(p, p, |i, j| {
        if i == (j + 1) % p {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `max_{k,u,v} |(F S^k F^dagger)_{uv} - delta_{uv} omega^(uk)|`.
pub fn shift_identity_residual(p: u64) -> f64 {
    let f = fourier_matrix(p);
    let s = shift_matrix(p);
    let omega = roots_of_unity(p);
    let mut sk = CMatrix::identity(p as usize, p as usize);
    let mut worst: f64 = 0.0;
    for k in 0..p as usize {
        let conj = &f * &sk * f.adjoint();
        let diag = CMatrix::from_fn(p as usize, p as usize, |u, v| {
            if u == v {
                omega[(u * k) % p as usize]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        worst = worst.max(max_abs_diff(&conj, &diag));
        sk = &s * sk;
    }
    worst
}

/// `(I (x) F) rho (I (x) F^dagger)` on one `p^2`-dimensional copy.
pub fn fourier_conjugate(rho: &DensityOperator, p: u64) -> Result<DensityOperator> {
    let ps = p as usize;
    if rho.dim() != ps * ps {
        return Err(Error::Shape(format!(
            "expected a single copy of dimension {}, got {}",
            ps * ps,
            rho.dim()
        )));
    }
    let residual = shift_identity_residual(p);
    if residual > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "Fourier shift identity fails at p = {p} (residual {residual:e})"
        )));
    }
    let u = CMatrix::identity(ps, ps).kronecker(&fourier_matrix(p));
    DensityOperator::new(&u * rho.matrix() * u.adjoint())
}

/// Index of `(b, x)` in the `k`-copy space ordered `(r_1, u_1, ..., r_k, u_k)`.
pub fn tensor_index(p: usize, b: &[FieldElement], x: &[FieldElement]) -> usize {
    b.iter()
        .zip(x)
        .fold(0, |acc, (r, u)| (acc * p + r.value() as usize) * p + u.value() as usize)
}

/// Largest entry coupling different Fourier labels in a `k`-copy operator.
pub fn off_block_residual(rho: &DensityOperator, p: u64, k: usize) -> f64 {
    let p = p as usize;
    let label = |mut i: usize| {
        let mut x = 0usize;
        let mut scale = 1usize;
        for _ in 0..k {
            x += (i % p) * scale;
            scale *= p;
            i /= p * p;
        }
        x
    };
    let dim = rho.dim();
    let labels: Vec<usize> = (0..dim).map(label).collect();
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            if labels[i] != labels[j] {
                worst = worst.max(rho.matrix()[(i, j)].norm());
            }
        }
    }
    worst
}

/// Projects onto Fourier label `x`, returning `(Pr[x], normalized block)`.
pub fn measure_x_block(rho: &DensityOperator, p: u64, x: &[FieldElement]) -> Result<(f64, DensityOperator)> {
    let k = x.len();
    let ps = p as usize;
    if rho.dim() != ps.pow(2 * k as u32) {
        return Err(Error::Shape(format!(
            "operator of dimension {} is not {k} copies at p = {p}",
            rho.dim()
        )));
    }
    let m = x[0].modulus();
    let rows: Vec<usize> = crate::systems::all_tuples(m, k)
        .map(|b: Tuple| tensor_index(ps, &b, x))
        .collect();
    let block = CMatrix::from_fn(rows.len(), rows.len(), |i, j| rho.matrix()[(rows[i], rows[j])]);
    let prob = block.trace().re;
    if prob <= 0.0 {
        return Err(Error::InvalidArgument("label has zero probability".into()));
    }
    Ok((prob, DensityOperator::new(block / Complex64::new(prob, 0.0))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::all_tuples;

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn coset_states_are_orthonormal() {
        let m = fp(5);
        let q = m.tuple(&[2, 3]);
        let states: Vec<_> = m.elements().map(|z| coset_state(m, &q, z).unwrap()).collect();
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let ip = a.dotc(b);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn polynomial_state_spectrum() {
        let m = fp(5);
        let rho = polynomial_state(m, &m.tuple(&[1, 4])).unwrap();
        assert!(rho.is_positive());
        assert_eq!(rho.rank(1e-9), 5);
        let eig = rho.matrix().symmetric_eigenvalues();
        assert!(eig.iter().all(|&l| l.abs() < 1e-9 || (l - 0.2).abs() < 1e-9));
    }

    #[test]
    fn shift_identity() {
        for p in [3, 5, 7, 11] {
            assert!(shift_identity_residual(p) < 1e-12);
        }
    }

    #[test]
    fn conjugated_state_is_block_diagonal() {
        for p in [3u64, 5, 7] {
            let m = fp(p);
            for q in [m.tuple(&[1, 1]), m.tuple(&[0, 2]), m.tuple(&[2, 0, 1])] {
                let rho = fourier_conjugate(&polynomial_state(m, &q).unwrap(), p).unwrap();
                assert!(off_block_residual(&rho, p, 1) < 1e-12);
                let omega = roots_of_unity(p);
                let ps = p as usize;
                for b in m.elements() {
                    for c in m.elements() {
                        for x in m.elements() {
                            let e = (evaluate_hidden(&q, b) - evaluate_hidden(&q, c)) * x;
                            let want = omega[e.value() as usize] / (p * p) as f64;
                            let got = rho.matrix()[(
                                tensor_index(ps, &[b], &[x]),
                                tensor_index(ps, &[c], &[x]),
                            )];
                            assert!((got - want).norm() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn zero_polynomial_blocks_are_constant() {
        let m = fp(5);
        let rho = fourier_conjugate(&polynomial_state(m, &m.tuple(&[0])).unwrap(), 5).unwrap();
        for x in m.elements() {
            let (prob, block) = measure_x_block(&rho, 5, &[x]).unwrap();
            assert!((prob - 0.2).abs() < 1e-12);
            assert!(block.matrix().iter().all(|e| (e - Complex64::new(0.2, 0.0)).norm() < 1e-12));
        }
    }

    #[test]
    fn tensor_blocks_have_uniform_weight() {
        let m = fp(3);
        let rho = fourier_conjugate(&polynomial_state(m, &m.tuple(&[1, 2])).unwrap(), 3).unwrap();
        let t = rho.tensor_power(2).unwrap();
        assert!(off_block_residual(&t, 3, 2) < 1e-12);
        for x in all_tuples(m, 2) {
            let (prob, _) = measure_x_block(&t, 3, &x).unwrap();
            assert!((prob - 1.0 / 9.0).abs() < 1e-12);
        }
    }

    #[test]
    fn guards_dimension() {
        let m = fp(11);
        let rho = polynomial_state(m, &m.tuple(&[1])).unwrap();
        assert!(matches!(rho.tensor_power(2), Err(Error::GuardExceeded { .. })));
        assert!(DensityOperator::new(CMatrix::identity(2, 2)).is_err());
    }
}
