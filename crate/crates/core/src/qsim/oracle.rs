use rand::seq::SliceRandom;
use rand::Rng;

use crate::analysis::fidelity::evaluate_hidden;
use crate::error::{Error, Result};
use crate::ff::{FieldElement, PrimeModulus};

/// `B(r, s) = pi(s - Q(r))` for a hidden `Q` with zero constant term and a
/// secret permutation `pi` of `F_p`.
#[derive(Clone, Debug)]
pub struct BlackBox {
    modulus: PrimeModulus,
    q: Vec<FieldElement>,
    pi: Vec<u64>,
    queries: u64,
}

impl BlackBox {
    pub fn new(modulus: PrimeModulus, q: Vec<FieldElement>, pi: Vec<u64>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidArgument("hidden polynomial needs degree >= 1".into()));
        }
        if let Some(bad) = q.iter().find(|e| e.modulus() != modulus) {
            return Err(Error::ModulusMismatch(modulus.value(), bad.modulus().value()));
        }
        let p = modulus.value() as usize;
        if pi.len() != p {
            return Err(Error::LengthMismatch {
                expected: p,
                actual: pi.len(),
            });
        }
        let mut seen = vec![false; p];
        for &v in &pi {
            if v as usize >= p || std::mem::replace(&mut seen[v as usize], true) {
                return Err(Error::InvalidArgument("pi is not a permutation of F_p".into()));
            }
        }
        Ok(BlackBox {
            modulus,
            q,
            pi,
            queries: 0,
        })
    }

    /// Uniform hidden coefficients of the given degree bound and a
    /// Fisher-Yates shuffled `pi`.
    pub fn random<R: Rng + ?Sized>(modulus: PrimeModulus, degree: usize, rng: &mut R) -> Result<Self> {
        let p = modulus.value();
        let q = (0..degree)
            .map(|_| modulus.from_residue(rng.random_range(0..p)))
            .collect();
        let mut pi: Vec<u64> = (0..p).collect();
        pi.shuffle(rng);
        BlackBox::new(modulus, q, pi)
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn degree(&self) -> usize {
        self.q.len()
    }

    /// The hidden coefficients `(q_1, ..., q_n)`. Only the simulator reads these.
    pub fn hidden(&self) -> &[FieldElement] {
        &self.q
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    pub fn query(&mut self, r: FieldElement, s: FieldElement) -> FieldElement {
        self.queries += 1;
        let z = s - evaluate_hidden(&self.q, r);
        self.modulus.from_residue(self.pi[z.value() as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn rejects_non_permutations() {
        let m = fp(5);
        let q = m.tuple(&[1]);
        assert!(BlackBox::new(m, q.clone(), vec![0, 1, 2, 3, 3]).is_err());
        assert!(BlackBox::new(m, q.clone(), vec![0, 1, 2, 3]).is_err());
        assert!(BlackBox::new(m, q.clone(), vec![0, 1, 2, 3, 5]).is_err());
        assert!(BlackBox::new(m, vec![], vec![0, 1, 2, 3, 4]).is_err());
        assert!(BlackBox::new(m, q, vec![4, 3, 2, 1, 0]).is_ok());
    }

    #[test]
    fn constant_on_cosets_and_injective_across() {
        for p in [3u64, 5, 7] {
            let m = fp(p);
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            let mut bb = BlackBox::random(m, 2, &mut rng).unwrap();
            let q = bb.hidden().to_vec();
            let mut per_z = Vec::new();
            for z in m.elements() {
                let first = bb.query(m.zero(), evaluate_hidden(&q, m.zero()) + z);
                for r in m.elements() {
                    assert_eq!(bb.query(r, evaluate_hidden(&q, r) + z), first);
                }
                per_z.push(first);
            }
            per_z.sort();
            per_z.dedup();
            assert_eq!(per_z.len() as u64, p);
            assert_eq!(bb.queries(), p * (p + 1));
        }
    }

    #[test]
    fn seeded_construction_is_reproducible() {
        let m = fp(101);
        let a = BlackBox::random(m, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = BlackBox::random(m, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a.hidden(), b.hidden());
        assert_eq!(a.pi, b.pi);
    }
}
