//! Power-map systems `Phi^(n)(b) x = w` and their solution sets.
//!
//! For a fixed label `x in F_p^k` and target `w in F_p^n` the system is
//!
//! ```text
//!   sum_j b_j^i x_j = w_i      for i = 1..n
//! ```
//!
//! in the unknowns `b in F_p^k`. The brute-force solver here is the trusted
//! oracle; [`quadratic`] and [`cubic`] hold the closed-form solvers.

pub mod cubic;
pub mod quadratic;
pub mod verify;

use serde::Serialize;

use crate::error::{checked_power, Error, Result};
use crate::ff::{FieldElement, PrimeModulus};

pub use cubic::{
    classify_regularity, cubic_coefficients, normalize_cubic, solve_cubic, solve_cubic_with,
    CubicBranch, CubicEliminationCoefficients, CubicSolution, NormalizedCubic, PairViolation,
    RegularityLabel,
};
pub use quadratic::{is_good_quadratic_pair, quadratic_discriminant, solve_quadratic};
pub use verify::{
    verify_cubic_exhaustive, verify_quadratic_exhaustive, CubicVerification, QuadraticVerification,
};

/// A point of `F_p^k`.
pub type Tuple = Vec<FieldElement>;

/// Largest `p^k` the exhaustive scans will touch.
pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemInstance {
    modulus: PrimeModulus,
    degree: usize,
    x: Tuple,
    w: Tuple,
}

impl SystemInstance {
    pub fn new(modulus: PrimeModulus, degree: usize, x: Tuple, w: Tuple) -> Result<Self> {
        if degree == 0 || x.is_empty() {
            return Err(Error::Shape("degree and copy count must be at least 1".into()));
        }
        if w.len() != degree {
            return Err(Error::LengthMismatch {
                expected: degree,
                actual: w.len(),
            });
        }
        check_modulus(modulus, &x)?;
        check_modulus(modulus, &w)?;
        Ok(SystemInstance {
            modulus,
            degree,
            x,
            w,
        })
    }

    /// Convenience constructor from signed integers; `n = w.len()`.
    pub fn from_ints(modulus: PrimeModulus, x: &[i64], w: &[i64]) -> Result<Self> {
        Self::new(modulus, w.len(), modulus.tuple(x), modulus.tuple(w))
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn copies(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[FieldElement] {
        &self.x
    }

    pub fn w(&self) -> &[FieldElement] {
        &self.w
    }

    pub fn is_satisfied_by(&self, b: &[FieldElement]) -> bool {
        b.len() == self.x.len()
            && phi_apply(b, &self.x, self.degree).is_ok_and(|w| w == self.w)
    }
}

fn check_modulus(modulus: PrimeModulus, t: &[FieldElement]) -> Result<()> {
    match t.iter().find(|e| e.modulus() != modulus) {
        Some(e) => Err(Error::ModulusMismatch(modulus.value(), e.modulus().value())),
        None => Ok(()),
    }
}

/// Solutions of one system, strictly increasing in lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolutionSet {
    solutions: Vec<Tuple>,
}

impl SolutionSet {
    pub fn from_unsorted(mut solutions: Vec<Tuple>) -> Self {
        solutions.sort();
        solutions.dedup();
        SolutionSet { solutions }
    }

    pub(crate) fn from_sorted(solutions: Vec<Tuple>) -> Self {
        debug_assert!(solutions.windows(2).all(|w| w[0] < w[1]));
        SolutionSet { solutions }
    }

    pub fn eta(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn solutions(&self) -> &[Tuple] {
        &self.solutions
    }

    pub fn contains(&self, b: &[FieldElement]) -> bool {
        self.lex_index(b).is_ok()
    }

    /// 0-based position of `b` in lexicographic order.
    pub fn lex_index(&self, b: &[FieldElement]) -> Result<usize> {
        self.solutions
            .binary_search_by(|s| s.as_slice().cmp(b))
            .map_err(|_| Error::NotASolution)
    }

    pub fn get(&self, j: usize) -> Result<&Tuple> {
        self.solutions.get(j).ok_or(Error::IndexOutOfRange {
            index: j,
            eta: self.eta(),
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = &Tuple> {
        self.solutions.iter()
    }
}

/// `w_i = sum_j b_j^i x_j` for `i = 1..=n`.
pub fn phi_apply(b: &[FieldElement], x: &[FieldElement], n: usize) -> Result<Tuple> {
    if b.len() != x.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            actual: b.len(),
        });
    }
    let Some(first) = x.first().or(b.first()) else {
        return Err(Error::Shape("empty tuples".into()));
    };
    let m = first.modulus();
    check_modulus(m, b)?;
    check_modulus(m, x)?;
    let mut w = vec![m.zero(); n];
    for (&bj, &xj) in b.iter().zip(x) {
        let mut power = bj;
        for wi in w.iter_mut() {
            *wi += power * xj;
            power *= bj;
        }
    }
    Ok(w)
}

/// Position of a tuple in the lexicographic enumeration of `F_p^len`,
/// leftmost component most significant.
pub fn tuple_index(t: &[FieldElement]) -> usize {
    t.iter().fold(0usize, |acc, e| {
        acc * e.modulus().value() as usize + e.value() as usize
    })
}

pub fn tuple_from_index(m: PrimeModulus, len: usize, mut index: usize) -> Tuple {
    let p = m.value() as usize;
    let mut t = vec![m.zero(); len];
    for slot in t.iter_mut().rev() {
        *slot = m.from_residue((index % p) as u64);
        index /= p;
    }
    t
}

/// All of `F_p^len` in lexicographic order.
pub fn all_tuples(m: PrimeModulus, len: usize) -> impl Iterator<Item = Tuple> {
    let count = (m.value() as usize).pow(len as u32);
    (0..count).map(move |i| tuple_from_index(m, len, i))
}

/// Exhaustive scan over `F_p^k`.
pub fn solve_bruteforce(inst: &SystemInstance) -> Result<SolutionSet> {
    let m = inst.modulus;
    checked_power("brute-force solve", m.value(), inst.copies(), BRUTE_FORCE_LIMIT)?;
    let target = tuple_index(&inst.w);
    let table = PowerTable::new(m, inst.degree);
    let x: Vec<u64> = inst.x.iter().map(|e| e.value()).collect();
    let mut found = Vec::new();
    table.for_each_image(&x, |b, w| {
        if w == target {
            found.push(b.iter().map(|&v| m.from_residue(v)).collect());
        }
    });
    Ok(SolutionSet::from_sorted(found))
}

/// Every solution set for a fixed `x` at once, indexed by [`tuple_index`] of
/// `w`. Built by evaluating `Phi^(n)(b) x` on all of `F_p^k`.
pub fn solution_sets_forward(
    m: PrimeModulus,
    x: &[FieldElement],
    n: usize,
) -> Result<Vec<SolutionSet>> {
    check_modulus(m, x)?;
    checked_power("forward enumeration", m.value(), x.len(), BRUTE_FORCE_LIMIT)?;
    let labels = checked_power("forward enumeration", m.value(), n, BRUTE_FORCE_LIMIT)?;
    let table = PowerTable::new(m, n);
    let xr: Vec<u64> = x.iter().map(|e| e.value()).collect();
    let mut buckets: Vec<Vec<Tuple>> = vec![Vec::new(); labels as usize];
    table.for_each_image(&xr, |b, w| {
        buckets[w].push(b.iter().map(|&v| m.from_residue(v)).collect());
    });
    Ok(buckets.into_iter().map(SolutionSet::from_sorted).collect())
}

/// `eta_w^x` for every `w`, indexed by [`tuple_index`] of `w`.
pub fn eta_counts_forward(m: PrimeModulus, x: &[FieldElement], n: usize) -> Result<Vec<u32>> {
    check_modulus(m, x)?;
    checked_power("forward enumeration", m.value(), x.len(), BRUTE_FORCE_LIMIT)?;
    let labels = checked_power("forward enumeration", m.value(), n, BRUTE_FORCE_LIMIT)?;
    let xr: Vec<u64> = x.iter().map(|e| e.value()).collect();
    let mut counts = vec![0u32; labels as usize];
    PowerTable::new(m, n).for_each_image(&xr, |_, w| counts[w] += 1);
    Ok(counts)
}

/// Which solver backs [`solution_from_index`] and friends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    BruteForce,
    /// Quadratic or cubic closed form, chosen by degree.
    ClosedForm,
}

impl Solver {
    pub fn solve(self, inst: &SystemInstance) -> Result<SolutionSet> {
        match self {
            Solver::BruteForce => solve_bruteforce(inst),
            Solver::ClosedForm => match (inst.degree(), inst.copies()) {
                (2, 2) => solve_quadratic(inst),
                (3, 3) => solve_cubic(inst),
                (n, k) => Err(Error::Shape(format!(
                    "no closed form for n = {n}, k = {k}"
                ))),
            },
        }
    }
}

/// The `j`-th solution (0-based, lexicographic) of `Phi^(n)(b) x = w`.
pub fn solution_from_index(inst: &SystemInstance, j: usize, solver: Solver) -> Result<Tuple> {
    solver.solve(inst)?.get(j).cloned()
}

/// The label `(w, j)` of `b`: its image `w` and its index in `S_w^x`.
pub fn solution_label(
    b: &[FieldElement],
    x: &[FieldElement],
    n: usize,
    solver: Solver,
) -> Result<(Tuple, usize)> {
    let w = phi_apply(b, x, n)?;
    let m = x[0].modulus();
    let inst = SystemInstance::new(m, n, x.to_vec(), w.clone())?;
    let j = solver.solve(&inst)?.lex_index(b)?;
    Ok((w, j))
}

/// `b^i mod p` for `i = 1..=n`, laid out as `table[b * n + i - 1]`.
pub(crate) struct PowerTable {
    p: u64,
    n: usize,
    powers: Vec<u64>,
}

impl PowerTable {
    pub(crate) fn new(m: PrimeModulus, n: usize) -> Self {
        let p = m.value();
        let mut powers = Vec::with_capacity(p as usize * n);
        for b in 0..p {
            let mut acc = 1u64;
            for _ in 0..n {
                acc = acc * b % p;
                powers.push(acc);
            }
        }
        PowerTable { p, n, powers }
    }

    /// Calls `f(b, index(w))` for every `b` in `F_p^k` in lexicographic order.
    pub(crate) fn for_each_image(&self, x: &[u64], mut f: impl FnMut(&[u64], usize)) {
        let k = x.len();
        let n = self.n;
        let p = self.p;
        let mut digits = vec![0u64; k];
        // partial[j * n + i]: contribution of b_0..b_{j-1} to w_{i+1}
        let mut partial = vec![0u64; (k + 1) * n];
        let mut j = 0;
        loop {
            // fill levels j..k from the current digits
            while j < k {
                let b = digits[j] as usize;
                for i in 0..n {
                    let term = self.powers[b * n + i] * x[j] % p;
                    let v = partial[j * n + i] + term;
                    partial[(j + 1) * n + i] = if v >= p { v - p } else { v };
                }
                j += 1;
            }
            let w = partial[k * n..]
                .iter()
                .fold(0usize, |acc, &v| acc * p as usize + v as usize);
            f(&digits, w);
            // odometer increment
            let mut level = k;
            loop {
                if level == 0 {
                    return;
                }
                level -= 1;
                digits[level] += 1;
                if digits[level] < p {
                    break;
                }
                digits[level] = 0;
            }
            j = level;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn phi_apply_examples() {
        let m = fp(5);
        let w = phi_apply(&m.tuple(&[1, 2]), &m.tuple(&[1, 2]), 2).unwrap();
        assert_eq!(w, m.tuple(&[0, 4]));
        assert_eq!(
            phi_apply(&m.tuple(&[0, 0]), &m.tuple(&[3, 4]), 2).unwrap(),
            m.tuple(&[0, 0])
        );
        assert_eq!(
            phi_apply(&m.tuple(&[3, 1]), &m.tuple(&[0, 0]), 3).unwrap(),
            m.tuple(&[0, 0, 0])
        );
        assert!(phi_apply(&m.tuple(&[1]), &m.tuple(&[1, 2]), 2).is_err());
    }

    #[test]
    fn bruteforce_examples() {
        let m = fp(5);
        let inst = SystemInstance::from_ints(m, &[1, 2], &[0, 4]).unwrap();
        let sols = solve_bruteforce(&inst).unwrap();
        assert_eq!(sols.solutions(), &[m.tuple(&[1, 2]), m.tuple(&[4, 3])]);
        assert_eq!(sols.eta(), 2);

        let all = SystemInstance::from_ints(m, &[0, 0], &[0, 0]).unwrap();
        assert_eq!(solve_bruteforce(&all).unwrap().eta(), 25);
        let none = SystemInstance::from_ints(m, &[0, 0], &[1, 0]).unwrap();
        assert_eq!(solve_bruteforce(&none).unwrap().eta(), 0);
    }

    #[test]
    fn bruteforce_guard() {
        let m = fp(101);
        let inst = SystemInstance::from_ints(m, &[1, 1, 1, 1, 1], &[0, 0]).unwrap();
        assert!(matches!(
            solve_bruteforce(&inst),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn instance_validation() {
        let m = fp(5);
        assert!(SystemInstance::new(m, 2, m.tuple(&[1, 2]), m.tuple(&[1])).is_err());
        assert!(SystemInstance::new(m, 0, m.tuple(&[1]), vec![]).is_err());
        assert!(SystemInstance::new(m, 1, fp(7).tuple(&[1]), m.tuple(&[1])).is_err());
    }

    #[test]
    fn lex_bijection() {
        let m = fp(5);
        let inst = SystemInstance::from_ints(m, &[1, 2], &[0, 4]).unwrap();
        let sols = solve_bruteforce(&inst).unwrap();
        assert_eq!(sols.lex_index(&m.tuple(&[1, 2])).unwrap(), 0);
        assert_eq!(sols.lex_index(&m.tuple(&[4, 3])).unwrap(), 1);
        assert_eq!(sols.lex_index(&m.tuple(&[0, 0])), Err(Error::NotASolution));
        assert_eq!(
            solution_from_index(&inst, 1, Solver::ClosedForm).unwrap(),
            m.tuple(&[4, 3])
        );
        assert_eq!(
            solution_from_index(&inst, 2, Solver::BruteForce),
            Err(Error::IndexOutOfRange { index: 2, eta: 2 })
        );

        let single = SystemInstance::from_ints(m, &[1, 2], &[3, 3]).unwrap();
        let s = solve_bruteforce(&single).unwrap();
        assert_eq!(s.eta(), 1);
        assert!(s.get(0).is_ok());
        assert!(s.get(1).is_err());
    }

    #[test]
    fn lex_round_trip_exhaustive() {
        let m = fp(7);
        for x in all_tuples(m, 2) {
            for (wi, sols) in solution_sets_forward(m, &x, 2).unwrap().iter().enumerate() {
                let w = tuple_from_index(m, 2, wi);
                let inst = SystemInstance::new(m, 2, x.clone(), w.clone()).unwrap();
                for j in 0..sols.eta().min(3) {
                    let b = solution_from_index(&inst, j, Solver::ClosedForm).unwrap();
                    let (w_back, j_back) = solution_label(&b, &x, 2, Solver::ClosedForm).unwrap();
                    assert_eq!((w_back, j_back), (w.clone(), j));
                }
            }
        }
    }

    #[test]
    fn forward_sets_match_single_bruteforce() {
        let m = fp(5);
        for x in all_tuples(m, 2).step_by(3) {
            let sets = solution_sets_forward(m, &x, 3).unwrap();
            let counts = eta_counts_forward(m, &x, 3).unwrap();
            let total: u32 = counts.iter().sum();
            assert_eq!(total, 25);
            for (wi, set) in sets.iter().enumerate().step_by(7) {
                let w = tuple_from_index(m, 3, wi);
                let inst = SystemInstance::new(m, 3, x.clone(), w).unwrap();
                assert_eq!(&solve_bruteforce(&inst).unwrap(), set);
                assert_eq!(counts[wi] as usize, set.eta());
            }
        }
    }

    #[test]
    fn tuple_index_round_trip() {
        let m = fp(7);
        for i in 0..343 {
            assert_eq!(tuple_index(&tuple_from_index(m, 3, i)), i);
        }
        let v: Vec<_> = all_tuples(m, 2).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
}
