//! The cubic system `Phi^(3)(b) x = w` with three copies.
//!
//! After dividing by `x_1` the system reads
//!
//! ```text
//!   b   + x c   + y d   = u
//!   b^2 + x c^2 + y d^2 = v
//!   b^3 + x c^3 + y d^3 = w
//! ```
//!
//! Eliminating `b = u - x c - y d` and running Buchberger's algorithm once
//! symbolically (lex order, `c > d`) yields the coefficient families below.
//! For a regular tuple the ideal contains
//!
//! ```text
//!   c + g_1 d^5 + ... + g_6        and        d^6 + h_1 d^5 + ... + h_6
//! ```
//!
//! so every solution comes from a root `d` of a monic sextic. The two
//! non-regular branches reduce to a sextic, a quartic or a quintic in `d`
//! instead. Each candidate is re-checked against the original equations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{checked_power, Error, Result};
use crate::ff::{FieldElement, PrimeModulus};
use crate::poly::{RootStrategy, UniPoly};

use super::{SolutionSet, SystemInstance, Tuple, BRUTE_FORCE_LIMIT};

/// Seed for the root-splitting stream when the caller does not supply one.
pub const DEFAULT_ROOT_SEED: u64 = 0x5eed;

/// The system divided through by `x_1`: `kappa = (1, x, y)`, `lambda = (u, v, w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalizedCubic {
    pub x: FieldElement,
    pub y: FieldElement,
    pub u: FieldElement,
    pub v: FieldElement,
    pub w: FieldElement,
}

impl NormalizedCubic {
    pub fn from_ints(m: PrimeModulus, x: i64, y: i64, u: i64, v: i64, w: i64) -> Self {
        NormalizedCubic {
            x: m.element(x),
            y: m.element(y),
            u: m.element(u),
            v: m.element(v),
            w: m.element(w),
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.x.modulus()
    }

    pub fn instance(&self) -> SystemInstance {
        let m = self.modulus();
        SystemInstance::new(
            m,
            3,
            vec![m.one(), self.x, self.y],
            vec![self.u, self.v, self.w],
        )
        .expect("normalized tuples have the right shape")
    }
}

/// `None` when `x_1 = 0`.
pub fn normalize_cubic(x: &[FieldElement], w: &[FieldElement]) -> Result<Option<NormalizedCubic>> {
    for t in [x, w] {
        if t.len() != 3 {
            return Err(Error::LengthMismatch {
                expected: 3,
                actual: t.len(),
            });
        }
    }
    let Ok(s) = x[0].inverse() else {
        return Ok(None);
    };
    Ok(Some(NormalizedCubic {
        x: x[1] * s,
        y: x[2] * s,
        u: w[0] * s,
        v: w[1] * s,
        w: w[2] * s,
    }))
}

/// The first excluded value hit by `(x, y)`, in the order
/// `x != 0, 1, -1` then `y != 0, -1, -x, x + 1, -(x + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairViolation {
    XZero,
    XOne,
    XMinusOne,
    YZero,
    YMinusOne,
    YMinusX,
    YXPlusOne,
    YMinusXMinusOne,
}

pub fn pair_violation(x: FieldElement, y: FieldElement) -> Option<PairViolation> {
    let m = x.modulus();
    let one = m.one();
    let checks = [
        (x.is_zero(), PairViolation::XZero),
        (x == one, PairViolation::XOne),
        (x == -one, PairViolation::XMinusOne),
        (y.is_zero(), PairViolation::YZero),
        (y == -one, PairViolation::YMinusOne),
        (y == -x, PairViolation::YMinusX),
        (y == x + one, PairViolation::YXPlusOne),
        (y == -(x + one), PairViolation::YMinusXMinusOne),
    ];
    checks.into_iter().find(|(hit, _)| *hit).map(|(_, v)| v)
}

pub fn is_good_cubic_pair(x: FieldElement, y: FieldElement) -> bool {
    pair_violation(x, y).is_none()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RegularityLabel {
    BadXY(PairViolation),
    Regular,
    /// `v (y + x + 1) - u^2 = 0`.
    NonRegularVanish1,
    /// `r_3 v^3 + r_2 v^2 + r_1 v + r_0 = 0` with the first factor nonzero.
    NonRegularVanish2,
}

/// `v (y + x + 1) - u^2`.
pub fn first_vanishing_factor(t: &NormalizedCubic) -> FieldElement {
    let one = t.modulus().one();
    t.v * (t.y + t.x + one) - t.u * t.u
}

/// `[r_0, r_1, r_2, r_3]`.
pub fn r_coefficients(t: &NormalizedCubic) -> [FieldElement; 4] {
    let m = t.modulus();
    let k = |v: i64| m.element(v);
    let (x, y, u, w) = (t.x, t.y, t.u, t.w);
    let one = m.one();
    let (w2, u3) = (w * w, u * u * u);
    let (x2, x3) = (x * x, x * x * x);
    let (y2, y3) = (y * y, y * y * y);
    let r0 = w2 * x * y3
        + w2 * y3
        + k(2) * w2 * x2 * y2
        + k(4) * w2 * x * y2
        + k(2) * w2 * y2
        + w2 * x3 * y
        + k(3) * w2 * x2 * y
        + k(3) * w2 * x * y
        + k(4) * u3 * w * x * y
        + w2 * y
        + k(4) * u3 * w * y
        + u3 * u3;
    let r1 = -k(3) * u * (y + x + one) * (k(2) * w * x * y + k(2) * w * y + u3);
    let r2 = k(3) * u * u * (y2 + x * y + y + x2 + k(2) * x + one);
    let s = y - x - one;
    let r3 = -(s * s) * (y + x + one);
    [r0, r1, r2, r3]
}

pub fn second_vanishing_factor(t: &NormalizedCubic) -> FieldElement {
    let [r0, r1, r2, r3] = r_coefficients(t);
    ((r3 * t.v + r2) * t.v + r1) * t.v + r0
}

pub fn classify_regularity(t: &NormalizedCubic) -> RegularityLabel {
    if let Some(v) = pair_violation(t.x, t.y) {
        return RegularityLabel::BadXY(v);
    }
    if first_vanishing_factor(t).is_zero() {
        RegularityLabel::NonRegularVanish1
    } else if second_vanishing_factor(t).is_zero() {
        RegularityLabel::NonRegularVanish2
    } else {
        RegularityLabel::Regular
    }
}

/// Every coefficient family of the elimination for one normalized tuple.
///
/// `c` and `d` describe the two equations left after substituting `b`:
///
/// ```text
///   (a)  c^2 + c1 cd + c2 c + c3 d^2 + c4 d + c5 = 0
///   (b)  c^3 + d1 c^2 d + d2 c^2 + d3 c d^2 + d4 cd + d5 c + d6 d^3 + d7 d^2 + d8 d + d9 = 0
/// ```
///
/// A later family is `Some` only when the pivot it divides by is nonzero;
/// the `*_tilde` families are the same numerators before that division.
/// All arrays are 0-based, so `c[0]` is `c_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicEliminationCoefficients {
    pub c: [FieldElement; 5],
    pub d: [FieldElement; 9],
    pub r: [FieldElement; 4],
    /// `d3 - c1 d1 - c3 + c1^2`.
    pub e_pivot: FieldElement,
    /// `cd^2 + e1 cd + e2 c + e3 d^3 + e4 d^2 + e5 d + e6`.
    pub e: Option<[FieldElement; 6]>,
    /// `e5 - e1 e4 - e2 e3 + e1^2 e3`.
    pub f_pivot: Option<FieldElement>,
    pub f_tilde: Option<[FieldElement; 6]>,
    /// `cd + f1 c + f2 d^4 + f3 d^3 + f4 d^2 + f5 d + f6`.
    pub f: Option<[FieldElement; 6]>,
    /// `f1^2 - e1 f1 + e2`.
    pub g_pivot: Option<FieldElement>,
    pub g_tilde: Option<[FieldElement; 6]>,
    /// `c + g1 d^5 + ... + g6`.
    pub g: Option<[FieldElement; 6]>,
    /// `d^6 + h1 d^5 + ... + h6`.
    pub h: Option<[FieldElement; 6]>,
}

impl CubicEliminationCoefficients {
    pub fn is_regular(&self) -> bool {
        self.h.is_some()
    }

    /// The monic sextic whose roots contain every `d` of a regular tuple.
    pub fn h_polynomial(&self) -> Option<UniPoly> {
        let h = self.h?;
        let m = h[0].modulus();
        let mut desc = vec![m.one()];
        desc.extend_from_slice(&h);
        Some(UniPoly::from_descending(m, &desc).unwrap())
    }
}

pub fn cubic_coefficients(t: &NormalizedCubic) -> Result<CubicEliminationCoefficients> {
    if let Some(v) = pair_violation(t.x, t.y) {
        return Err(Error::InvalidArgument(format!(
            "(x, y) = ({}, {}) is excluded: {v:?}",
            t.x, t.y
        )));
    }
    let m = t.modulus();
    let k = |v: i64| m.element(v);
    let (x, y, u, v, w) = (t.x, t.y, t.u, t.v, t.w);
    let one = m.one();

    // Denominators x(x+1) and x(1-x^2) are nonzero for every good pair.
    let inv_xp1 = (x + one).inverse()?;
    let inv_x_xp1 = (x * (x + one)).inverse()?;
    let inv_1mx2 = (one - x * x).inverse()?;
    let inv_x_1mx2 = (x * (one - x * x)).inverse()?;

    let c1 = k(2) * y * inv_xp1;
    let c2 = -k(2) * u * inv_xp1;
    let c3 = y * (y + one) * inv_x_xp1;
    let c4 = -k(2) * u * y * inv_x_xp1;
    let c5 = (u * u - v) * inv_x_xp1;

    let d1 = -k(3) * x * y * inv_1mx2;
    let d2 = k(3) * u * x * inv_1mx2;
    let d3 = -k(3) * y * y * inv_1mx2;
    let d4 = k(6) * u * y * inv_1mx2;
    let d5 = -k(3) * u * u * inv_1mx2;
    let d6 = y * (one - y * y) * inv_x_1mx2;
    let d7 = k(3) * u * y * y * inv_x_1mx2;
    let d8 = -k(3) * u * u * y * inv_x_1mx2;
    let d9 = (u * u * u - w) * inv_x_1mx2;

    let e_pivot = d3 - c1 * d1 - c3 + c1 * c1;
    let mut out = CubicEliminationCoefficients {
        c: [c1, c2, c3, c4, c5],
        d: [d1, d2, d3, d4, d5, d6, d7, d8, d9],
        r: r_coefficients(t),
        e_pivot,
        e: None,
        f_pivot: None,
        f_tilde: None,
        f: None,
        g_pivot: None,
        g_tilde: None,
        g: None,
        h: None,
    };
    let Ok(inv) = e_pivot.inverse() else {
        return Ok(out);
    };

    let e1 = (d4 - c1 * d2 - c2 * d1 - c4 + k(2) * c1 * c2) * inv;
    let e2 = (d5 - c2 * d2 - c5 + c2 * c2) * inv;
    let e3 = (d6 - c3 * d1 + c1 * c3) * inv;
    let e4 = (d7 - c3 * d2 - c4 * d1 + c1 * c4 + c2 * c3) * inv;
    let e5 = (d8 - c4 * d2 - c5 * d1 + c1 * c5 + c2 * c4) * inv;
    let e6 = (d9 - c5 * d2 + c2 * c5) * inv;
    out.e = Some([e1, e2, e3, e4, e5, e6]);

    let f_pivot = e5 - e1 * e4 - e2 * e3 + e1 * e1 * e3;
    let f_tilde = [
        e6 - e2 * e4 + e1 * e2 * e3,
        -(e3 * e3 - c1 * e3 + c3),
        -(k(2) * e3 * e4 - c1 * e4 - e1 * e3 * e3 - c2 * e3 + c3 * e1 + c4),
        -(e3 * e5 - c1 * e5 + e4 * e4 - e1 * e3 * e4 - c2 * e4 + c3 * e2 + c4 * e1 + c5),
        -(e3 * e6 - c1 * e6 + e4 * e5 - e1 * e3 * e5 - c2 * e5 + c4 * e2 + c5 * e1),
        -(e4 * e6 - e1 * e3 * e6 - c2 * e6 + c5 * e2),
    ];
    out.f_pivot = Some(f_pivot);
    out.f_tilde = Some(f_tilde);
    let Ok(inv) = f_pivot.inverse() else {
        return Ok(out);
    };
    let f = f_tilde.map(|a| a * inv);
    out.f = Some(f);
    let [f1, f2, f3, f4, f5, f6] = f;

    let g_pivot = f1 * f1 - e1 * f1 + e2;
    let g_tilde = [
        -f2,
        -(f3 - f1 * f2 + e1 * f2),
        -(f4 - f1 * f3 + e1 * f3 - e3),
        -(f5 - f1 * f4 + e1 * f4 - e4),
        -(f6 - f1 * f5 + e1 * f5 - e5),
        f1 * f6 - e1 * f6 + e6,
    ];
    out.g_pivot = Some(g_pivot);
    out.g_tilde = Some(g_tilde);
    let Ok(inv) = g_pivot.inverse() else {
        return Ok(out);
    };
    let g = g_tilde.map(|a| a * inv);
    out.g = Some(g);
    let [g1, g2, g3, g4, g5, g6] = g;

    let Ok(inv) = g1.inverse() else {
        return Ok(out);
    };
    out.h = Some(
        [
            g2 + f1 * g1,
            g3 + f1 * g2 - f2,
            g4 + f1 * g3 - f3,
            g5 + f1 * g4 - f4,
            g6 + f1 * g5 - f5,
            f1 * g6 - f6,
        ]
        .map(|a| a * inv),
    );
    Ok(out)
}

/// Which path produced a cubic solution set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CubicBranch {
    /// `x_1 = 0` or an excluded `(x, y)`: per-`d` scan.
    Fallback,
    /// Roots of the `h` sextic.
    Regular,
    /// First factor vanishes, `f~_1 != 0`: `c` substituted, sextic in `d`.
    Vanish1Substituted,
    /// First factor vanishes, `f~_1 = 0`: quartic in `d`, two `c` per `d`.
    Vanish1Quartic,
    /// Second factor vanishes: quintic in `d`, two `c` per `d`.
    Vanish2,
}

impl CubicBranch {
    /// Solution count the elimination guarantees for this branch.
    pub fn cap(self) -> Option<usize> {
        match self {
            CubicBranch::Fallback => None,
            CubicBranch::Regular | CubicBranch::Vanish1Substituted => Some(6),
            CubicBranch::Vanish1Quartic => Some(8),
            CubicBranch::Vanish2 => Some(10),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicSolution {
    pub solutions: SolutionSet,
    pub branch: CubicBranch,
}

/// Solves with the default root strategy for `p` and a fixed splitting seed.
pub fn solve_cubic(inst: &SystemInstance) -> Result<SolutionSet> {
    let strategy = RootStrategy::default_for(inst.modulus());
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_ROOT_SEED);
    Ok(solve_cubic_with(inst, strategy, &mut rng)?.solutions)
}

pub fn solve_cubic_with<R: Rng + ?Sized>(
    inst: &SystemInstance,
    strategy: RootStrategy,
    rng: &mut R,
) -> Result<CubicSolution> {
    if inst.degree() != 3 || inst.copies() != 3 {
        return Err(Error::Shape(format!(
            "cubic solver needs n = k = 3, got n = {}, k = {}",
            inst.degree(),
            inst.copies()
        )));
    }
    let normalized = normalize_cubic(inst.x(), inst.w())?;
    let Some(t) = normalized.filter(|t| is_good_cubic_pair(t.x, t.y)) else {
        return Ok(CubicSolution {
            solutions: solve_by_line_scan(inst)?,
            branch: CubicBranch::Fallback,
        });
    };
    let coeffs = cubic_coefficients(&t)?;
    let m = t.modulus();
    let mut candidates: Vec<(FieldElement, FieldElement)> = Vec::new();

    let branch = match classify_regularity(&t) {
        RegularityLabel::Regular => {
            let h = coeffs
                .h_polynomial()
                .ok_or_else(|| internal("regular tuple without h family"))?;
            let g = coeffs.g.unwrap();
            for d in h.roots(strategy, rng)? {
                let c = -horner(&g[..5], d) * d - g[5];
                candidates.push((c, d));
            }
            CubicBranch::Regular
        }
        RegularityLabel::NonRegularVanish1 => {
            let ft = coeffs
                .f_tilde
                .ok_or_else(|| internal("missing f~ family"))?;
            let e = coeffs.e.unwrap();
            // F(d) = f~2 d^4 + ... + f~6
            let quartic = UniPoly::from_descending(m, &ft[1..])?;
            if let Ok(inv_f1) = ft[0].inverse() {
                // f~1 (e3 d^3 + e4 d^2 + e5 d + e6) - (d^2 + e1 d + e2) F(d)
                let cubic_tail = UniPoly::from_descending(m, &e[2..])?;
                let quad = UniPoly::from_descending(m, &[m.one(), e[0], e[1]])?;
                let sextic = cubic_tail.scale(ft[0]).sub(&quad.mul(&quartic)?)?;
                for d in sextic.roots(strategy, rng)? {
                    let c = -quartic.evaluate(d)? * inv_f1;
                    candidates.push((c, d));
                }
                CubicBranch::Vanish1Substituted
            } else {
                for d in quartic.roots(strategy, rng)? {
                    for c in c_from_first_equation(&coeffs, d) {
                        candidates.push((c, d));
                    }
                }
                CubicBranch::Vanish1Quartic
            }
        }
        RegularityLabel::NonRegularVanish2 => {
            let gt = coeffs
                .g_tilde
                .ok_or_else(|| internal("missing g~ family"))?;
            let quintic = UniPoly::from_descending(m, &gt)?;
            for d in quintic.roots(strategy, rng)? {
                for c in c_from_first_equation(&coeffs, d) {
                    candidates.push((c, d));
                }
            }
            CubicBranch::Vanish2
        }
        RegularityLabel::BadXY(_) => unreachable!("filtered above"),
    };

    let sols = candidates
        .into_iter()
        .map(|(c, d)| vec![t.u - t.x * c - t.y * d, c, d])
        .filter(|b| inst.is_satisfied_by(b))
        .collect();
    Ok(CubicSolution {
        solutions: SolutionSet::from_unsorted(sols),
        branch,
    })
}

fn internal(msg: &str) -> Error {
    Error::InvalidArgument(format!("inconsistent elimination: {msg}"))
}

fn horner(desc: &[FieldElement], at: FieldElement) -> FieldElement {
    desc.iter()
        .fold(at.modulus().zero(), |acc, &c| acc * at + c)
}

/// Roots `c` of `c^2 + (c1 d + c2) c + (c3 d^2 + c4 d + c5)` for fixed `d`.
fn c_from_first_equation(coeffs: &CubicEliminationCoefficients, d: FieldElement) -> Vec<FieldElement> {
    let [c1, c2, c3, c4, c5] = coeffs.c;
    let lin = c1 * d + c2;
    let cst = (c3 * d + c4) * d + c5;
    monic_quadratic_roots(lin, cst)
}

/// Roots of `z^2 + a z + b`; `p` is odd.
fn monic_quadratic_roots(a: FieldElement, b: FieldElement) -> Vec<FieldElement> {
    let m = a.modulus();
    let half = m.element(2).inverse().unwrap();
    let disc = a * a - m.element(4) * b;
    disc.sqrt().into_iter().map(|r| (r - a) * half).collect()
}

/// Complete solver for any `x`: pick a coordinate with nonzero coefficient,
/// eliminate it through the linear equation, and for every value of the
/// last free coordinate solve the quadratic equation in the remaining one.
fn solve_by_line_scan(inst: &SystemInstance) -> Result<SolutionSet> {
    let m = inst.modulus();
    let (x, w) = (inst.x(), inst.w());
    let Some(pivot) = x.iter().position(|e| !e.is_zero()) else {
        if w.iter().all(|e| e.is_zero()) {
            checked_power("cubic fallback", m.value(), 3, BRUTE_FORCE_LIMIT)?;
            return Ok(SolutionSet::from_sorted(super::all_tuples(m, 3).collect()));
        }
        return Ok(SolutionSet::default());
    };
    let (ia, ib) = match pivot {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let (xp, xa, xb) = (x[pivot], x[ia], x[ib]);
    let inv_xp = xp.inverse()?;
    let two = m.element(2);

    // xp * (second equation) with b_pivot = (w1 - xa c - xb d)/xp:
    //   xa (xa + xp) c^2 - 2 s xa c + (s^2 + xp xb d^2 - xp w2) = 0,  s = w1 - xb d
    let quad = xa * (xa + xp);
    let mut sols = Vec::new();
    for d in m.elements() {
        let s = w[0] - xb * d;
        let lin = -two * s * xa;
        let cst = s * s + xp * xb * d * d - xp * w[1];
        let cs: Vec<FieldElement> = if let Ok(inv_q) = quad.inverse() {
            monic_quadratic_roots(lin * inv_q, cst * inv_q)
        } else if let Ok(inv_l) = lin.inverse() {
            vec![-cst * inv_l]
        } else if cst.is_zero() {
            m.elements().collect()
        } else {
            Vec::new()
        };
        for c in cs {
            let mut b: Tuple = vec![m.zero(); 3];
            b[ia] = c;
            b[ib] = d;
            b[pivot] = (w[0] - xa * c - xb * d) * inv_xp;
            if inst.is_satisfied_by(&b) {
                sols.push(b);
            }
        }
    }
    Ok(SolutionSet::from_unsorted(sols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{all_tuples, phi_apply, solution_sets_forward, solve_bruteforce};

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn normalization() {
        let m = fp(7);
        let t = normalize_cubic(&m.tuple(&[2, 4, 6]), &m.tuple(&[2, 0, 2]))
            .unwrap()
            .unwrap();
        assert_eq!(t, NormalizedCubic::from_ints(m, 2, 3, 1, 0, 1));
        let t = normalize_cubic(&m.tuple(&[1, 5, 6]), &m.tuple(&[3, 4, 2]))
            .unwrap()
            .unwrap();
        assert_eq!(t, NormalizedCubic::from_ints(m, 5, 6, 3, 4, 2));
        assert_eq!(
            normalize_cubic(&m.tuple(&[0, 1, 2]), &m.tuple(&[1, 1, 1])).unwrap(),
            None
        );
        assert!(normalize_cubic(&m.tuple(&[1, 2]), &m.tuple(&[1, 1, 1])).is_err());
    }

    #[test]
    fn pair_classification() {
        let m = fp(7);
        assert_eq!(pair_violation(m.element(2), m.element(2)), None);
        assert_eq!(
            pair_violation(m.element(1), m.element(2)),
            Some(PairViolation::XOne)
        );
        let t = NormalizedCubic::from_ints(m, 1, 2, 0, 0, 0);
        assert_eq!(
            classify_regularity(&t),
            RegularityLabel::BadXY(PairViolation::XOne)
        );
        assert!(cubic_coefficients(&t).is_err());
    }

    #[test]
    fn good_pair_count() {
        // The exclusions y = -1 and y = x + 1 coincide at x = -2, and
        // y = -x and y = x + 1 coincide at x = -1/2, so two more pairs
        // survive than the (p - 3)(p - 5) + 1 lower bound.
        for p in [5u64, 7, 11, 13, 17, 19] {
            let m = fp(p);
            let good = all_tuples(m, 2)
                .filter(|t| is_good_cubic_pair(t[0], t[1]))
                .count() as u64;
            assert_eq!(good, (p - 3) * (p - 5) + 2, "p={p}");
            assert!(good > (p - 3) * (p - 5));
        }
    }

    #[test]
    fn first_coefficients_match_direct_evaluation() {
        let m = fp(13);
        for (x, y, u) in [(2, 5, 7), (3, 7, 0), (5, 2, 11)] {
            let t = NormalizedCubic::from_ints(m, x, y, u, 4, 6);
            let co = cubic_coefficients(&t).unwrap();
            let (x, y, u) = (m.element(x), m.element(y), m.element(u));
            let two = m.element(2);
            assert_eq!(co.c[0], two * y / (x + m.one()));
            assert_eq!(co.c[1], -two * u / (x + m.one()));
        }
    }

    #[test]
    fn homogeneous_coefficients_vanish_at_zero_target() {
        let m = fp(11);
        for pair in all_tuples(m, 2).filter(|t| is_good_cubic_pair(t[0], t[1])) {
            let t = NormalizedCubic {
                x: pair[0],
                y: pair[1],
                u: m.zero(),
                v: m.zero(),
                w: m.zero(),
            };
            let co = cubic_coefficients(&t).unwrap();
            for i in [1, 3, 4] {
                assert!(co.c[i].is_zero());
            }
            for i in [1, 3, 4, 6, 7, 8] {
                assert!(co.d[i].is_zero());
            }
        }
    }

    #[test]
    fn f_tilde_two_closed_form_nonzero() {
        for p in [7u64, 11, 13] {
            let m = fp(p);
            for pair in all_tuples(m, 2).filter(|t| is_good_cubic_pair(t[0], t[1])) {
                let (x, y) = (pair[0], pair[1]);
                let one = m.one();
                let expected = -(y + one) * (y + x) / ((x - one) * (x - one) * x);
                for lambda in all_tuples(m, 3).step_by(17) {
                    let t = NormalizedCubic {
                        x,
                        y,
                        u: lambda[0],
                        v: lambda[1],
                        w: lambda[2],
                    };
                    let ft = cubic_coefficients(&t).unwrap().f_tilde.unwrap();
                    assert_eq!(ft[1], expected);
                    assert!(!ft[1].is_zero());
                }
            }
        }
    }

    #[test]
    fn pivots_factor_as_stated() {
        // e-pivot never vanishes on good pairs; f-pivot vanishes exactly with
        // v(y+x+1) - u^2; g-pivot exactly with the r-polynomial; g1 never.
        for p in [7u64, 11] {
            let m = fp(p);
            for pair in all_tuples(m, 2).filter(|t| is_good_cubic_pair(t[0], t[1])) {
                for lambda in all_tuples(m, 3) {
                    let t = NormalizedCubic {
                        x: pair[0],
                        y: pair[1],
                        u: lambda[0],
                        v: lambda[1],
                        w: lambda[2],
                    };
                    let co = cubic_coefficients(&t).unwrap();
                    assert!(!co.e_pivot.is_zero());
                    let f_piv = co.f_pivot.unwrap();
                    assert_eq!(f_piv.is_zero(), first_vanishing_factor(&t).is_zero());
                    if f_piv.is_zero() {
                        continue;
                    }
                    let g_piv = co.g_pivot.unwrap();
                    assert_eq!(g_piv.is_zero(), second_vanishing_factor(&t).is_zero());
                    if !g_piv.is_zero() {
                        assert!(!co.g.unwrap()[0].is_zero());
                        assert!(co.is_regular());
                    } else {
                        let one = m.one();
                        let (x, y, u, v) = (t.x, t.y, t.u, t.v);
                        let g1 = -y * (y + one) * (y + x) * (y + x + one) * (y + x + one)
                            / (x * (x - one) * (y - x - one) * (v * y + v * x + v - u * u));
                        assert_eq!(co.g_tilde.unwrap()[0], g1);
                    }
                }
            }
        }
    }

    #[test]
    fn planted_solution_is_found() {
        let m = fp(11);
        let b = m.tuple(&[1, 2, 3]);
        let x = m.tuple(&[1, 2, 4]);
        let w = phi_apply(&b, &x, 3).unwrap();
        let inst = SystemInstance::new(m, 3, x, w).unwrap();
        assert!(solve_cubic(&inst).unwrap().contains(&b));
    }

    #[test]
    fn matches_bruteforce_at_p7_every_x() {
        // Every x, normalized or not, at p = 7.
        let m = fp(7);
        for x in all_tuples(m, 3) {
            let sets = solution_sets_forward(m, &x, 3).unwrap();
            for (wi, expected) in sets.iter().enumerate() {
                let w = super::super::tuple_from_index(m, 3, wi);
                let inst = SystemInstance::new(m, 3, x.clone(), w).unwrap();
                assert_eq!(&solve_cubic(&inst).unwrap(), expected, "{inst:?}");
            }
        }
    }

    #[test]
    fn split_strategy_agrees() {
        let m = fp(13);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for pair in all_tuples(m, 2).filter(|t| is_good_cubic_pair(t[0], t[1])).take(10) {
            let x = vec![m.one(), pair[0], pair[1]];
            for w in all_tuples(m, 3).step_by(5) {
                let inst = SystemInstance::new(m, 3, x.clone(), w).unwrap();
                let split = solve_cubic_with(&inst, RootStrategy::Split, &mut rng).unwrap();
                assert_eq!(split.solutions, solve_bruteforce(&inst).unwrap());
            }
        }
    }

    #[test]
    fn wrong_shape_rejected() {
        let m = fp(7);
        let inst = SystemInstance::from_ints(m, &[1, 2], &[1, 2, 3]).unwrap();
        assert!(matches!(solve_cubic(&inst), Err(Error::Shape(_))));
    }
}
