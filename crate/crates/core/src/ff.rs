//! Arithmetic in the prime field `F_p`.
//!
//! Elements carry their modulus so that mixing fields is caught at runtime.
//! The modulus is bounded by `2^31`, which keeps every product of two
//! canonical residues inside a `u64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_MODULUS: u64 = 1 << 31;

/// An odd prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..MAX_MODULUS).contains(&p) || p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(PrimeModulus(p))
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    /// The canonical residue of an arbitrary signed integer.
    #[inline]
    pub fn element(self, v: i64) -> FieldElement {
        FieldElement {
            value: v.rem_euclid(self.0 as i64) as u64,
            modulus: self,
        }
    }

    #[inline]
    pub fn from_residue(self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.0,
            modulus: self,
        }
    }

    #[inline]
    pub fn zero(self) -> FieldElement {
        self.from_residue(0)
    }

    #[inline]
    pub fn one(self) -> FieldElement {
        self.from_residue(1)
    }

    /// All field elements in ascending residue order.
    pub fn elements(self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.0).map(move |v| FieldElement {
            value: v,
            modulus: self,
        })
    }

    pub fn tuple(self, values: &[i64]) -> Vec<FieldElement> {
        values.iter().map(|&v| self.element(v)).collect()
    }

    #[inline]
    pub(crate) fn mul_raw(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    pub(crate) fn pow_raw(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }
}

impl TryFrom<u64> for PrimeModulus {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        PrimeModulus::new(p)
    }
}

impl From<PrimeModulus> for u64 {
    fn from(m: PrimeModulus) -> u64 {
        m.0
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic trial division; `p < 2^31` keeps this under 47k steps.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A canonical residue in `[0, p)` together with its modulus.
///
/// Ordering compares residues, which is the order used to sort solution
/// tuples lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: PrimeModulus,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: FieldElement) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.modulus.0, other.modulus.0))
        }
    }

    pub fn checked_add(self, rhs: FieldElement) -> Result<FieldElement> {
        self.same_field(rhs)?;
        let p = self.modulus.0;
        let s = self.value + rhs.value;
        Ok(self.with(if s >= p { s - p } else { s }))
    }

    pub fn checked_sub(self, rhs: FieldElement) -> Result<FieldElement> {
        self.same_field(rhs)?;
        let p = self.modulus.0;
        Ok(self.with(if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + p - rhs.value
        }))
    }

    pub fn checked_mul(self, rhs: FieldElement) -> Result<FieldElement> {
        self.same_field(rhs)?;
        Ok(self.with(self.modulus.mul_raw(self.value, rhs.value)))
    }

    pub fn checked_div(self, rhs: FieldElement) -> Result<FieldElement> {
        self.same_field(rhs)?;
        self.checked_mul(rhs.inverse()?)
    }

    /// Multiplicative inverse via Fermat, `a^(p-2)`.
    pub fn inverse(self) -> Result<FieldElement> {
        if self.value == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.with(self.modulus.pow_raw(self.value, self.modulus.0 - 2)))
    }

    /// `a^e` by square-and-multiply; negative exponents go through the inverse.
    pub fn pow(self, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.inverse()? } else { self };
        Ok(base.pow_u64(e.unsigned_abs()))
    }

    #[inline]
    pub fn pow_u64(self, e: u64) -> FieldElement {
        self.with(self.modulus.pow_raw(self.value, e))
    }

    /// Legendre symbol as `a^((p-1)/2)` mapped to `{-1, 0, 1}`.
    pub fn legendre(self) -> i8 {
        if self.value == 0 {
            return 0;
        }
        let t = self.modulus.pow_raw(self.value, (self.modulus.0 - 1) / 2);
        if t == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(self) -> bool {
        self.legendre() >= 0
    }

    /// All square roots, ascending: empty for non-residues, `[0]` for zero.
    pub fn sqrt(self) -> Vec<FieldElement> {
        match self.legendre() {
            0 => vec![self.modulus.zero()],
            -1 => Vec::new(),
            _ => {
                let r = self.with(self.principal_sqrt());
                let s = -r;
                if r.value < s.value {
                    vec![r, s]
                } else {
                    vec![s, r]
                }
            }
        }
    }

    fn principal_sqrt(self) -> u64 {
        let m = self.modulus;
        let p = m.0;
        if p % 4 == 3 {
            return m.pow_raw(self.value, (p + 1) / 4);
        }
        // Tonelli-Shanks with p - 1 = q * 2^s.
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = (2..p)
            .find(|&c| m.pow_raw(c, (p - 1) / 2) == p - 1)
            .expect("odd prime has a non-residue");
        let mut c = m.pow_raw(z, q);
        let mut t = m.pow_raw(self.value, q);
        let mut r = m.pow_raw(self.value, q.div_ceil(2));
        let mut order = s;
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = m.mul_raw(t2, t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(order - i - 1) {
                b = m.mul_raw(b, b);
            }
            order = i;
            c = m.mul_raw(b, b);
            t = m.mul_raw(t, c);
            r = m.mul_raw(r, b);
        }
        r
    }

    /// The residue as a signed representative in `(-p/2, p/2]`.
    pub fn centered(self) -> i64 {
        let p = self.modulus.0;
        if self.value > p / 2 {
            self.value as i64 - p as i64
        } else {
            self.value as i64
        }
    }

    #[inline]
    fn with(self, value: u64) -> FieldElement {
        FieldElement {
            value,
            modulus: self.modulus,
        }
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .cmp(&other.value)
            .then(self.modulus.cmp(&other.modulus))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.value)
    }
}

// Operator forms panic on a modulus mismatch; the `checked_*` methods report it.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident, $assign_trait:ident, $assign:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            #[inline]
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field operands must share a modulus")
            }
        }

        impl $assign_trait for FieldElement {
            #[inline]
            fn $assign(&mut self, rhs: FieldElement) {
                *self = self.$method(rhs);
            }
        }
    };
}

binop!(Add, add, checked_add, AddAssign, add_assign);
binop!(Sub, sub, checked_sub, SubAssign, sub_assign);
binop!(Mul, mul, checked_mul, MulAssign, mul_assign);

impl Div for FieldElement {
    type Output = FieldElement;

    /// Panics on a zero divisor; use [`FieldElement::checked_div`] to handle it.
    fn div(self, rhs: FieldElement) -> FieldElement {
        self.checked_div(rhs).expect("division by zero in F_p")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    #[inline]
    fn neg(self) -> FieldElement {
        if self.value == 0 {
            self
        } else {
            self.with(self.modulus.0 - self.value)
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
    fn rejects_bad_moduli() {
        for p in [0, 1, 2, 4, 9, 15, 21, MAX_MODULUS + 11] {
            assert_eq!(PrimeModulus::new(p), Err(Error::InvalidModulus(p)));
        }
        assert!(PrimeModulus::new(3).is_ok());
        assert!(PrimeModulus::new(2_147_483_647).is_ok());
    }

    #[test]
    fn basic_ops() {
        let m = fp(5);
        assert_eq!((m.element(3) + m.element(4)).value(), 2);
        assert_eq!((m.element(1) - m.element(3)).value(), 3);
        assert_eq!((m.zero() * m.element(4)).value(), 0);
        assert_eq!((-m.zero()).value(), 0);
        assert_eq!((-m.element(2)).value(), 3);
        assert_eq!(m.element(-7).value(), 3);
    }

    #[test]
    fn mismatched_moduli_are_rejected() {
        let a = fp(5).element(1);
        let b = fp(7).element(1);
        assert_eq!(a.checked_add(b), Err(Error::ModulusMismatch(5, 7)));
        assert_eq!(a.checked_mul(b), Err(Error::ModulusMismatch(5, 7)));
        assert!(a.checked_sub(b).is_err());
        assert!(a.checked_div(b).is_err());
    }

    #[test]
    #[should_panic(expected = "share a modulus")]
    fn operator_panics_on_mismatch() {
        let _ = fp(5).element(1) + fp(7).element(1);
    }

    #[test]
    fn inverse_and_power() {
        let m = fp(7);
        assert_eq!(m.element(3).inverse().unwrap().value(), 5);
        assert_eq!(m.zero().inverse(), Err(Error::DivisionByZero));
        assert_eq!(m.element(4).pow(0).unwrap(), m.one());
        assert_eq!(m.element(2).pow(6).unwrap(), m.one());
        assert_eq!(m.element(3).pow(-1).unwrap().value(), 5);
        assert_eq!(m.element(3).pow(-2).unwrap().value(), 4);
        assert_eq!(m.zero().pow(-1), Err(Error::DivisionByZero));
    }

    #[test]
    fn inverse_exhaustive() {
        for p in (3..=101).filter(|&p| is_prime(p)) {
            let m = fp(p);
            for a in m.elements().skip(1) {
                assert_eq!(a * a.inverse().unwrap(), m.one(), "p={p} a={a}");
            }
        }
    }

    #[test]
    fn legendre_values() {
        let m = fp(7);
        assert_eq!(m.element(2).legendre(), 1);
        assert_eq!(m.element(3).legendre(), -1);
        assert_eq!(m.zero().legendre(), 0);
    }

    #[test]
    fn legendre_multiplicative_and_balanced() {
        for p in (3..=61).filter(|&p| is_prime(p)) {
            let m = fp(p);
            let residues = m.elements().filter(|a| a.legendre() == 1).count() as u64;
            assert_eq!(residues, (p - 1) / 2);
            for a in m.elements().skip(1) {
                for b in m.elements().skip(1) {
                    assert_eq!((a * b).legendre(), a.legendre() * b.legendre());
                }
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        let m = fp(7);
        assert_eq!(m.element(2).sqrt(), m.tuple(&[3, 4]));
        assert_eq!(m.zero().sqrt(), vec![m.zero()]);
        assert!(m.element(3).sqrt().is_empty());
    }

    #[test]
    fn sqrt_of_squares_exhaustive() {
        // Mix of p = 1 (mod 4), including high 2-adic order (97, 193, 257), and p = 3 (mod 4).
        for p in [3, 5, 7, 13, 17, 41, 97, 101, 193, 257, 1009] {
            let m = fp(p);
            for a in m.elements() {
                let roots = (a * a).sqrt();
                assert!(roots.contains(&a), "p={p} a={a}");
                for r in &roots {
                    assert_eq!(*r * *r, a * a);
                }
            }
            for a in m.elements().filter(|a| a.legendre() == -1) {
                assert!(a.sqrt().is_empty());
            }
        }
    }
}
