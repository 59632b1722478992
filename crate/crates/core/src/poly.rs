//! Dense univariate polynomials over `F_p` and root extraction.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ff::{FieldElement, PrimeModulus};

/// How [`UniPoly::roots`] finds roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootStrategy {
    /// Evaluate at every field element.
    Exhaustive,
    /// `gcd(f, X^p - X)` followed by randomized equal-degree splitting.
    Split,
}

impl RootStrategy {
    pub const EXHAUSTIVE_LIMIT: u64 = 1 << 16;

    pub fn default_for(modulus: PrimeModulus) -> Self {
        if modulus.value() < Self::EXHAUSTIVE_LIMIT {
            RootStrategy::Exhaustive
        } else {
            RootStrategy::Split
        }
    }
}

/// Coefficients in ascending degree order with no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<FieldElement>,
    modulus: PrimeModulus,
}

impl UniPoly {
    pub fn new(modulus: PrimeModulus, mut coeffs: Vec<FieldElement>) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| c.modulus() != modulus) {
            return Err(Error::ModulusMismatch(modulus.value(), c.modulus().value()));
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(UniPoly { coeffs, modulus })
    }

    /// Builds from signed integer coefficients, ascending degree.
    pub fn from_ints(modulus: PrimeModulus, coeffs: &[i64]) -> Self {
        Self::new(modulus, modulus.tuple(coeffs)).expect("coefficients share the modulus")
    }

    /// Builds from coefficients listed from the leading term down.
    pub fn from_descending(modulus: PrimeModulus, coeffs: &[FieldElement]) -> Result<Self> {
        Self::new(modulus, coeffs.iter().rev().copied().collect())
    }

    pub fn zero(modulus: PrimeModulus) -> Self {
        UniPoly {
            coeffs: Vec::new(),
            modulus,
        }
    }

    /// `X`.
    pub fn x(modulus: PrimeModulus) -> Self {
        UniPoly {
            coeffs: vec![modulus.zero(), modulus.one()],
            modulus,
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::new(c.modulus(), vec![c]).unwrap()
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    pub fn evaluate(&self, a: FieldElement) -> Result<FieldElement> {
        if a.modulus() != self.modulus {
            return Err(Error::ModulusMismatch(self.modulus.value(), a.modulus().value()));
        }
        Ok(self
            .coeffs
            .iter()
            .rev()
            .fold(self.modulus.zero(), |acc, &c| acc * a + c))
    }

    fn check(&self, other: &UniPoly) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(
                self.modulus.value(),
                other.modulus.value(),
            ))
        }
    }

    pub fn add(&self, other: &UniPoly) -> Result<UniPoly> {
        self.check(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = self.modulus.zero();
        let coeffs = (0..len)
            .map(|i| {
                *self.coeffs.get(i).unwrap_or(&zero) + *other.coeffs.get(i).unwrap_or(&zero)
            })
            .collect();
        UniPoly::new(self.modulus, coeffs)
    }

    pub fn sub(&self, other: &UniPoly) -> Result<UniPoly> {
        self.add(&other.scale(-self.modulus.one()))
    }

    pub fn mul(&self, other: &UniPoly) -> Result<UniPoly> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(UniPoly::zero(self.modulus));
        }
        let mut out = vec![self.modulus.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(self.modulus, out)
    }

    pub fn scale(&self, c: FieldElement) -> UniPoly {
        UniPoly::new(self.modulus, self.coeffs.iter().map(|&a| a * c).collect())
            .expect("same modulus")
    }

    /// Divides by the leading coefficient; the zero polynomial is returned as is.
    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            Some(lc) => self.scale(lc.inverse().expect("leading coefficient is nonzero")),
            None => self.clone(),
        }
    }

    /// Quotient and remainder with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        self.check(divisor)?;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor.leading().unwrap().inverse()?;
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&n| n >= dd) else {
            return Ok((UniPoly::zero(self.modulus), self.clone()));
        };
        let mut quot = vec![self.modulus.zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let t = rem[i + dd] * lead_inv;
            quot[i] = t;
            if t.is_zero() {
                continue;
            }
            for (j, &c) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= t * c;
            }
        }
        rem.truncate(dd);
        Ok((UniPoly::new(self.modulus, quot)?, UniPoly::new(self.modulus, rem)?))
    }

    pub fn rem(&self, divisor: &UniPoly) -> Result<UniPoly> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> Result<UniPoly> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// `self^e mod modulus_poly` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, modulus_poly: &UniPoly) -> Result<UniPoly> {
        let mut base = self.rem(modulus_poly)?;
        let mut acc = UniPoly::constant(self.modulus.one()).rem(modulus_poly)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?.rem(modulus_poly)?;
            }
            base = base.mul(&base)?.rem(modulus_poly)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Distinct roots in `F_p`, ascending. The random stream is only
    /// consumed by [`RootStrategy::Split`].
    pub fn roots<R: Rng + ?Sized>(
        &self,
        strategy: RootStrategy,
        rng: &mut R,
    ) -> Result<Vec<FieldElement>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut roots = match strategy {
            RootStrategy::Exhaustive => self
                .modulus
                .elements()
                .filter(|&a| self.evaluate(a).unwrap().is_zero())
                .collect(),
            RootStrategy::Split => self.split_roots(rng)?,
        };
        roots.sort();
        roots.dedup();
        Ok(roots)
    }

    fn split_roots<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<FieldElement>> {
        let m = self.modulus;
        let f = self.monic();
        if f.degree() == Some(0) {
            return Ok(Vec::new());
        }
        // Product of (X - r) over the distinct roots r.
        let xp = UniPoly::x(m).pow_mod(m.value(), &f)?;
        let linear_part = f.gcd(&xp.sub(&UniPoly::x(m))?)?;
        let mut out = Vec::new();
        let mut stack = vec![linear_part];
        let half = (m.value() - 1) / 2;
        while let Some(g) = stack.pop() {
            match g.degree() {
                None | Some(0) => {}
                Some(1) => out.push(-g.coeffs[0]),
                Some(d) => {
                    // Each root r lands in the split iff (r + s) is a nonzero square.
                    loop {
                        let s = m.from_residue(rng.random_range(0..m.value()));
                        let shifted = UniPoly::new(m, vec![s, m.one()])?;
                        let probe = shifted
                            .pow_mod(half, &g)?
                            .sub(&UniPoly::constant(m.one()))?;
                        let h = g.gcd(&probe)?;
                        let hd = h.degree().unwrap_or(0);
                        if hd > 0 && hd < d {
                            let (cofactor, _) = g.div_rem(&h)?;
                            stack.push(h);
                            stack.push(cofactor);
                            break;
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (mod {})", self.modulus);
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}X"),
                _ => format!("{c}X^{i}"),
            })
            .collect();
        write!(f, "{} (mod {})", terms.join(" + "), self.modulus)
    }
}
