//! Dense Laurent polynomials in `s` with arbitrary-precision integer coefficients,
//! plus the handful of univariate polynomial routines (pseudo-remainder, exact
//! division, primitive-PRS gcd) that rational normalization needs.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `Σ coeffs[i] · s^(low + i)`.
///
/// Invariant: either `coeffs` is empty (the zero polynomial, `low == 0`) or both
/// `coeffs[0]` and the last coefficient are nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: BigInt, exp: i64) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { low: exp, coeffs: vec![c] }
        }
    }

    pub(crate) fn from_parts(low: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = LaurentPoly { low, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
            return;
        }
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent present (0 for the zero polynomial).
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Highest exponent present (`low - 1` for the zero polynomial).
    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending in the exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        let i = exp - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            BigInt::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    pub fn shift(mut self, by: i64) -> Self {
        if !self.is_zero() {
            self.low += by;
        }
        self
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.high().max(other.high());
        let mut coeffs = vec![BigInt::zero(); (high - low + 1) as usize];
        for (src, off) in [(self, self.low - low), (other, other.low - low)] {
            for (i, c) in src.coeffs.iter().enumerate() {
                coeffs[off as usize + i] += c;
            }
        }
        Self::from_parts(low, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_parts(self.low + other.low, coeffs)
    }

    /// Gcd of all coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        content(&self.coeffs)
    }

    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|x| x / c).collect() }
    }

    pub fn eval_f64(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * s + c.to_f64().unwrap_or(f64::NAN);
        }
        acc * s.powi(self.low as i32)
    }

    /// Σ |c_i| · s^e_i, the natural magnitude scale for cancellation checks.
    pub fn abs_eval_f64(&self, s: f64) -> f64 {
        self.terms().map(|(e, c)| c.abs().to_f64().unwrap_or(f64::INFINITY) * s.powi(e as i32)).sum()
    }

    pub(crate) fn into_parts(self) -> (i64, Vec<BigInt>) {
        (self.low, self.coeffs)
    }
}

pub(crate) fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn degree(p: &[BigInt]) -> usize {
    p.len() - 1
}

fn primitive_part(p: &[BigInt]) -> Vec<BigInt> {
    let c = content(p);
    if c.is_one() || c.is_zero() {
        p.to_vec()
    } else {
        p.iter().map(|x| x / &c).collect()
    }
}

fn trim_poly(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// `lc(b)^(deg a - deg b + 1) · a mod b` over ℤ[s]; requires `deg a ≥ deg b`.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = degree(b);
    let lb = &b[db];
    let mut steps = degree(a) as i64 - db as i64 + 1;
    while !r.is_empty() && r.len() > db {
        let dr = degree(&r);
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        let off = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[off + i] -= &lr * bc;
        }
        trim_poly(&mut r);
        steps -= 1;
    }
    if steps > 0 {
        let f = num_traits::pow(lb.clone(), steps as usize);
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    r
}

/// Quotient of `a` by `b` over ℤ[s] when the division is known to be exact.
pub(crate) fn div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = degree(b);
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    while r.len() > db && !r.is_empty() {
        let dr = degree(&r);
        let (quo, rem) = r[dr].div_rem(lb);
        debug_assert!(rem.is_zero(), "inexact polynomial division");
        let off = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[off + i] -= &quo * bc;
        }
        q[off] = quo;
        trim_poly(&mut r);
    }
    debug_assert!(r.is_empty(), "inexact polynomial division");
    q
}

/// Primitive gcd of two nonzero polynomials (ascending coefficient vectors).
pub(crate) fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (mut a, mut b) = match a.len().cmp(&b.len()) {
        Ordering::Less => (primitive_part(b), primitive_part(a)),
        _ => (primitive_part(a), primitive_part(b)),
    };
    while !b.is_empty() {
        if b.len() == 1 {
            return vec![BigInt::one()];
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        b = if r.is_empty() { r } else { primitive_part(&r) };
    }
    if a.last().is_some_and(|c| c.is_negative()) {
        for c in a.iter_mut() {
            *c = -&*c;
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn gcd_of_cyclotomic_products() {
        // (1 - s^2)(1 + s) and (1 - s^2)(2 - s)
        let a = LaurentPoly::from_parts(0, p(&[1, 0, -1])).mul(&LaurentPoly::from_parts(0, p(&[1, 1])));
        let b = LaurentPoly::from_parts(0, p(&[1, 0, -1])).mul(&LaurentPoly::from_parts(0, p(&[2, -1])));
        let g = poly_gcd(a.coeffs(), b.coeffs());
        assert_eq!(g, p(&[-1, 0, 1]));
    }

    #[test]
    fn exact_division_round_trips() {
        let a = p(&[3, -2, 0, 5]);
        let b = p(&[1, 1]);
        let prod = LaurentPoly::from_parts(0, a.clone()).mul(&LaurentPoly::from_parts(0, b.clone()));
        assert_eq!(div_exact(prod.coeffs(), &b), a);
    }

    #[test]
    fn trimming_normalizes_low() {
        let x = LaurentPoly::from_parts(-3, p(&[0, 0, 4, 0]));
        assert_eq!(x.low(), -1);
        assert_eq!(x.coeffs(), &p(&[4])[..]);
        assert!(LaurentPoly::from_parts(5, p(&[0, 0])).is_zero());
    }
}
