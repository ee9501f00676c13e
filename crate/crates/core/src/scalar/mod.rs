//! The coefficient field ℚ(s) with `s = q^(1/2)`, and numeric evaluation at a
//! concrete `q ∈ (0, 1)`.
//!
//! Every value is stored in a canonical reduced form, so two scalars are equal
//! exactly when their representations are identical. Half-integer powers of `q`
//! are ordinary monomials in `s`.

mod laurent;

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use laurent::LaurentPoly;

use crate::error::{Error, Result};

/// An element of ℚ(s), `s = q^(1/2)`.
///
/// Canonical form: the denominator has no negative powers of `s` and a nonzero,
/// positive constant term; numerator and denominator are coprime in ℚ[s] and
/// their coefficients share no common integer factor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        ExactScalar { num: LaurentPoly::constant(n), den: LaurentPoly::one() }
    }

    /// `c · s^exp`, i.e. `c · q^(exp/2)`.
    pub fn monomial(c: i64, exp: i64) -> Self {
        ExactScalar { num: LaurentPoly::monomial(BigInt::from(c), exp), den: LaurentPoly::one() }
    }

    /// `q^n`.
    pub fn q_pow(n: i64) -> Self {
        Self::monomial(1, 2 * n)
    }

    /// `q^(n/2)`.
    pub fn q_half_pow(n: i64) -> Self {
        Self::monomial(1, n)
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// Builds `num / den` and brings it into canonical form.
    pub fn from_fraction(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a Laurent polynomial (denominator 1).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// True for `c · s^e` with no denominator.
    pub fn is_monomial(&self) -> bool {
        self.den.is_one() && self.num.num_terms() == 1
    }

    /// Sign of the leading printed coefficient; used to fold `+ -` into `-` when printing.
    pub fn is_negative_monomial(&self) -> bool {
        self.is_monomial() && self.num.coeffs()[0].is_negative()
    }

    fn reduce(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let shift = den.low();
        let num = num.shift(-shift);
        let (_, den_coeffs) = den.into_parts();
        let (num_low, mut num_coeffs) = num.into_parts();
        let mut den_coeffs = den_coeffs;

        if den_coeffs.len() > 1 {
            let g = laurent::poly_gcd(&num_coeffs, &den_coeffs);
            if g.len() > 1 {
                num_coeffs = laurent::div_exact(&num_coeffs, &g);
                den_coeffs = laurent::div_exact(&den_coeffs, &g);
            }
        }
        let c = laurent::content(&num_coeffs).gcd(&laurent::content(&den_coeffs));
        let negate = den_coeffs[0].is_negative();
        if !c.is_one() || negate {
            let c = if negate { -c } else { c };
            for x in num_coeffs.iter_mut().chain(den_coeffs.iter_mut()) {
                *x = &*x / &c;
            }
        }
        ExactScalar { num: LaurentPoly::from_parts(num_low, num_coeffs), den: LaurentPoly::from_parts(0, den_coeffs) }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if other.is_monomial() {
            // dividing by c·s^e only rescales the numerator
            let (e, c) = other.num.terms().next().map(|(e, c)| (e, c.clone())).unwrap();
            return Ok(Self::reduce(self.num.clone().shift(-e), self.den.scale(&c)));
        }
        Ok(Self::reduce(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    pub fn inv(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        Ok(acc)
    }

    /// Numeric value at the context's `q`.
    pub fn eval(&self, ctx: &NumericContext) -> Result<f64> {
        let s = ctx.q.sqrt();
        let d = self.den.eval_f64(s);
        if d == 0.0 || d.abs() <= 1e-13 * self.den.abs_eval_f64(s) {
            return Err(Error::PoleAtQ { q: ctx.q });
        }
        Ok(self.num.eval_f64(s) / d)
    }

    /// Exact value at a rational `q`, available when only integral powers of `q` occur.
    pub fn eval_rational(&self, q: &BigRational) -> Result<Option<BigRational>> {
        let even = |p: &LaurentPoly| p.terms().all(|(e, _)| e % 2 == 0);
        if !even(&self.num) || !even(&self.den) {
            return Ok(None);
        }
        let eval = |p: &LaurentPoly| -> BigRational {
            p.terms().fold(BigRational::zero(), |acc, (e, c)| {
                acc + BigRational::from_integer(c.clone()) * rational_pow(q, e / 2)
            })
        };
        let d = eval(&self.den);
        if d.is_zero() {
            return Err(Error::PoleAtQ { q: num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN) });
        }
        Ok(Some(eval(&self.num) / d))
    }
}

fn rational_pow(q: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

/// The field operation selector of [`qrat_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

/// Applies one field operation; `Neg` ignores `b`.
pub fn qrat_arith(op: ArithOp, a: &ExactScalar, b: &ExactScalar) -> Result<ExactScalar> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
        ArithOp::Neg => -a,
    })
}

/// Numeric value of `a` at the context's `q`.
pub fn eval_numeric(a: &ExactScalar, ctx: &NumericContext) -> Result<f64> {
    a.eval(ctx)
}

/// A concrete deformation parameter `q ∈ (0, 1)` together with `h = -2 ln q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericContext {
    q: f64,
    h: f64,
}

impl NumericContext {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidQ(q.to_string()));
        }
        Ok(NumericContext { q, h: -2.0 * q.ln() })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn h(&self) -> f64 {
        self.h
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;

    fn add(self, other: &ExactScalar) -> ExactScalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            if self.den.is_one() {
                return ExactScalar { num, den: LaurentPoly::one() };
            }
            return ExactScalar::reduce(num, self.den.clone());
        }
        ExactScalar::reduce(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;

    fn sub(self, other: &ExactScalar) -> ExactScalar {
        self + &(-other)
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;

    fn mul(self, other: &ExactScalar) -> ExactScalar {
        if self.is_zero() || other.is_zero() {
            return ExactScalar::zero();
        }
        let num = self.num.mul(&other.num);
        if self.den.is_one() && other.den.is_one() {
            return ExactScalar { num, den: LaurentPoly::one() };
        }
        ExactScalar::reduce(num, self.den.mul(&other.den))
    }
}

impl<'a> Div<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;

    /// Panics on division by zero; use [`ExactScalar::checked_div`] for fallible division.
    fn div(self, other: &ExactScalar) -> ExactScalar {
        self.checked_div(other).expect("division by the zero scalar")
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;

    fn neg(self) -> ExactScalar {
        ExactScalar { num: self.num.neg(), den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, other: ExactScalar) -> ExactScalar { (&self).$m(&other) }
        }
        impl<'a> $tr<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, other: &ExactScalar) -> ExactScalar { (&self).$m(other) }
        }
        impl<'a> $tr<ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $m(self, other: ExactScalar) -> ExactScalar { self.$m(&other) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for ExactScalar {
    type Output = ExactScalar;

    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, other: &ExactScalar) {
        *self = &*self + other;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, other: &ExactScalar) {
        *self = &*self - other;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, other: &ExactScalar) {
        *self = &*self * other;
    }
}

impl std::iter::Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for ExactScalar {
    fn product<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::one(), |a, b| a * b)
    }
}

impl Zero for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }

    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
}

impl One for ExactScalar {
    fn one() -> Self {
        ExactScalar::one()
    }
}

fn q_power_str(exp: i64) -> String {
    match exp {
        0 => String::new(),
        2 => "q".to_string(),
        e if e % 2 == 0 && e > 0 => format!("q^{}", e / 2),
        e if e % 2 == 0 => format!("q^({})", e / 2),
        e => format!("q^({}/2)", e),
    }
}

fn write_laurent(f: &mut fmt::Formatter<'_>, p: &LaurentPoly) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    for (i, (e, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        if neg {
            f.write_str("-")?;
        } else if i > 0 {
            f.write_str("+")?;
        }
        let mag = c.abs();
        let mono = q_power_str(e);
        if mono.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            f.write_str(&mono)?;
        } else {
            write!(f, "{mag}*{mono}")?;
        }
    }
    Ok(())
}

/// Canonical text in the scalar grammar, e.g. `(1-q^2)/(1+q^2)` or `-q^(1/2)`.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write_laurent(f, &self.num);
        }
        if self.num.num_terms() == 1 {
            write_laurent(f, &self.num)?;
        } else {
            f.write_str("(")?;
            write_laurent(f, &self.num)?;
            f.write_str(")")?;
        }
        f.write_str("/")?;
        if self.den.num_terms() == 1 {
            write_laurent(f, &self.den)
        } else {
            f.write_str("(")?;
            write_laurent(f, &self.den)?;
            f.write_str(")")
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactScalar({self})")
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::expr::parse_scalar(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> ExactScalar {
        ExactScalar::q()
    }

    fn one() -> ExactScalar {
        ExactScalar::one()
    }

    #[test]
    fn additive_inverse() {
        assert!((q() + (-q())).is_zero());
    }

    #[test]
    fn multiplicative_inverse() {
        let a = one() - q().pow(2).unwrap();
        let b = one().checked_div(&a).unwrap();
        assert_eq!(a * b, one());
    }

    #[test]
    fn inverse_q_minus_q_matches_expanded_form() {
        let lhs = ExactScalar::q_pow(-1) - q();
        let rhs = (one() - ExactScalar::q_pow(2)) / q();
        assert!((lhs - rhs).is_zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(one().checked_div(&ExactScalar::zero()), Err(Error::DivisionByZero));
        assert_eq!(qrat_arith(ArithOp::Div, &q(), &(q() - q())), Err(Error::DivisionByZero));
    }

    #[test]
    fn numeric_evaluation() {
        let ctx = NumericContext::new(0.5).unwrap();
        let a = one() - ExactScalar::q_pow(2);
        assert!((a.eval(&ctx).unwrap() - 0.75).abs() < 1e-15);

        let ctx = NumericContext::new(0.25).unwrap();
        assert!((ExactScalar::q_half_pow(1).eval(&ctx).unwrap() - 0.5).abs() < 1e-15);

        let ctx = NumericContext::new(0.5).unwrap();
        let b = one() / (ExactScalar::q_pow(-1) - q());
        assert!((b.eval(&ctx).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_q_rejected() {
        assert!(NumericContext::new(1.0).is_err());
        assert!(NumericContext::new(0.0).is_err());
        assert!(NumericContext::new(f64::NAN).is_err());
    }

    #[test]
    fn rational_evaluation_needs_integral_powers() {
        let half = BigRational::new(1.into(), 2.into());
        let a = (one() - ExactScalar::q_pow(2)) / ExactScalar::q();
        assert_eq!(a.eval_rational(&half).unwrap(), Some(BigRational::new(3.into(), 2.into())));
        assert_eq!(ExactScalar::q_half_pow(1).eval_rational(&half).unwrap(), None);
    }

    #[test]
    fn canonical_denominator() {
        // (q - q^(-1)) has s^(-2) in it; the canonical denominator absorbs no negative powers.
        let d = ExactScalar::q() - ExactScalar::q_pow(-1);
        let x = one() / d;
        assert_eq!(x.denominator().low(), 0);
        assert!(x.denominator().coeffs()[0].is_positive());
        assert_eq!(x.to_string(), "-q/(1-q^2)");
    }

    #[test]
    fn printing() {
        assert_eq!((one() - ExactScalar::q_pow(2)).to_string(), "1-q^2");
        assert_eq!(ExactScalar::q_half_pow(-3).to_string(), "q^(-3/2)");
        assert_eq!((ExactScalar::from_int(3) * ExactScalar::q_pow(-1)).to_string(), "3*q^(-1)");
        assert_eq!(ExactScalar::zero().to_string(), "0");
        assert_eq!((one() / ExactScalar::from_int(2)).to_string(), "1/2");
    }

    fn arb_laurent() -> impl Strategy<Value = ExactScalar> {
        prop::collection::vec((-3i64..=3, -4i64..=4), 1..4)
            .prop_map(|terms| terms.into_iter().map(|(c, e)| ExactScalar::monomial(c, e)).sum())
    }

    fn arb_scalar() -> impl Strategy<Value = ExactScalar> {
        (arb_laurent(), arb_laurent()).prop_map(|(n, d)| if d.is_zero() { n } else { &n / &d })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), ExactScalar::one());
            }
        }

        #[test]
        fn canonical_equality(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!((&a - &b).is_zero(), a == b);
        }

        #[test]
        fn printing_round_trips(a in arb_scalar()) {
            let back: ExactScalar = a.to_string().parse().unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(back.to_string(), a.to_string());
        }

        #[test]
        fn eval_is_a_ring_homomorphism(a in arb_scalar(), b in arb_scalar()) {
            let ctx = NumericContext::new(0.37).unwrap();
            let (x, y) = (a.eval(&ctx).unwrap(), b.eval(&ctx).unwrap());
            let xy = (&a * &b).eval(&ctx).unwrap();
            prop_assert!((xy - x * y).abs() <= 1e-12 * xy.abs().max(1e-300) + 1e-300);
            let s = (&a + &b).eval(&ctx).unwrap();
            prop_assert!((s - (x + y)).abs() <= 1e-12 * (x.abs() + y.abs()).max(1.0));
        }
    }
}
