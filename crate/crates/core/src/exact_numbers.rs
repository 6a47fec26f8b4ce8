//! Exact rationals and real quadratic fields `Q(sqrt(d))`.
//!
//! Rationals are `num_rational::BigRational`. A [`QuadNum`] is `a + b*sqrt(d)`
//! with rational `a`, `b` and a squarefree radicand `d >= 2`. Every
//! comparison, sign test and floor is decided exactly; floating point only
//! appears in the explicit `to_f64` / `to_decimal` renderings.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("radicand mismatch: sqrt({0}) vs sqrt({1})")]
    RadicandMismatch(BigInt, BigInt),
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand {0} is not a positive non-square integer")]
    InvalidRadicand(BigInt),
    #[error("cannot parse {input:?} as `a + b*sqrt(d)`: {reason}")]
    Parse { input: String, reason: String },
}

/// Splits `d = k^2 * d'` with `d'` squarefree and returns `(k, d')`.
fn squarefree_split(d: &BigInt) -> (BigInt, BigInt) {
    let mut rest = d.clone();
    let mut k = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p <= rest {
        let sq = &p * &p;
        while (&rest % &sq).is_zero() {
            rest /= &sq;
            k *= &p;
        }
        p += 1u32;
    }
    (k, rest)
}

/// Element `a + b*sqrt(d)` of a real quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    a: Rational,
    b: Rational,
    d: BigInt,
}

impl QuadNum {
    /// Builds `a + b*sqrt(d)`, rewriting a non-squarefree `d = k^2 d'` as
    /// `a + (b k) sqrt(d')`. Fails when `d` is not positive or is a perfect
    /// square.
    pub fn new(a: Rational, b: Rational, d: impl Into<BigInt>) -> Result<Self, QuadError> {
        let d = d.into();
        if !d.is_positive() {
            return Err(QuadError::InvalidRadicand(d));
        }
        let (k, core) = squarefree_split(&d);
        if core.is_one() {
            return Err(QuadError::InvalidRadicand(d));
        }
        Ok(QuadNum {
            a,
            b: b * Rational::from_integer(k),
            d: core,
        })
    }

    /// Rational value carried in the field `Q(sqrt(d))`.
    pub fn rational(a: Rational, d: impl Into<BigInt>) -> Result<Self, QuadError> {
        Self::new(a, Rational::zero(), d)
    }

    pub fn from_integer(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self, QuadError> {
        Self::rational(Rational::from_integer(n.into()), d)
    }

    pub fn zero(d: &BigInt) -> Self {
        QuadNum {
            a: Rational::zero(),
            b: Rational::zero(),
            d: d.clone(),
        }
    }

    pub fn one(d: &BigInt) -> Self {
        QuadNum {
            a: Rational::one(),
            b: Rational::zero(),
            d: d.clone(),
        }
    }

    /// Same field, rational value.
    pub fn with_rational(&self, a: Rational) -> Self {
        QuadNum {
            a,
            b: Rational::zero(),
            d: self.d.clone(),
        }
    }

    pub fn with_integer(&self, n: impl Into<BigInt>) -> Self {
        self.with_rational(Rational::from_integer(n.into()))
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The integer value, if this number is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        (self.b.is_zero() && self.a.is_integer()).then(|| self.a.to_integer())
    }

    pub fn conjugate(&self) -> Self {
        QuadNum {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// Field norm `a^2 - b^2 d`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.clone())
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    fn check_radicand(&self, other: &Self) -> Result<(), QuadError> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(QuadError::RadicandMismatch(self.d.clone(), other.d.clone()))
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, QuadError> {
        self.check_radicand(rhs)?;
        Ok(QuadNum {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            d: self.d.clone(),
        })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, QuadError> {
        self.check_radicand(rhs)?;
        Ok(QuadNum {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            d: self.d.clone(),
        })
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, QuadError> {
        self.check_radicand(rhs)?;
        let d = Rational::from_integer(self.d.clone());
        Ok(QuadNum {
            a: &self.a * &rhs.a + &self.b * &rhs.b * d,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            d: self.d.clone(),
        })
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, QuadError> {
        self.check_radicand(rhs)?;
        self.try_mul(&rhs.inv()?)
    }

    /// Multiplicative inverse `conj(x) / N(x)`.
    pub fn inv(&self) -> Result<Self, QuadError> {
        if self.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        let n = self.norm();
        Ok(QuadNum {
            a: &self.a / &n,
            b: -(&self.b / &n),
            d: self.d.clone(),
        })
    }

    pub fn scale(&self, k: &Rational) -> Self {
        QuadNum {
            a: &self.a * k,
            b: &self.b * k,
            d: self.d.clone(),
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        self.scale(&Rational::from_integer(k.clone()))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = QuadNum::one(&self.d);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact sign of `a + b*sqrt(d)`.
    pub fn signum(&self) -> Ordering {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: |a| vs |b| sqrt(d), i.e. a^2 vs b^2 d
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from_integer(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => unreachable!("sqrt({}) is irrational", self.d),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    /// Exact three-way comparison.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, QuadError> {
        Ok(self.try_sub(other)?.signum())
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Greatest integer `n` with `n <= self`.
    ///
    /// Writes the value as `(A + B sqrt(d)) / C` over the integers, brackets
    /// `B sqrt(d)` between consecutive integers with an integer square root,
    /// and settles the remaining two candidates with an exact comparison.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        let c = self.a.denom().lcm(self.b.denom());
        let big_a = (&self.a * Rational::from_integer(c.clone())).to_integer();
        let big_b = (&self.b * Rational::from_integer(c.clone())).to_integer();
        let s = (&big_b * &big_b * &self.d).sqrt();
        // lower end of the open interval containing the value
        let lo_num = if big_b.is_positive() {
            &big_a + &s
        } else {
            &big_a - &s - 1
        };
        let candidate = lo_num.div_floor(&c) + 1;
        if self.signum_minus_integer(&candidate) != Ordering::Less {
            candidate
        } else {
            candidate - 1
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    fn signum_minus_integer(&self, n: &BigInt) -> Ordering {
        QuadNum {
            a: &self.a - Rational::from_integer(n.clone()),
            b: self.b.clone(),
            d: self.d.clone(),
        }
        .signum()
    }

    /// Decimal rendering rounded half-up to `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        assert!(sig > 0, "need at least one significant digit");
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let x = self.abs();
        // decimal exponent e with 10^e <= x < 10^(e+1)
        let mut e = x.rough_log10();
        while x.signum_minus_rational(&pow10(e)) == Ordering::Less {
            e -= 1;
        }
        while x.signum_minus_rational(&pow10(e + 1)) != Ordering::Less {
            e += 1;
        }
        let shift = sig as i64 - 1 - e;
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let mut digits = (x.scale(&pow10(shift)) + x.with_rational(half)).floor();
        let limit = num_traits::pow(BigInt::from(10), sig);
        if digits >= limit {
            digits /= 10;
            e += 1;
        }
        let text = digits.to_string();
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if e < 0 {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-e - 1) as usize));
            out.push_str(&text);
        } else if (e as usize) + 1 >= text.len() {
            out.push_str(&text);
            out.extend(std::iter::repeat_n('0', e as usize + 1 - text.len()));
        } else {
            let (int_part, frac) = text.split_at(e as usize + 1);
            out.push_str(int_part);
            out.push('.');
            out.push_str(frac);
        }
        out
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal(20)
            .parse()
            .expect("decimal rendering parses as f64")
    }

    fn rough_log10(&self) -> i64 {
        let approx = self.a.to_f64().unwrap_or(0.0)
            + self.b.to_f64().unwrap_or(0.0) * self.d.to_f64().unwrap_or(0.0).sqrt();
        if approx.is_finite() && approx > 0.0 {
            approx.log10().floor() as i64
        } else {
            0
        }
    }

    fn signum_minus_rational(&self, r: &Rational) -> Ordering {
        QuadNum {
            a: &self.a - r,
            b: self.b.clone(),
            d: self.d.clone(),
        }
        .signum()
    }
}

fn pow10(e: i64) -> Rational {
    let p = num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

fn sign_of(r: &Rational) -> Ordering {
    match r.numer().sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

impl PartialOrd for QuadNum {
    /// `None` across different radicands.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

// Operator impls panic on radicand mismatch; the fallible forms are `try_*`.
macro_rules! forward_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&QuadNum> for &QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

impl fmt::Display for QuadNum {
    /// Canonical `a + b*sqrt(d)` (or `a - |b|*sqrt(d)`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.a, -self.b.clone(), self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl FromStr for QuadNum {
    type Err = QuadError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason: &str| QuadError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (head, tail) = compact
            .split_once("*sqrt(")
            .ok_or_else(|| fail("missing `*sqrt(`"))?;
        let radicand = tail
            .strip_suffix(')')
            .ok_or_else(|| fail("missing closing parenthesis"))?;
        let d: BigInt = radicand.parse().map_err(|_| fail("bad radicand"))?;
        // split `a<sign>b` at the first sign after the leading one
        let split = head
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .ok_or_else(|| fail("missing sign between rational and irrational part"))?;
        let a: Rational = head[..split]
            .parse()
            .map_err(|_| fail("bad rational part"))?;
        let (sign, rest) = head[split..].split_at(1);
        let mut b: Rational = rest.parse().map_err(|_| fail("bad irrational coefficient"))?;
        if sign == "-" {
            b = -b;
        }
        QuadNum::new(a, b, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadNum {
        s.parse().unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn lambda_times_conjugate_is_one() {
        let lam = q("23 + 4*sqrt(33)");
        assert_eq!(&lam * &lam.conjugate(), QuadNum::one(&BigInt::from(33)));
        assert_eq!(lam.inv().unwrap(), q("23 - 4*sqrt(33)"));
    }

    #[test]
    fn additive_identity_and_square() {
        let x = q("-3 + 1/2*sqrt(33)");
        assert_eq!(&QuadNum::zero(&BigInt::from(33)) + &x, x);
        let y = q("1 + 1*sqrt(2)");
        assert_eq!(&y * &y, q("3 + 2*sqrt(2)"));
    }

    #[test]
    fn comparisons() {
        let lam = q("23 + 4*sqrt(33)");
        let forty_six = QuadNum::from_integer(46, 33).unwrap();
        assert_eq!(lam.try_cmp(&forty_six).unwrap(), Ordering::Less);
        assert_eq!(lam.try_cmp(&lam).unwrap(), Ordering::Equal);
        let r1 = q("-3 + 1/2*sqrt(33)");
        assert_eq!(r1.signum(), Ordering::Less);
    }

    #[test]
    fn floors() {
        let r1 = q("-3 + 1/2*sqrt(33)");
        assert_eq!(r1.scale_int(&BigInt::from(10)).floor(), BigInt::from(-2));
        assert_eq!(QuadNum::from_integer(7, 33).unwrap().floor(), BigInt::from(7));
        assert_eq!(q("23 + 4*sqrt(33)").floor(), BigInt::from(45));
        assert_eq!(q("23 - 4*sqrt(33)").floor(), BigInt::from(0));
        assert_eq!(q("-23 + 4*sqrt(33)").floor(), BigInt::from(-1));
        assert_eq!(q("23 + 4*sqrt(33)").ceil(), BigInt::from(46));
    }

    #[test]
    fn radicand_is_normalized() {
        let x = QuadNum::new(r(1, 1), r(1, 1), 12).unwrap();
        assert_eq!(x, q("1 + 2*sqrt(3)"));
        assert_eq!(
            QuadNum::new(r(1, 1), r(1, 1), 16),
            Err(QuadError::InvalidRadicand(BigInt::from(16)))
        );
        assert!(QuadNum::new(r(1, 1), r(1, 1), 0).is_err());
    }

    #[test]
    fn mixed_radicands_are_rejected() {
        let x = q("1 + 1*sqrt(2)");
        let y = q("1 + 1*sqrt(3)");
        assert_eq!(
            x.try_add(&y),
            Err(QuadError::RadicandMismatch(BigInt::from(2), BigInt::from(3)))
        );
        assert!(x.try_cmp(&y).is_err());
        assert_eq!(x.partial_cmp(&y), None);
    }

    #[test]
    fn division_by_zero() {
        let x = q("1 + 1*sqrt(2)");
        assert_eq!(
            x.try_div(&QuadNum::zero(&BigInt::from(2))),
            Err(QuadError::DivisionByZero)
        );
    }

    #[test]
    fn text_round_trip() {
        for s in ["23 + 4*sqrt(33)", "-3 + 1/2*sqrt(33)", "0 - 5/7*sqrt(2)", "1 + 0*sqrt(5)"] {
            assert_eq!(q(s).to_string(), s);
        }
        assert_eq!(q("  -3+1/2 * sqrt( 33 )"), q("-3 + 1/2*sqrt(33)"));
        assert!("3 + sqrt(2)".parse::<QuadNum>().is_err());
        assert!("3*sqrt(2)".parse::<QuadNum>().is_err());
        assert!("x + 1*sqrt(2)".parse::<QuadNum>().is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(q("23 + 4*sqrt(33)").to_decimal(10), "45.97825059");
        assert_eq!(q("23 - 4*sqrt(33)").to_decimal(5), "0.021749");
        assert_eq!(q("-3 + 1/2*sqrt(33)").to_decimal(6), "-0.127719");
        assert_eq!(q("100 + 0*sqrt(2)").to_decimal(2), "100");
        assert_eq!(q("99999 + 0*sqrt(2)").to_decimal(3), "100000");
        assert!((q("1 + 1*sqrt(2)").to_f64() - (1.0 + 2f64.sqrt())).abs() < 1e-15);
    }
}
