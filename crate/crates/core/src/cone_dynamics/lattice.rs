use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ConeError;
use crate::exact_numbers::{QuadError, QuadNum, Rational};

/// Triple products `(H1^3, H1^2 H2, H1 H2^2, H2^3)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriForm {
    pub t111: BigInt,
    pub t112: BigInt,
    pub t122: BigInt,
    pub t222: BigInt,
}

impl TriForm {
    pub fn new(t111: BigInt, t112: BigInt, t122: BigInt, t222: BigInt) -> Self {
        TriForm {
            t111,
            t112,
            t122,
            t222,
        }
    }

    pub fn from_array(v: [i64; 4]) -> Self {
        let [a, b, c, d] = v.map(BigInt::from);
        Self::new(a, b, c, d)
    }

    pub fn as_array(&self) -> [&BigInt; 4] {
        [&self.t111, &self.t112, &self.t122, &self.t222]
    }

    /// `H_i H_j H_k` for indices in `{1, 2}`.
    pub fn triple(&self, i: u8, j: u8, k: u8) -> &BigInt {
        match [i, j, k].iter().filter(|&&x| x == 2).count() {
            0 => &self.t111,
            1 => &self.t112,
            2 => &self.t122,
            _ => &self.t222,
        }
    }

    /// `(pH1 + qH2)^3`.
    pub fn cube(&self, p: &BigInt, q: &BigInt) -> BigInt {
        &self.t111 * p * p * p
            + 3 * &self.t112 * p * p * q
            + 3 * &self.t122 * p * q * q
            + &self.t222 * q * q * q
    }

    /// Symmetric trilinear evaluation `D1 . D2 . D3`.
    pub fn eval(&self, d1: &IntegralClass, d2: &IntegralClass, d3: &IntegralClass) -> BigInt {
        let mut total = BigInt::zero();
        for (i, a) in [(1u8, &d1.p), (2, &d1.q)] {
            for (j, b) in [(1u8, &d2.p), (2, &d2.q)] {
                for (k, c) in [(1u8, &d3.p), (2, &d3.q)] {
                    total += self.triple(i, j, k) * a * b * c;
                }
            }
        }
        total
    }

    pub fn cube_quad(&self, d: &DivisorClass) -> QuadNum {
        let (p, q) = (&d.p, &d.q);
        let k = |c: &BigInt| Rational::from_integer(c.clone());
        p.pow(3).scale(&k(&self.t111))
            + (&(p * p) * q).scale(&k(&(3 * &self.t112)))
            + (&(p * q) * q).scale(&k(&(3 * &self.t122)))
            + q.pow(3).scale(&k(&self.t222))
    }
}

/// Linear form `D -> c2(X) . D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct C2Form {
    pub c1: BigInt,
    pub c2: BigInt,
}

impl C2Form {
    pub fn new(c1: BigInt, c2: BigInt) -> Self {
        C2Form { c1, c2 }
    }

    pub fn from_array(v: [i64; 2]) -> Self {
        let [a, b] = v.map(BigInt::from);
        Self::new(a, b)
    }

    pub fn degree(&self, p: &BigInt, q: &BigInt) -> BigInt {
        &self.c1 * p + &self.c2 * q
    }
}

/// Integral class `pH1 + qH2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegralClass {
    pub p: BigInt,
    pub q: BigInt,
}

impl IntegralClass {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        IntegralClass {
            p: p.into(),
            q: q.into(),
        }
    }

    pub fn h1() -> Self {
        Self::new(1, 0)
    }

    pub fn h2() -> Self {
        Self::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn det(&self, other: &Self) -> BigInt {
        &self.p * &other.q - &self.q * &other.p
    }

    pub fn add(&self, other: &Self) -> Self {
        IntegralClass::new(&self.p + &other.p, &self.q + &other.q)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntegralClass::new(&self.p * k, &self.q * k)
    }

    /// Primitive generator of the ray through `self`.
    pub fn primitive(&self) -> Self {
        let g = self.p.gcd(&self.q);
        if g.is_zero() {
            return self.clone();
        }
        IntegralClass::new(&self.p / &g, &self.q / &g)
    }

    pub fn to_class(&self, d: &BigInt) -> DivisorClass {
        let z = QuadNum::zero(d);
        DivisorClass {
            p: z.with_integer(self.p.clone()),
            q: z.with_integer(self.q.clone()),
        }
    }
}

impl fmt::Display for IntegralClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.p, self.q)
    }
}

impl std::str::FromStr for IntegralClass {
    type Err = String;

    /// Parses `"p,q"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, q) = s
            .split_once(',')
            .ok_or_else(|| format!("expected `p,q`, got {s:?}"))?;
        let p: BigInt = p.trim().parse().map_err(|_| format!("bad coordinate {p:?}"))?;
        let q: BigInt = q.trim().parse().map_err(|_| format!("bad coordinate {q:?}"))?;
        Ok(IntegralClass { p, q })
    }
}

/// Real class `pH1 + qH2` with coordinates in `Q(sqrt(d))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub p: QuadNum,
    pub q: QuadNum,
}

impl DivisorClass {
    pub fn new(p: QuadNum, q: QuadNum) -> Result<Self, QuadError> {
        if p.radicand() != q.radicand() {
            return Err(QuadError::RadicandMismatch(
                p.radicand().clone(),
                q.radicand().clone(),
            ));
        }
        Ok(DivisorClass { p, q })
    }

    pub fn radicand(&self) -> &BigInt {
        self.p.radicand()
    }

    pub fn to_integral(&self) -> Option<IntegralClass> {
        Some(IntegralClass {
            p: self.p.to_integer()?,
            q: self.q.to_integer()?,
        })
    }

    pub fn is_integral(&self) -> bool {
        self.to_integral().is_some()
    }

    pub fn det(&self, other: &Self) -> QuadNum {
        &(&self.p * &other.q) - &(&self.q * &other.p)
    }

    pub fn add(&self, other: &Self) -> Self {
        DivisorClass {
            p: &self.p + &other.p,
            q: &self.q + &other.q,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        DivisorClass {
            p: &self.p - &other.p,
            q: &self.q - &other.q,
        }
    }

    pub fn neg(&self) -> Self {
        DivisorClass {
            p: -&self.p,
            q: -&self.q,
        }
    }

    pub fn scale(&self, k: &QuadNum) -> Self {
        DivisorClass {
            p: &self.p * k,
            q: &self.q * k,
        }
    }

    pub fn scale_rational(&self, k: &Rational) -> Self {
        DivisorClass {
            p: self.p.scale(k),
            q: self.q.scale(k),
        }
    }

    /// Coefficient-wise floor in the integral basis `(H1, H2)`.
    pub fn floor(&self) -> IntegralClass {
        IntegralClass {
            p: self.p.floor(),
            q: self.q.floor(),
        }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_integral() {
            Some(c) => write!(f, "{c}"),
            None => write!(f, "({})*H1 + ({})*H2", self.p, self.q),
        }
    }
}

/// Unimodular 2x2 integer matrix; column `j` is the image of `H_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeMap {
    m: [[BigInt; 2]; 2],
    det: i8,
}

impl LatticeMap {
    /// From row-major entries `[m00, m01, m10, m11]`.
    pub fn new(rows: [BigInt; 4]) -> Result<Self, ConeError> {
        let [a, b, c, d] = rows;
        let det = &a * &d - &b * &c;
        let det = if det.is_one() {
            1
        } else if (-&det).is_one() {
            -1
        } else {
            return Err(ConeError::NotUnimodular(det));
        };
        Ok(LatticeMap {
            m: [[a, b], [c, d]],
            det,
        })
    }

    pub fn from_i64(rows: [i64; 4]) -> Result<Self, ConeError> {
        Self::new(rows.map(BigInt::from))
    }

    pub fn identity() -> Self {
        Self::from_i64([1, 0, 0, 1]).unwrap()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.m[i][j]
    }

    pub fn row_major(&self) -> [BigInt; 4] {
        [
            self.m[0][0].clone(),
            self.m[0][1].clone(),
            self.m[1][0].clone(),
            self.m[1][1].clone(),
        ]
    }

    pub fn det(&self) -> i8 {
        self.det
    }

    pub fn trace(&self) -> BigInt {
        &self.m[0][0] + &self.m[1][1]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = &self.m;
        let s = BigInt::from(self.det);
        LatticeMap {
            m: [[d * &s, -b * &s], [-c * &s, a * &s]],
            det: self.det,
        }
    }

    pub fn apply(&self, d: &IntegralClass) -> IntegralClass {
        IntegralClass {
            p: &self.m[0][0] * &d.p + &self.m[0][1] * &d.q,
            q: &self.m[1][0] * &d.p + &self.m[1][1] * &d.q,
        }
    }

    pub fn apply_real(&self, d: &DivisorClass) -> DivisorClass {
        let k = |x: &BigInt| Rational::from_integer(x.clone());
        DivisorClass {
            p: d.p.scale(&k(&self.m[0][0])) + d.q.scale(&k(&self.m[0][1])),
            q: d.p.scale(&k(&self.m[1][0])) + d.q.scale(&k(&self.m[1][1])),
        }
    }

    /// `self^k` by binary exponentiation; negative `k` inverts first.
    pub fn pow(&self, k: &BigInt) -> Self {
        let mut base = if k.is_negative() {
            self.inverse()
        } else {
            self.clone()
        };
        let mut e = k.abs();
        let mut acc = Self::identity();
        let two = BigInt::from(2);
        while !e.is_zero() {
            if e.is_odd() {
                acc = &acc * &base;
            }
            e /= &two;
            if !e.is_zero() {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Mul<&LatticeMap> for &LatticeMap {
    type Output = LatticeMap;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &LatticeMap) -> LatticeMap {
        let e = |i: usize, j: usize| &self.m[i][0] * &rhs.m[0][j] + &self.m[i][1] * &rhs.m[1][j];
        LatticeMap {
            m: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
            det: self.det * rhs.det,
        }
    }
}

impl fmt::Display for LatticeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau1() -> LatticeMap {
        LatticeMap::from_i64([1, 6, 0, -1]).unwrap()
    }

    fn tau2() -> LatticeMap {
        LatticeMap::from_i64([-1, 0, 8, 1]).unwrap()
    }

    #[test]
    fn sigma_of_example() {
        let sigma = &tau2() * &tau1();
        assert_eq!(sigma, LatticeMap::from_i64([-1, -6, 8, 47]).unwrap());
        assert_eq!(sigma.apply(&IntegralClass::h1()), IntegralClass::new(-1, 8));
        assert_eq!(sigma.det(), 1);
    }

    #[test]
    fn powers() {
        let sigma = &tau2() * &tau1();
        assert!(sigma.pow(&BigInt::zero()).is_identity());
        assert_eq!(sigma.pow(&BigInt::from(2)), &sigma * &sigma);
        assert_eq!(sigma.pow(&BigInt::from(-3)), sigma.inverse().pow(&BigInt::from(3)));
        assert!((&sigma.pow(&BigInt::from(7)) * &sigma.pow(&BigInt::from(-7))).is_identity());
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(matches!(
            LatticeMap::from_i64([2, 0, 0, 1]),
            Err(ConeError::NotUnimodular(_))
        ));
    }

    #[test]
    fn trilinear_matches_cube() {
        let tri = TriForm::from_array([2, 6, 8, 2]);
        let d = IntegralClass::new(3, -2);
        assert_eq!(tri.eval(&d, &d, &d), tri.cube(&d.p, &d.q));
        let one_one = IntegralClass::new(1, 1);
        assert_eq!(tri.cube(&one_one.p, &one_one.q), BigInt::from(46));
    }

    #[test]
    fn class_parsing() {
        assert_eq!("-1, 8".parse::<IntegralClass>().unwrap(), IntegralClass::new(-1, 8));
        assert!("1;2".parse::<IntegralClass>().is_err());
        assert_eq!(IntegralClass::new(-1, 8).to_string(), "-1,8");
    }
}
