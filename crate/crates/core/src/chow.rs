//! Intersection theory on complete intersections in products of projective
//! spaces.
//!
//! The Chow ring of `P^{n_1} x ... x P^{n_k}` is `Z[h_1..h_k]/(h_i^{n_i+1})`,
//! stored densely over the exponent box. Chern classes come from the Euler
//! sequence and adjunction; degrees are read off after multiplying by the
//! class of the complete intersection.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cone_dynamics::{C2Form, TriForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error("ambient needs at least one factor, each of dimension >= 1")]
    BadAmbient,
    #[error("hypersurface {index} has {got} degree entries, ambient has {expected} factors")]
    DegreeArity {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("{count} hypersurfaces exceed the ambient dimension {ambient_dim}")]
    NegativeDimension { count: usize, ambient_dim: usize },
    #[error("class must be homogeneous of degree {expected}, found a term of degree {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("intersection data needs a threefold in a product of two projective spaces, got dimension {dim} with {factors} factors")]
    NotRankTwoThreefold { dim: usize, factors: usize },
}

/// `P^{n_1} x ... x P^{n_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiProjAmbient {
    factor_dims: Vec<usize>,
}

impl MultiProjAmbient {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self, ChowError> {
        if factor_dims.is_empty() || factor_dims.contains(&0) {
            return Err(ChowError::BadAmbient);
        }
        Ok(MultiProjAmbient { factor_dims })
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn factors(&self) -> usize {
        self.factor_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.factor_dims.iter().sum()
    }

    fn box_len(&self) -> usize {
        self.factor_dims.iter().map(|n| n + 1).product()
    }

    /// Flat index of an exponent tuple, `None` if it leaves the box.
    fn index(&self, exps: &[usize]) -> Option<usize> {
        let mut idx = 0;
        for (e, n) in exps.iter().zip(&self.factor_dims) {
            if e > n {
                return None;
            }
            idx = idx * (n + 1) + e;
        }
        Some(idx)
    }

    fn exponents(&self, mut idx: usize) -> Vec<usize> {
        let mut exps = vec![0; self.factors()];
        for (slot, n) in exps.iter_mut().zip(&self.factor_dims).rev() {
            *slot = idx % (n + 1);
            idx /= n + 1;
        }
        exps
    }
}

/// Element of the truncated Chow ring of a [`MultiProjAmbient`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncPoly {
    ambient: MultiProjAmbient,
    coeffs: Vec<BigInt>,
}

impl TruncPoly {
    pub fn zero(ambient: &MultiProjAmbient) -> Self {
        TruncPoly {
            ambient: ambient.clone(),
            coeffs: vec![BigInt::zero(); ambient.box_len()],
        }
    }

    pub fn one(ambient: &MultiProjAmbient) -> Self {
        Self::monomial(ambient, &vec![0; ambient.factors()], BigInt::one())
    }

    /// `c * h^exps`; vanishes when an exponent exceeds its factor dimension.
    pub fn monomial(ambient: &MultiProjAmbient, exps: &[usize], c: BigInt) -> Self {
        let mut p = Self::zero(ambient);
        if let Some(i) = ambient.index(exps) {
            p.coeffs[i] = c;
        }
        p
    }

    /// The divisor class `sum_i degrees[i] * h_i`.
    pub fn linear(ambient: &MultiProjAmbient, degrees: &[i64]) -> Self {
        let mut p = Self::zero(ambient);
        for (i, &d) in degrees.iter().enumerate() {
            let mut exps = vec![0; ambient.factors()];
            exps[i] = 1;
            p = p + Self::monomial(ambient, &exps, BigInt::from(d));
        }
        p
    }

    pub fn ambient(&self) -> &MultiProjAmbient {
        &self.ambient
    }

    pub fn coeff(&self, exps: &[usize]) -> BigInt {
        self.ambient
            .index(exps)
            .map(|i| self.coeffs[i].clone())
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Nonzero terms as `(exponents, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.ambient.exponents(i), c))
    }

    /// Graded piece of total degree `deg`.
    pub fn graded(&self, deg: usize) -> Self {
        let mut out = Self::zero(&self.ambient);
        for (i, c) in self.coeffs.iter().enumerate() {
            if self.ambient.exponents(i).iter().sum::<usize>() == deg {
                out.coeffs[i] = c.clone();
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(&self.ambient), |acc, _| &acc * self)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        TruncPoly {
            ambient: self.ambient.clone(),
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// `1 / (1 + self)` for `self` without constant term, as the truncated
    /// geometric series `sum_t (-self)^t`.
    fn inverse_one_plus(&self) -> Self {
        debug_assert!(self.coeff(&vec![0; self.ambient.factors()]).is_zero());
        let neg = -self;
        let mut term = Self::one(&self.ambient);
        let mut sum = term.clone();
        for _ in 0..self.ambient.dim() {
            term = &term * &neg;
            sum = sum + &term;
        }
        sum
    }
}

impl Add<&TruncPoly> for TruncPoly {
    type Output = TruncPoly;
    fn add(mut self, rhs: &TruncPoly) -> TruncPoly {
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Add for TruncPoly {
    type Output = TruncPoly;
    fn add(self, rhs: TruncPoly) -> TruncPoly {
        self + &rhs
    }
}

impl Sub for TruncPoly {
    type Output = TruncPoly;
    fn sub(self, rhs: TruncPoly) -> TruncPoly {
        self + &(-&rhs)
    }
}

impl Neg for &TruncPoly {
    type Output = TruncPoly;
    fn neg(self) -> TruncPoly {
        TruncPoly {
            ambient: self.ambient.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&TruncPoly> for &TruncPoly {
    type Output = TruncPoly;
    fn mul(self, rhs: &TruncPoly) -> TruncPoly {
        assert_eq!(self.ambient, rhs.ambient, "Chow ring mismatch");
        let amb = &self.ambient;
        let mut out = TruncPoly::zero(amb);
        let rhs_terms: Vec<_> = rhs.terms().collect();
        for (ea, ca) in self.terms() {
            for (eb, cb) in &rhs_terms {
                let sum: Vec<usize> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if let Some(i) = amb.index(&sum) {
                    out.coeffs[i] += ca * *cb;
                }
            }
        }
        out
    }
}

/// Complete intersection of hypersurfaces of the given multidegrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CIData {
    pub ambient: MultiProjAmbient,
    pub degrees: Vec<Vec<i64>>,
}

impl CIData {
    pub fn new(ambient: MultiProjAmbient, degrees: Vec<Vec<i64>>) -> Result<Self, ChowError> {
        let ci = CIData { ambient, degrees };
        ci.check()?;
        Ok(ci)
    }

    /// Validates arity and dimension; deserialized data should pass through here.
    pub fn check(&self) -> Result<(), ChowError> {
        MultiProjAmbient::new(self.ambient.factor_dims.clone())?;
        for (index, d) in self.degrees.iter().enumerate() {
            if d.len() != self.ambient.factors() {
                return Err(ChowError::DegreeArity {
                    index,
                    got: d.len(),
                    expected: self.ambient.factors(),
                });
            }
        }
        if self.degrees.len() > self.ambient.dim() {
            return Err(ChowError::NegativeDimension {
                count: self.degrees.len(),
                ambient_dim: self.ambient.dim(),
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim() - self.degrees.len()
    }

    /// Anticanonical degree sums match `n_i + 1` on every factor.
    pub fn is_calabi_yau(&self) -> bool {
        self.ambient
            .factor_dims()
            .iter()
            .enumerate()
            .all(|(i, &n)| self.degrees.iter().map(|d| d[i]).sum::<i64>() == n as i64 + 1)
    }

    fn hypersurface_classes(&self) -> impl Iterator<Item = TruncPoly> + '_ {
        self.degrees
            .iter()
            .map(|d| TruncPoly::linear(&self.ambient, d))
    }

    /// Class of the complete intersection in the ambient Chow ring.
    pub fn fundamental_class(&self) -> TruncPoly {
        self.hypersurface_classes()
            .fold(TruncPoly::one(&self.ambient), |acc, d| &acc * &d)
    }
}

/// `prod_i (1 + h_i)^{n_i + 1}`, the total Chern class of the ambient.
pub fn ambient_tangent_chern(ambient: &MultiProjAmbient) -> TruncPoly {
    let mut total = TruncPoly::one(ambient);
    for (i, &n) in ambient.factor_dims().iter().enumerate() {
        let mut exps = vec![0; ambient.factors()];
        exps[i] = 1;
        let one_plus_h = TruncPoly::one(ambient) + TruncPoly::monomial(ambient, &exps, BigInt::one());
        total = &total * &one_plus_h.pow(n + 1);
    }
    total
}

/// Total Chern class of the complete intersection, as an ambient class.
pub fn total_chern(ci: &CIData) -> TruncPoly {
    ci.hypersurface_classes()
        .fold(ambient_tangent_chern(&ci.ambient), |acc, d| &acc * &d.inverse_one_plus())
}

/// `(c_1, c_2)` of the complete intersection, by adjunction.
pub fn ci_chern(ci: &CIData) -> (TruncPoly, TruncPoly) {
    let c = total_chern(ci);
    (c.graded(1), c.graded(2))
}

/// Degree of `cls` restricted to the complete intersection.
pub fn integrate(ci: &CIData, cls: &TruncPoly) -> Result<BigInt, ChowError> {
    let expected = ci.dim();
    if let Some((exps, _)) = cls.terms().find(|(e, _)| e.iter().sum::<usize>() != expected) {
        return Err(ChowError::WrongDegree {
            expected,
            found: exps.iter().sum(),
        });
    }
    let top = cls * &ci.fundamental_class();
    Ok(top.coeff(ci.ambient.factor_dims()))
}

/// Triple products `H_i H_j H_l` and degrees `c_2 . H_i` of a threefold in
/// `P^a x P^b`.
pub fn intersection_data(ci: &CIData) -> Result<(TriForm, C2Form), ChowError> {
    if ci.dim() != 3 || ci.ambient.factors() != 2 {
        return Err(ChowError::NotRankTwoThreefold {
            dim: ci.dim(),
            factors: ci.ambient.factors(),
        });
    }
    let amb = &ci.ambient;
    let h = |i: usize| {
        let mut e = vec![0, 0];
        e[i] = 1;
        TruncPoly::monomial(amb, &e, BigInt::one())
    };
    let triple = |a: usize, b: usize| {
        let cls = TruncPoly::monomial(amb, &[a, b], BigInt::one());
        integrate(ci, &cls)
    };
    let tri = TriForm::new(triple(3, 0)?, triple(2, 1)?, triple(1, 2)?, triple(0, 3)?);
    let (_, c2) = ci_chern(ci);
    let c2form = C2Form::new(integrate(ci, &(&c2 * &h(0)))?, integrate(ci, &(&c2 * &h(1)))?);
    Ok((tri, c2form))
}
