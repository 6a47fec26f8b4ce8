use num_bigint::BigInt;
use num_traits::Signed;

use super::lattice::{DivisorClass, LatticeMap};
use super::model::CYModel;
use super::ConeError;
use crate::exact_numbers::{QuadNum, Rational};

/// Eigen-decomposition of `sigma` over `Q(sqrt(d))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaData {
    pub sigma: LatticeMap,
    pub sigma_inv: LatticeMap,
    pub lambda: QuadNum,
    pub lambda_inv: QuadNum,
    /// Expanding eigenray, `sigma R1 = lambda R1`.
    pub r1: DivisorClass,
    /// Contracting eigenray, `sigma R2 = lambda^-1 R2`.
    pub r2: DivisorClass,
    pub d: BigInt,
    inv_delta: QuadNum,
}

/// Eigenvector of `[[a, b], [c, e]]` for the irrational eigenvalue `mu`,
/// scaled so its H2-coordinate is 1.
fn eigenvector(sigma: &LatticeMap, mu: &QuadNum) -> DivisorClass {
    let a = sigma.entry(0, 0);
    let b = sigma.entry(0, 1);
    // (a - mu) p + b q = 0; b != 0 because mu is irrational
    let denom = mu - &mu.with_integer(a.clone());
    let p = mu
        .with_integer(b.clone())
        .try_div(&denom)
        .expect("irrational eigenvalue differs from every integer");
    DivisorClass {
        p,
        q: mu.with_integer(1),
    }
}

/// Exact eigenvalues and eigenrays of `sigma`.
///
/// Each eigenray is scaled to `|q| = 1`, with the sign chosen so that an
/// interior nef class has positive coordinates in the basis `(R1, R2)`.
pub fn eigen_sigma(model: &CYModel) -> Result<SigmaData, ConeError> {
    let sigma = model.sigma();
    let trace = sigma.trace();
    if sigma.det() != 1 || trace.abs() <= BigInt::from(2) {
        return Err(ConeError::FiniteOrder { trace });
    }
    if trace.is_negative() {
        return Err(ConeError::ReversesCone { trace });
    }
    let disc = &trace * &trace - 4;
    let half = Rational::new(1.into(), 2.into());
    let lambda = QuadNum::new(Rational::from_integer(trace.clone()) * &half, half, disc)
        .map_err(|_| ConeError::RationalEigenrays {
            trace: trace.clone(),
        })?;
    let d = lambda.radicand().clone();
    let lambda_inv = lambda.conjugate();

    let mut r1 = eigenvector(&sigma, &lambda);
    let mut r2 = eigenvector(&sigma, &lambda_inv);
    let x = model.nef[0].add(&model.nef[1]).to_class(&d);
    let delta = r1.det(&r2);
    if (&x.det(&r2) * &delta).is_negative() {
        r1 = r1.neg();
    }
    if (&r1.det(&x) * &delta).is_negative() {
        r2 = r2.neg();
    }
    let inv_delta = r1.det(&r2).inv().expect("eigenrays are independent");
    Ok(SigmaData {
        sigma_inv: sigma.inverse(),
        sigma,
        lambda,
        lambda_inv,
        r1,
        r2,
        d,
        inv_delta,
    })
}

/// Coordinates `(a1, a2)` of `D = a1 R1 + a2 R2`.
///
/// # Panics
/// If `D` is not over the same quadratic field as `s`.
pub fn eigen_coords(d: &DivisorClass, s: &SigmaData) -> (QuadNum, QuadNum) {
    let a1 = &d.det(&s.r2) * &s.inv_delta;
    let a2 = &s.r1.det(d) * &s.inv_delta;
    (a1, a2)
}

/// `L1(D) = a1 a2`, invariant under `sigma`.
pub fn l1(d: &DivisorClass, s: &SigmaData) -> QuadNum {
    let (a1, a2) = eigen_coords(d, s);
    a1 * a2
}

/// `L2(D) = a1 / a2`, scaled by `lambda^2` under `sigma`.
pub fn l2(d: &DivisorClass, s: &SigmaData) -> Result<QuadNum, ConeError> {
    let (a1, a2) = eigen_coords(d, s);
    if a2.is_zero() {
        return Err(ConeError::ZeroCoordinate);
    }
    Ok(a1.try_div(&a2).expect("same field"))
}

impl SigmaData {
    pub fn l1(&self, d: &DivisorClass) -> QuadNum {
        l1(d, self)
    }

    pub fn l2(&self, d: &DivisorClass) -> Result<QuadNum, ConeError> {
        l2(d, self)
    }

    /// Open movable cone: both eigencoordinates strictly positive.
    pub fn is_big(&self, d: &DivisorClass) -> bool {
        let (a1, a2) = eigen_coords(d, self);
        a1.is_positive() && a2.is_positive()
    }

    pub fn zero(&self) -> QuadNum {
        QuadNum::zero(&self.d)
    }
}
