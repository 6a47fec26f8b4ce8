//! Rank-two lattice model of `N^1(X)`: classes, cones, the action of the
//! birational group, eigenrays of `sigma`, and reduction of movable classes
//! into a fundamental domain.

mod cone;
mod domain;
mod eigen;
mod lattice;
mod model;
mod word;

use num_bigint::BigInt;
use thiserror::Error;

pub use cone::{cone_contains, Cone2};
pub use domain::{fundamental_domain, reduce_to_domain, FundamentalDomain};
pub use eigen::{eigen_coords, eigen_sigma, l1, l2, SigmaData};
pub use lattice::{C2Form, DivisorClass, IntegralClass, LatticeMap, TriForm};
pub use model::{validate_model, CYModel, Generators, Violation};
pub use word::{Gen, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("matrix has determinant {0}, expected +-1")]
    NotUnimodular(BigInt),
    #[error("sigma has finite order (trace {trace})")]
    FiniteOrder { trace: BigInt },
    #[error("sigma has negative eigenvalues (trace {trace})")]
    ReversesCone { trace: BigInt },
    #[error("sigma has rational eigenrays (trace {trace})")]
    RationalEigenrays { trace: BigInt },
    #[error("cone rays are proportional")]
    Degenerate,
    #[error("class lies on the R1 ray (a2 = 0)")]
    ZeroCoordinate,
    #[error("class {0} is not ample")]
    NotAmple(IntegralClass),
    #[error("class {0} is outside the open movable cone")]
    OutsideMovable(IntegralClass),
    #[error("no fundamental domain contains the nef cone")]
    DomainNotFound,
    #[error("model has no involutions")]
    NoInvolutions,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("model is invalid: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

/// A validated model with its eigendata and fundamental domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Geometry {
    pub model: CYModel,
    pub sigma: SigmaData,
    pub domain: FundamentalDomain,
}

impl Geometry {
    /// Validates and builds the domain from the ample class `g1 + g2`.
    pub fn new(model: CYModel) -> Result<Self, GeometryError> {
        validate_model(&model).map_err(GeometryError::Invalid)?;
        let sigma = eigen_sigma(&model)?;
        let x = model.nef[0].add(&model.nef[1]);
        let domain = fundamental_domain(&model, &sigma, &x)?;
        Ok(Geometry {
            model,
            sigma,
            domain,
        })
    }

    pub fn d(&self) -> &BigInt {
        &self.sigma.d
    }

    pub fn class(&self, c: &IntegralClass) -> DivisorClass {
        c.to_class(&self.sigma.d)
    }

    pub fn reduce(&self, d: &IntegralClass) -> Result<(Word, IntegralClass), ConeError> {
        reduce_to_domain(&self.model, &self.sigma, &self.domain, d)
    }

    pub fn apply(&self, w: &Word, d: &IntegralClass) -> Result<IntegralClass, ConeError> {
        w.apply(&self.model, &self.sigma, d)
    }

    pub fn nef_cone(&self) -> Cone2 {
        Cone2::new(self.class(&self.model.nef[0]), self.class(&self.model.nef[1]))
            .expect("nef generators validated")
    }

    pub fn movable_cone(&self) -> Cone2 {
        Cone2::new(self.sigma.r1.clone(), self.sigma.r2.clone()).expect("eigenrays independent")
    }
}
