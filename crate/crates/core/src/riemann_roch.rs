//! Euler characteristics of nef classes and section counts of big classes.

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

use crate::cone_dynamics::{ConeError, CYModel, Geometry, IntegralClass, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RrError {
    #[error("class {0} is not nef")]
    NotNef(IntegralClass),
    #[error("chi({class}) = {twelve_chi}/12 is not an integer; c2 data is inconsistent")]
    NonIntegral {
        class: IntegralClass,
        twelve_chi: BigInt,
    },
    #[error("chamber covering not implemented: the fundamental domain is not the nef cone")]
    ChamberCoveringUnsupported,
    #[error(transparent)]
    Cone(#[from] ConeError),
}

/// `chi(D) = D^3/6 + c2.D/12` for an integral nef class.
pub fn chi_nef(model: &CYModel, d: &IntegralClass) -> Result<BigInt, RrError> {
    if !model.is_nef(d) {
        return Err(RrError::NotNef(d.clone()));
    }
    let twelve_chi = model.chi_times_12(d);
    let (chi, rem) = twelve_chi.div_rem(&BigInt::from(12));
    if rem != BigInt::from(0) {
        return Err(RrError::NonIntegral {
            class: d.clone(),
            twelve_chi,
        });
    }
    Ok(chi)
}

/// `h^0(D)` for an integral class in the open movable cone.
///
/// The class is moved into the fundamental domain by pullbacks, which keep
/// `h^0`; there it is nef and big, so `h^0 = chi` by Kawamata-Viehweg.
/// Returns the reduction word alongside the count.
pub fn h0_movable(geom: &Geometry, d: &IntegralClass) -> Result<(BigInt, Word), RrError> {
    if !geom.domain.is_nef(&geom.model, &geom.sigma) {
        return Err(RrError::ChamberCoveringUnsupported);
    }
    let (word, reduced) = geom.reduce(d)?;
    Ok((chi_nef(&geom.model, &reduced)?, word))
}
