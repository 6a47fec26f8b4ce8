use std::cmp::Ordering;

use super::lattice::DivisorClass;
use super::ConeError;

/// Closed convex cone spanned by two non-proportional rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone2 {
    pub ray1: DivisorClass,
    pub ray2: DivisorClass,
}

fn sign(o: Ordering) -> i8 {
    match o {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

impl Cone2 {
    pub fn new(ray1: DivisorClass, ray2: DivisorClass) -> Result<Self, ConeError> {
        if ray1.det(&ray2).is_zero() {
            return Err(ConeError::Degenerate);
        }
        Ok(Cone2 { ray1, ray2 })
    }

    /// Signs of the two coefficients of `d` in the basis `(ray1, ray2)`.
    fn coefficient_signs(&self, d: &DivisorClass) -> (i8, i8) {
        let s = sign(self.ray1.det(&self.ray2).signum());
        (
            sign(d.det(&self.ray2).signum()) * s,
            sign(self.ray1.det(d).signum()) * s,
        )
    }

    /// Closed membership; boundary rays and the origin count as inside.
    pub fn contains(&self, d: &DivisorClass) -> bool {
        let (a, b) = self.coefficient_signs(d);
        a >= 0 && b >= 0
    }

    pub fn contains_interior(&self, d: &DivisorClass) -> bool {
        self.coefficient_signs(d) == (1, 1)
    }

    /// Membership in the half-open cone containing `ray1` but not `ray2`.
    pub fn contains_half_open(&self, d: &DivisorClass) -> bool {
        let (a, b) = self.coefficient_signs(d);
        a > 0 && b >= 0
    }

    /// Same cone up to positive rescaling of the rays, in either order.
    pub fn same_as(&self, other: &Cone2) -> bool {
        let same_ray = |u: &DivisorClass, v: &DivisorClass| {
            u.det(v).is_zero() && (&(&u.p * &v.p) + &(&u.q * &v.q)).is_positive()
        };
        (same_ray(&self.ray1, &other.ray1) && same_ray(&self.ray2, &other.ray2))
            || (same_ray(&self.ray1, &other.ray2) && same_ray(&self.ray2, &other.ray1))
    }
}

pub fn cone_contains(c: &Cone2, d: &DivisorClass) -> bool {
    c.contains(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone_dynamics::IntegralClass;
    use num_bigint::BigInt;

    fn class(p: i64, q: i64) -> DivisorClass {
        IntegralClass::new(p, q).to_class(&BigInt::from(33))
    }

    #[test]
    fn nef_membership() {
        let nef = Cone2::new(class(1, 0), class(0, 1)).unwrap();
        assert!(nef.contains(&class(1, 0)));
        assert!(!nef.contains_interior(&class(1, 0)));
        assert!(nef.contains_half_open(&class(1, 0)));
        assert!(!nef.contains_half_open(&class(0, 1)));
        assert!(nef.contains(&class(2, 3)));
        assert!(!nef.contains(&class(-1, 0)));
        assert!(!nef.contains(&class(-1, 8)));
    }

    #[test]
    fn orientation_does_not_matter() {
        let a = Cone2::new(class(1, 0), class(0, 1)).unwrap();
        let b = Cone2::new(class(0, 2), class(3, 0)).unwrap();
        assert!(b.contains(&class(2, 3)));
        assert!(a.same_as(&b));
        assert!(!a.same_as(&Cone2::new(class(-1, 0), class(0, 1)).unwrap()));
    }

    #[test]
    fn degenerate_rejected() {
        assert_eq!(
            Cone2::new(class(1, 2), class(-2, -4)),
            Err(ConeError::Degenerate)
        );
    }
}
