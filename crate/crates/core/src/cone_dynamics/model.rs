use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::lattice::{C2Form, IntegralClass, LatticeMap, TriForm};

/// Generators of the acting group on `N^1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generators {
    /// Two involutions; `sigma = tau2 * tau1`.
    Involutions { tau1: LatticeMap, tau2: LatticeMap },
    /// A single infinite-order element with no involutions available.
    Sigma(LatticeMap),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CYModel {
    pub name: String,
    pub triform: TriForm,
    pub c2form: C2Form,
    pub generators: Generators,
    pub nef: [IntegralClass; 2],
}

impl CYModel {
    pub fn with_involutions(
        name: impl Into<String>,
        triform: TriForm,
        c2form: C2Form,
        tau1: LatticeMap,
        tau2: LatticeMap,
    ) -> Self {
        CYModel {
            name: name.into(),
            triform,
            c2form,
            generators: Generators::Involutions { tau1, tau2 },
            nef: [IntegralClass::h1(), IntegralClass::h2()],
        }
    }

    pub fn sigma(&self) -> LatticeMap {
        match &self.generators {
            Generators::Involutions { tau1, tau2 } => tau2 * tau1,
            Generators::Sigma(s) => s.clone(),
        }
    }

    pub fn tau1(&self) -> Option<&LatticeMap> {
        match &self.generators {
            Generators::Involutions { tau1, .. } => Some(tau1),
            Generators::Sigma(_) => None,
        }
    }

    pub fn tau2(&self) -> Option<&LatticeMap> {
        match &self.generators {
            Generators::Involutions { tau2, .. } => Some(tau2),
            Generators::Sigma(_) => None,
        }
    }

    /// `chi(D) * 12 = 2 D^3 + c2.D`.
    pub fn chi_times_12(&self, d: &IntegralClass) -> BigInt {
        2 * self.triform.cube(&d.p, &d.q) + self.c2form.degree(&d.p, &d.q)
    }

    /// Closed nef-cone membership for integral classes.
    pub fn is_nef(&self, d: &IntegralClass) -> bool {
        let [g1, g2] = &self.nef;
        let delta = g1.det(g2);
        let s = delta.signum();
        !(d.det(g2) * &s).is_negative() && !(g1.det(d) * &s).is_negative()
    }

    /// Strict interior of the nef cone.
    pub fn is_ample(&self, d: &IntegralClass) -> bool {
        let [g1, g2] = &self.nef;
        let delta = g1.det(g2);
        let s = delta.signum();
        (d.det(g2) * &s).is_positive() && (g1.det(d) * &s).is_positive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotInvolution { which: u8 },
    InvolutionDeterminant { which: u8, det: i8 },
    RayNotFixed { which: u8, image: IntegralClass },
    SigmaDeterminant { det: i8 },
    FiniteOrder { trace: BigInt },
    ReversesCone { trace: BigInt },
    RationalEigenrays { trace: BigInt },
    DegenerateNef,
    CubicNotPositive { class: IntegralClass, value: BigInt },
    NegativeTripleProduct { indices: [usize; 3], value: BigInt },
    C2Negative { class: IntegralClass, value: BigInt },
    ChiNotIntegral { class: IntegralClass, twelve_chi: BigInt },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotInvolution { which } => write!(f, "tau{which} is not an involution"),
            Violation::InvolutionDeterminant { which, det } => {
                write!(f, "det tau{which} = {det}, expected -1")
            }
            Violation::RayNotFixed { which, image } => write!(
                f,
                "tau{which} does not fix nef generator {which} (image {image})"
            ),
            Violation::SigmaDeterminant { det } => write!(f, "det sigma = {det}, expected 1"),
            Violation::FiniteOrder { trace } => {
                write!(f, "sigma has finite order (trace {trace})")
            }
            Violation::ReversesCone { trace } => {
                write!(f, "sigma has negative eigenvalues (trace {trace})")
            }
            Violation::RationalEigenrays { trace } => write!(
                f,
                "sigma eigenrays are rational (trace^2 - 4 = {} is a square)",
                trace * trace - 4
            ),
            Violation::DegenerateNef => write!(f, "nef generators are proportional"),
            Violation::CubicNotPositive { class, value } => {
                write!(f, "D^3 = {value} <= 0 for nef class {class}")
            }
            Violation::NegativeTripleProduct { indices, value } => write!(
                f,
                "triple product of nef generators {indices:?} is {value} < 0"
            ),
            Violation::C2Negative { class, value } => {
                write!(f, "c2.D = {value} < 0 for nef class {class}")
            }
            Violation::ChiNotIntegral { class, twelve_chi } => {
                write!(f, "chi({class}) = {twelve_chi}/12 is not an integer")
            }
        }
    }
}

fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &r * &r == *n
    }
}

/// Checks every model invariant; returns all violations found.
pub fn validate_model(model: &CYModel) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    if let Generators::Involutions { tau1, tau2 } = &model.generators {
        for (which, tau) in [(1u8, tau1), (2, tau2)] {
            if !(tau * tau).is_identity() {
                out.push(Violation::NotInvolution { which });
            }
            if tau.det() != -1 {
                out.push(Violation::InvolutionDeterminant {
                    which,
                    det: tau.det(),
                });
            }
            let g = &model.nef[which as usize - 1];
            let image = tau.apply(g);
            if image != *g {
                out.push(Violation::RayNotFixed { which, image });
            }
        }
    }

    let sigma = model.sigma();
    if sigma.det() != 1 {
        out.push(Violation::SigmaDeterminant { det: sigma.det() });
    }
    let trace = sigma.trace();
    if trace.abs() <= BigInt::from(2) {
        out.push(Violation::FiniteOrder {
            trace: trace.clone(),
        });
    } else {
        if trace.is_negative() {
            out.push(Violation::ReversesCone {
                trace: trace.clone(),
            });
        }
        if is_square(&(&trace * &trace - 4)) {
            out.push(Violation::RationalEigenrays { trace });
        }
    }

    let [g1, g2] = &model.nef;
    if g1.det(g2).is_zero() {
        out.push(Violation::DegenerateNef);
        return Err(out);
    }

    let tri = &model.triform;
    let gens = [g1, g2];
    let mut any_positive = false;
    for (i, j, k) in [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1)] {
        let v = tri.eval(gens[i], gens[j], gens[k]);
        if v.is_negative() {
            out.push(Violation::NegativeTripleProduct {
                indices: [i + 1, j + 1, k + 1],
                value: v,
            });
        } else if v.is_positive() {
            any_positive = true;
        }
    }
    if !any_positive {
        let class = g1.add(g2);
        let value = tri.cube(&class.p, &class.q);
        out.push(Violation::CubicNotPositive { class, value });
    }

    for g in gens {
        let value = model.c2form.degree(&g.p, &g.q);
        if value.is_negative() {
            out.push(Violation::C2Negative {
                class: g.clone(),
                value,
            });
        }
    }

    // 12*chi is a cubic polynomial on the lattice; integrality of chi on all
    // of it follows from integrality on a 4x4 box of nef classes.
    let twelve = BigInt::from(12);
    for s in 0..4i64 {
        for t in 0..4i64 {
            let class = g1.scale(&s.into()).add(&g2.scale(&t.into()));
            let twelve_chi = model.chi_times_12(&class);
            if !twelve_chi.is_multiple_of(&twelve) {
                out.push(Violation::ChiNotIntegral { class, twelve_chi });
            }
        }
    }

    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> CYModel {
        CYModel::with_involutions(
            "example",
            TriForm::from_array([2, 6, 8, 2]),
            C2Form::from_array([44, 56]),
            LatticeMap::from_i64([1, 6, 0, -1]).unwrap(),
            LatticeMap::from_i64([-1, 0, 8, 1]).unwrap(),
        )
    }

    #[test]
    fn example_is_valid() {
        assert_eq!(validate_model(&example()), Ok(()));
    }

    #[test]
    fn identity_tau_is_rejected() {
        let mut m = example();
        if let Generators::Involutions { tau1, .. } = &mut m.generators {
            *tau1 = LatticeMap::identity();
        }
        let v = validate_model(&m).unwrap_err();
        assert!(v.contains(&Violation::InvolutionDeterminant { which: 1, det: 1 }));
        assert!(v.iter().any(|x| matches!(x, Violation::FiniteOrder { .. })));
    }

    #[test]
    fn non_involution_is_rejected() {
        let mut m = example();
        if let Generators::Involutions { tau1, .. } = &mut m.generators {
            *tau1 = LatticeMap::from_i64([0, 1, -1, 0]).unwrap();
        }
        let v = validate_model(&m).unwrap_err();
        assert!(v.contains(&Violation::NotInvolution { which: 1 }));
    }

    #[test]
    fn broken_c2_breaks_integrality() {
        let mut m = example();
        m.c2form = C2Form::from_array([45, 56]);
        let v = validate_model(&m).unwrap_err();
        assert!(v.contains(&Violation::ChiNotIntegral {
            class: IntegralClass::h1(),
            twelve_chi: BigInt::from(49),
        }));
    }

    #[test]
    fn chi_of_h1() {
        assert_eq!(example().chi_times_12(&IntegralClass::h1()), BigInt::from(48));
    }
}
