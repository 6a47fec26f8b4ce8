use num_bigint::BigInt;

use super::cone::Cone2;
use super::eigen::SigmaData;
use super::lattice::{DivisorClass, IntegralClass, LatticeMap};
use super::model::{CYModel, Generators};
use super::word::{Gen, Word};
use super::ConeError;
use crate::exact_numbers::QuadNum;

/// Fundamental domain `Pi` together with the data used to reduce into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalDomain {
    pub pi: Cone2,
    /// Fundamental domain `[u, sigma u)` for `<sigma>` alone, with
    /// `ray1 = u` and `ray2 = sigma u`; contains `pi`.
    pub sigma_cell: Cone2,
    /// Involution mapping `sigma_cell \ pi` into `pi`; absent when the
    /// group has no involutions.
    pub fold: Option<Word>,
    u_l2: QuadNum,
}

impl FundamentalDomain {
    pub fn is_nef(&self, model: &CYModel, s: &SigmaData) -> bool {
        let nef = Cone2::new(model.nef[0].to_class(&s.d), model.nef[1].to_class(&s.d))
            .expect("nef generators validated");
        self.pi.same_as(&nef)
    }
}

fn primitive_ray(c: &IntegralClass, d: &BigInt) -> DivisorClass {
    c.primitive().to_class(d)
}

/// Builds `Pi` from an ample integral class `x`.
///
/// With involutions: `z1 = x + tau1 x`, `z2 = z1 + sigma z1`, and `Pi` is
/// `sigma^k cone(z1, z2)` or its `tau2`-image, whichever contains the nef
/// cone. With `sigma` alone: `cone(x0, sigma^(+-1) x0)` for a nef boundary
/// generator `x0`, oriented to contain the nef cone.
pub fn fundamental_domain(
    model: &CYModel,
    s: &SigmaData,
    x: &IntegralClass,
) -> Result<FundamentalDomain, ConeError> {
    if !model.is_ample(x) {
        return Err(ConeError::NotAmple(x.clone()));
    }
    let d = &s.d;
    let nef = [model.nef[0].to_class(d), model.nef[1].to_class(d)];
    let holds_nef = |c: &Cone2| nef.iter().all(|g| c.contains(g));

    match &model.generators {
        Generators::Involutions { tau1, tau2 } => {
            let z1 = x.add(&tau1.apply(x));
            let z2 = z1.add(&s.sigma.apply(&z1));
            let u0 = Cone2::new(primitive_ray(&z1, d), s.sigma.apply_real(&primitive_ray(&z1, d)))?;
            let j = shift_exponent(s, &s.l2(&u0.ray1)?, &x.to_class(d))?;
            let k = -j;
            let sk = s.sigma.pow(&BigInt::from(k));
            let shift = |c: &IntegralClass| primitive_ray(&sk.apply(c), d);
            let sigma_cell = Cone2::new(shift(&z1), shift(&s.sigma.apply(&z1)))?;
            let candidates = [
                Cone2::new(shift(&z1), shift(&z2))?,
                Cone2::new(shift(&tau2.apply(&z1)), shift(&tau2.apply(&z2)))?,
            ];
            let pi = candidates
                .into_iter()
                .find(|c| holds_nef(c))
                .ok_or(ConeError::DomainNotFound)?;
            let fold = Word::sigma_power(-k)
                .then(&Word(vec![Gen::Tau2]))
                .then(&Word::sigma_power(k));
            Ok(FundamentalDomain {
                u_l2: s.l2(&sigma_cell.ray1)?,
                pi,
                sigma_cell,
                fold: Some(fold),
            })
        }
        Generators::Sigma(_) => {
            for g in &model.nef {
                for (a, b) in [
                    (g.clone(), s.sigma.apply(g)),
                    (s.sigma_inv.apply(g), g.clone()),
                ] {
                    let cell = Cone2::new(primitive_ray(&a, d), primitive_ray(&b, d))?;
                    if holds_nef(&cell) {
                        return Ok(FundamentalDomain {
                            u_l2: s.l2(&cell.ray1)?,
                            pi: cell.clone(),
                            sigma_cell: cell,
                            fold: None,
                        });
                    }
                }
            }
            Err(ConeError::DomainNotFound)
        }
    }
}

/// The `j` with `lambda^(2j) t` in `[1, lambda^2)` for `t = L2(D) / L2(u)`,
/// so that `sigma^j D` lies in the half-open cell `[u, sigma u)`.
///
/// Found by doubling then bisection on exact powers of `lambda^2`.
fn shift_exponent(s: &SigmaData, u_l2: &QuadNum, d: &DivisorClass) -> Result<i64, ConeError> {
    let t = s.l2(d)?.try_div(u_l2).expect("same field");
    if !t.is_positive() {
        return Err(ConeError::OutsideMovable(d.floor()));
    }
    let mu = s.lambda.pow(2);
    let one = QuadNum::one(&s.d);
    let le = |e: u64, x: &QuadNum| mu.pow(e) <= *x;
    // largest e >= 0 with mu^e <= x, given x >= 1
    let floor_log = |x: &QuadNum| -> u64 {
        let mut hi = 1u64;
        while le(hi, x) {
            hi *= 2;
        }
        let mut lo = hi / 2;
        // invariant: mu^lo <= x < mu^hi
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if le(mid, x) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    let e: i64 = if t >= one {
        floor_log(&t) as i64
    } else {
        // smallest f >= 1 with mu^f >= 1/t, then e = -f
        let inv = t.inv().expect("t > 0");
        let f = floor_log(&inv);
        if mu.pow(f) == inv {
            -(f as i64)
        } else {
            -(f as i64) - 1
        }
    };
    Ok(-e)
}

/// Moves an integral big class into `Pi` by a word in the group.
///
/// Returns `(word, D')` with `D' = word(D)` integral and in `Pi`. Classes
/// already in `Pi` (boundary included) reduce with the empty word.
pub fn reduce_to_domain(
    model: &CYModel,
    s: &SigmaData,
    fd: &FundamentalDomain,
    d: &IntegralClass,
) -> Result<(Word, IntegralClass), ConeError> {
    let real = d.to_class(&s.d);
    if !s.is_big(&real) {
        return Err(ConeError::OutsideMovable(d.clone()));
    }
    if fd.pi.contains(&real) {
        return Ok((Word::empty(), d.clone()));
    }
    let j = shift_exponent(s, &fd.u_l2, &real)?;
    let mut word = Word::sigma_power(j);
    let mut cur = power_apply(s, j, d);
    debug_assert!(fd.sigma_cell.contains_half_open(&cur.to_class(&s.d)));
    if !fd.pi.contains(&cur.to_class(&s.d)) {
        let fold = fd.fold.as_ref().ok_or(ConeError::DomainNotFound)?;
        cur = fold.apply(model, s, &cur)?;
        word = word.then(fold);
        if !fd.pi.contains(&cur.to_class(&s.d)) {
            return Err(ConeError::DomainNotFound);
        }
    }
    Ok((word, cur))
}

fn power_apply(s: &SigmaData, j: i64, d: &IntegralClass) -> IntegralClass {
    let m: LatticeMap = s.sigma.pow(&BigInt::from(j));
    m.apply(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone_dynamics::{eigen_sigma, C2Form, TriForm};

    fn example() -> CYModel {
        CYModel::with_involutions(
            "example",
            TriForm::from_array([2, 6, 8, 2]),
            C2Form::from_array([44, 56]),
            LatticeMap::from_i64([1, 6, 0, -1]).unwrap(),
            LatticeMap::from_i64([-1, 0, 8, 1]).unwrap(),
        )
    }

    fn setup() -> (CYModel, SigmaData, FundamentalDomain) {
        let m = example();
        let s = eigen_sigma(&m).unwrap();
        let fd = fundamental_domain(&m, &s, &IntegralClass::new(1, 1)).unwrap();
        (m, s, fd)
    }

    #[test]
    fn example_domain_is_nef() {
        let (m, s, fd) = setup();
        assert!(fd.is_nef(&m, &s));
        assert_eq!(fd.sigma_cell.ray1, IntegralClass::h1().to_class(&s.d));
        assert_eq!(fd.sigma_cell.ray2, IntegralClass::new(-1, 8).to_class(&s.d));
    }

    #[test]
    fn reductions() {
        let (m, s, fd) = setup();
        let (w, r) = reduce_to_domain(&m, &s, &fd, &IntegralClass::h1()).unwrap();
        assert!(w.is_empty());
        assert_eq!(r, IntegralClass::h1());

        let d = s.sigma.pow(&BigInt::from(5)).apply(&IntegralClass::new(3, 2));
        let (w, r) = reduce_to_domain(&m, &s, &fd, &d).unwrap();
        assert_eq!(w, Word::sigma_power(-5));
        assert_eq!(r, IntegralClass::new(3, 2));

        let tau2 = m.tau2().unwrap();
        let (w, r) = reduce_to_domain(&m, &s, &fd, &tau2.apply(&IntegralClass::new(2, 1))).unwrap();
        assert_eq!(w, Word(vec![Gen::Tau2]));
        assert_eq!(r, IntegralClass::new(2, 1));

        let (w, r) = reduce_to_domain(&m, &s, &fd, &IntegralClass::new(-1, 8)).unwrap();
        assert_eq!(w, Word(vec![Gen::SigmaInv]));
        assert_eq!(r, IntegralClass::h1());
    }

    #[test]
    fn negative_shifts() {
        let (m, s, fd) = setup();
        let d = s.sigma.pow(&BigInt::from(-4)).apply(&IntegralClass::new(1, 3));
        let (w, r) = reduce_to_domain(&m, &s, &fd, &d).unwrap();
        assert_eq!(w.apply(&m, &s, &d).unwrap(), r);
        assert!(fd.pi.contains(&r.to_class(&s.d)));
    }

    #[test]
    fn rejects_non_big() {
        let (m, s, fd) = setup();
        assert!(matches!(
            reduce_to_domain(&m, &s, &fd, &IntegralClass::new(-1, 0)),
            Err(ConeError::OutsideMovable(_))
        ));
        assert!(matches!(
            fundamental_domain(&m, &s, &IntegralClass::h1()),
            Err(ConeError::NotAmple(_))
        ));
    }

    #[test]
    fn sigma_only_branch() {
        let sigma = LatticeMap::from_i64([0, -1, 1, 3]).unwrap();
        let m = CYModel {
            name: "synthetic".into(),
            triform: TriForm::from_array([2, 6, 6, 2]),
            c2form: C2Form::from_array([44, 44]),
            generators: Generators::Sigma(sigma),
            nef: [IntegralClass::h1(), IntegralClass::h2()],
        };
        let s = eigen_sigma(&m).unwrap();
        let fd = fundamental_domain(&m, &s, &IntegralClass::new(1, 1)).unwrap();
        assert!(fd.fold.is_none());
        assert!(fd.is_nef(&m, &s));
        let d = s.sigma.pow(&BigInt::from(-7)).apply(&IntegralClass::new(4, 1));
        let (w, r) = reduce_to_domain(&m, &s, &fd, &d).unwrap();
        assert_eq!(w, Word::sigma_power(7));
        assert_eq!(r, IntegralClass::new(4, 1));
    }
}
