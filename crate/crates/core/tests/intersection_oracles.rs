mod common;

use movcone_core::chow::{
    ambient_tangent_chern, ci_chern, integrate, intersection_data, total_chern, CIData,
    MultiProjAmbient, TruncPoly,
};
use movcone_core::cone_dynamics::{C2Form, TriForm};
use movcone_core::hilbert_oracle::{
    chi_polynomial, fit_chi, hilbert_dim, parse_poly, stabilized_grid, BiPolyRing, HilbertConfig,
    IdealSpec,
};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn hypersurface_p4(d: i64) -> CIData {
    CIData::new(MultiProjAmbient::new(vec![4]).unwrap(), vec![vec![d]]).unwrap()
}

#[test]
fn projective_space_chern_classes_are_binomials() {
    for n in 1..=6usize {
        let amb = MultiProjAmbient::new(vec![n]).unwrap();
        let c = ambient_tangent_chern(&amb);
        for k in 0..=n {
            assert_eq!(c.coeff(&[k]), BigInt::from(binom(n as i64 + 1, k as i64)), "P^{n}, c_{k}");
        }
    }
}

#[test]
fn quintic_numbers() {
    let q = hypersurface_p4(5);
    let (c1, c2) = ci_chern(&q);
    assert!(c1.is_zero());
    let amb = q.ambient.clone();
    let h = TruncPoly::monomial(&amb, &[1], BigInt::from(1));
    assert_eq!(integrate(&q, &h.pow(3)).unwrap(), BigInt::from(5));
    assert_eq!(integrate(&q, &(&c2 * &h)).unwrap(), BigInt::from(50));
    // topological Euler characteristic of the quintic
    assert_eq!(integrate(&q, &total_chern(&q).graded(3)).unwrap(), BigInt::from(-200));
}

#[test]
fn oguiso_intersection_data() {
    let ci = common::model_file("oguiso").ci.unwrap();
    assert!(ci.is_calabi_yau());
    let (tri, c2) = intersection_data(&ci).unwrap();
    assert_eq!(tri, TriForm::from_array([2, 6, 6, 2]));
    assert_eq!(c2, C2Form::from_array([44, 44]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// For `X_d` in `P^4`: `c(X) = (1+h)^5 / (1+dh)`, so
    /// `c2.H = d (10 - 5d + d^2)` and `H^3 = d`.
    #[test]
    fn hypersurfaces_in_p4(d in 1i64..=12) {
        let x = hypersurface_p4(d);
        let amb = x.ambient.clone();
        let h = TruncPoly::monomial(&amb, &[1], BigInt::from(1));
        let (c1, c2) = ci_chern(&x);
        prop_assert_eq!(c1.coeff(&[1]), BigInt::from(5 - d));
        prop_assert_eq!(integrate(&x, &h.pow(3)).unwrap(), BigInt::from(d));
        prop_assert_eq!(integrate(&x, &(&c2 * &h)).unwrap(), BigInt::from(d * (10 - 5 * d + d * d)));
    }

    /// A nonzero form is a nonzerodivisor, so the quotient has
    /// `h(a, b) = N(a, b) - N(a - d1, b - d2)`.
    #[test]
    fn single_form_hilbert_function(
        coeffs in prop::collection::vec(-5i64..=5, 18),
        (a, b) in (0u32..=3, 0u32..=3),
    ) {
        let ring = BiPolyRing::new(3, 3);
        let monos = ring.monomials(1, 1);
        let terms: Vec<String> = monos
            .iter()
            .zip(&coeffs)
            .filter(|(_, &c)| c != 0)
            .map(|(m, c)| {
                let x = m[..3].iter().position(|&e| e == 1).unwrap();
                let y = m[3..].iter().position(|&e| e == 1).unwrap();
                format!("{c}*x{x}*y{y}")
            })
            .collect();
        prop_assume!(!terms.is_empty());
        let f = parse_poly(&terms.join(" + ").replace("+ -", "- "), ring).unwrap();
        let ideal = IdealSpec { ring, generators: vec![f] };
        let n = |a: i64, b: i64| binom(a + 2, 2) * binom(b + 2, 2);
        let expected = n(a as i64, b as i64) - n(a as i64 - 1, b as i64 - 1);
        prop_assert_eq!(hilbert_dim(&ideal, (a, b), &HilbertConfig::default()).unwrap() as i64, expected);
    }

    /// Fitting exact Euler characteristics returns the generating data.
    #[test]
    fn fit_reproduces_samples(t in prop::array::uniform4(0i64..=20), c in prop::array::uniform2(0i64..=20)) {
        prop_assume!(t.iter().any(|&x| x != 0));
        let tri = TriForm::from_array(t.map(|x| 6 * x));
        let c2 = C2Form::from_array(c.map(|x| 12 * x));
        let samples: Vec<_> = stabilized_grid(3)
            .into_iter()
            .map(|(a, b)| {
                let chi = chi_polynomial(&tri, &c2, a as i64, b as i64);
                ((a, b), chi.to_integer().to_u64().unwrap())
            })
            .collect();
        prop_assert_eq!(fit_chi(&samples).unwrap(), (tri, c2));
    }
}

#[test]
fn example41_hilbert_values() {
    let ideal = common::ideal("example41");
    let cfg = HilbertConfig::default();
    for (bd, h) in [((1, 0), 4), ((0, 1), 5), ((1, 1), 16)] {
        assert_eq!(hilbert_dim(&ideal, bd, &cfg).unwrap(), h, "{bd:?}");
    }
}

#[test]
fn oguiso_hilbert_fit_matches_chow() {
    let ideal = common::ideal("oguiso");
    let samples: Vec<_> = stabilized_grid(3)
        .into_iter()
        .map(|bd| (bd, hilbert_dim(&ideal, bd, &HilbertConfig::default()).unwrap()))
        .collect();
    let ci = common::model_file("oguiso").ci.unwrap();
    assert_eq!(fit_chi(&samples).unwrap(), intersection_data(&ci).unwrap());
}
