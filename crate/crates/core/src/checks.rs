//! Self-checks of a model: structural invariants plus randomized exact
//! property checks, each reported as a named pass/fail outcome.

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone_dynamics::{
    eigen_coords, validate_model, CYModel, Gen, Geometry, GeometryError, IntegralClass, Violation,
    Word,
};
use crate::exact_numbers::{QuadNum, Rational};
use crate::riemann_roch::{chi_nef, h0_movable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy)]
pub struct CheckConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            samples: 1000,
            seed: 20_240_601,
        }
    }
}

const STRUCTURAL: [&str; 8] = [
    "involution",
    "determinant",
    "fixed-rays",
    "infinite-order",
    "irrational-eigenrays",
    "nef-cubic",
    "c2-nonnegative",
    "chi-integrality",
];

fn check_name(v: &Violation) -> &'static str {
    match v {
        Violation::NotInvolution { .. } => "involution",
        Violation::InvolutionDeterminant { .. } | Violation::SigmaDeterminant { .. } => {
            "determinant"
        }
        Violation::RayNotFixed { .. } => "fixed-rays",
        Violation::FiniteOrder { .. } | Violation::ReversesCone { .. } => "infinite-order",
        Violation::RationalEigenrays { .. } => "irrational-eigenrays",
        Violation::DegenerateNef
        | Violation::CubicNotPositive { .. }
        | Violation::NegativeTripleProduct { .. } => "nef-cubic",
        Violation::C2Negative { .. } => "c2-nonnegative",
        Violation::ChiNotIntegral { .. } => "chi-integrality",
    }
}

fn outcome(name: &'static str, failures: Vec<String>, ok_detail: String) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            ok_detail
        } else {
            let n = failures.len();
            let mut shown: Vec<String> = failures.into_iter().take(3).collect();
            if n > 3 {
                shown.push(format!("... {} more", n - 3));
            }
            shown.join("; ")
        },
    }
}

/// Runs the structural checks, then (if they pass) the randomized ones.
pub fn run_checks(model: &CYModel, cfg: &CheckConfig) -> Vec<CheckOutcome> {
    let violations = validate_model(model).err().unwrap_or_default();
    let mut out: Vec<CheckOutcome> = STRUCTURAL
        .iter()
        .map(|&name| {
            let failures = violations
                .iter()
                .filter(|v| check_name(v) == name)
                .map(|v| v.to_string())
                .collect();
            outcome(name, failures, "ok".into())
        })
        .collect();
    if !violations.is_empty() {
        return out;
    }
    let geom = match Geometry::new(model.clone()) {
        Ok(g) => g,
        Err(GeometryError::Invalid(_)) => unreachable!("validated above"),
        Err(GeometryError::Cone(e)) => {
            out.push(outcome("domain", vec![e.to_string()], String::new()));
            return out;
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    out.push(check_eigen(&geom));
    out.push(check_l_coordinates(&geom, cfg.samples, &mut rng));
    out.push(check_sandwich(&geom, cfg.samples, &mut rng));
    out.push(check_h0_invariance(&geom, cfg.samples, &mut rng));
    out.push(check_floor(&geom, cfg.samples, &mut rng));
    out.push(check_cone_membership(&geom, cfg.samples, &mut rng));
    out.push(check_chi_lattice(&geom, cfg.samples, &mut rng));
    out.push(check_h0_lower_band(&geom, cfg.samples, &mut rng));
    out
}

fn random_class(rng: &mut ChaCha8Rng, r: i64) -> IntegralClass {
    loop {
        let c = IntegralClass::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r));
        if !c.is_zero() {
            return c;
        }
    }
}

fn random_nef(geom: &Geometry, rng: &mut ChaCha8Rng, r: i64, interior: bool) -> IntegralClass {
    let lo = if interior { 1 } else { 0 };
    loop {
        let s = BigInt::from(rng.gen_range(lo..=r));
        let t = BigInt::from(rng.gen_range(lo..=r));
        let c = geom.model.nef[0].scale(&s).add(&geom.model.nef[1].scale(&t));
        if !c.is_zero() {
            return c;
        }
    }
}

fn random_word(geom: &Geometry, rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let gens: &[Gen] = if geom.model.tau1().is_some() {
        &[Gen::Sigma, Gen::SigmaInv, Gen::Tau1, Gen::Tau2]
    } else {
        &[Gen::Sigma, Gen::SigmaInv]
    };
    let len = rng.gen_range(0..=max_len);
    Word((0..len).map(|_| gens[rng.gen_range(0..gens.len())]).collect())
}

fn check_eigen(geom: &Geometry) -> CheckOutcome {
    let s = &geom.sigma;
    let mut failures = Vec::new();
    if s.sigma.apply_real(&s.r1) != s.r1.scale(&s.lambda) {
        failures.push("sigma R1 != lambda R1".to_string());
    }
    if s.sigma.apply_real(&s.r2) != s.r2.scale(&s.lambda_inv) {
        failures.push("sigma R2 != lambda^-1 R2".to_string());
    }
    if &s.lambda * &s.lambda_inv != QuadNum::one(&s.d) {
        failures.push("lambda * lambda^-1 != 1".to_string());
    }
    if s.lambda <= QuadNum::one(&s.d) {
        failures.push("lambda <= 1".to_string());
    }
    outcome("eigenrays", failures, format!("lambda = {}", s.lambda))
}

fn check_l_coordinates(geom: &Geometry, n: usize, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let s = &geom.sigma;
    let lambda2 = s.lambda.pow(2);
    let mut failures = Vec::new();
    for _ in 0..n {
        let c = random_class(rng, 1000);
        let d = geom.class(&c);
        let sd = s.sigma.apply_real(&d);
        if s.l1(&sd) != s.l1(&d) {
            failures.push(format!("L1 not invariant at {c}"));
        }
        match (s.l2(&sd), s.l2(&d)) {
            (Ok(a), Ok(b)) if a == &b * &lambda2 => {}
            _ => failures.push(format!("L2 scaling fails at {c}")),
        }
        // a1^2 = L1 L2 and a2^2 = L1 / L2
        let (a1, a2) = eigen_coords(&d, s);
        let (l1, l2) = (s.l1(&d), s.l2(&d).expect("integral classes avoid eigenrays"));
        if a1.pow(2) != &l1 * &l2 || a2.pow(2) != l1.try_div(&l2).expect("same field") {
            failures.push(format!("eigencoordinates inconsistent at {c}"));
        }
    }
    outcome("l-coordinates", failures, format!("{n} classes"))
}

fn check_sandwich(geom: &Geometry, n: usize, rng: &mut ChaCha8Rng) -> CheckOutcome {
    // the involution folding onto Pi; tau2 itself when Pi is unshifted
    let Some(fold) = &geom.domain.fold else {
        return outcome("sandwich", vec![], "skipped: no involutions".into());
    };
    let rho = fold.matrix(&geom.model, &geom.sigma).expect("involutions exist");
    let s = &geom.sigma;
    let pi = &geom.domain.pi;
    let mut failures = Vec::new();
    for _ in 0..n {
        let r = |rng: &mut ChaCha8Rng| {
            Rational::new(rng.gen_range(1..=1000).into(), rng.gen_range(1..=1000).into())
        };
        let (d1, d2) = (r(rng), r(rng));
        let d = pi.ray1.scale_rational(&d1).add(&pi.ray2.scale_rational(&d2));
        let l = s.l1(&d);
        let lt = s.l1(&rho.apply_real(&d));
        if !(&s.lambda_inv * &l < lt && lt < &s.lambda * &l) {
            failures.push(format!("fails at d1 = {d1}, d2 = {d2}"));
        }
    }
    outcome("sandwich", failures, format!("{n} classes in Pi"))
}

fn check_h0_invariance(geom: &Geometry, n: usize, rng: &mut ChaCha8Rng) -> CheckOutcome {
    if !geom.domain.is_nef(&geom.model, &geom.sigma) {
        return outcome("h0-invariance", vec![], "skipped: Pi is not the nef cone".into());
    }
    let mut failures = Vec::new();
    for _ in 0..n {
        let base = random_nef(geom, rng, 30, true);
        let d = match geom.apply(&random_word(geom, rng, 6), &base) {
            Ok(d) => d,
            Err(e) => {
                failures.push(e.to_string());
                continue;
            }
        };
        let g = random_word(geom, rng, 6);
        let gd = geom.apply(&g, &d).expect("generators exist");
        match (h0_movable(geom, &d), h0_movable(geom, &gd)) {
            (Ok((a, _)), Ok((b, _))) if a == b => {}
            (Ok((a, _)), Ok((b, _))) => failures.push(format!("h0({d}) = {a} but h0({gd}) = {b}")),
            (Err(e), _) | (_, Err(e)) => failures.push(format!("{d}: {e}")),
        }
    }
    outcome("h0-invariance", failures, format!("{n} words"))
}

fn check_floor(geom: &Geometry, n: usize, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let d = &geom.sigma.d;
    let mut failures = Vec::new();
    for _ in 0..n {
        let q = |rng: &mut ChaCha8Rng| {
            Rational::new(rng.gen_range(-100_000..=100_000).into(), rng.gen_range(1..=1000).into())
        };
        let x = QuadNum::new(q(rng), q(rng), d.clone()).expect("valid radicand");
        let f = x.floor();
        let lo = x.with_integer(f.clone());
        let hi = x.with_integer(&f + 1);
        if !(lo <= x && x < hi) {
            failures.push(format!("floor({x}) = {f}"));
        }
    }
    outcome("floor-bracketing", failures, format!("{n} numbers"))
}

fn check_cone_membership(geom: &Geometry, n: usize, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mov = geom.movable_cone();
    let nef = geom.nef_cone();
    let mut failures = Vec::new();
    for _ in 0..n {
        let c = random_class(rng, 1000);
        let d = geom.class(&c);
        let (a1, a2) = eigen_coords(&d, &geom.sigma);
        let by_coords = !a1.is_negative() && !a2.is_negative();
        if mov.contains(&d) != by_coords {
            failures.push(format!("movable membership disagrees at {c}"));
        }
        if nef.contains(&d) != geom.model.is_nef(&c) {
            failures.push(format!("nef membership disagrees at {c}"));
        }
        if nef.contains(&d) && !mov.contains(&d) {
            failures.push(format!("nef class {c} outside the movable cone"));
        }
    }
    outcome("cone-membership", failures, format!("{n} classes"))
}

fn check_chi_lattice(geom: &Geometry, n: usize, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut failures = Vec::new();
    for _ in 0..n {
        let c = random_nef(geom, rng, 500, false);
        if let Err(e) = chi_nef(&geom.model, &c) {
            failures.push(e.to_string());
        }
    }
    outcome("chi-lattice", failures, format!("{n} nef classes"))
}

fn check_h0_lower_band(geom: &Geometry, n: usize, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut failures = Vec::new();
    let mut worst: Option<Rational> = None;
    for _ in 0..n {
        let c = random_nef(geom, rng, 500, true);
        let Ok(chi) = chi_nef(&geom.model, &c) else {
            failures.push(format!("chi({c}) undefined"));
            continue;
        };
        let cube = geom.model.triform.cube(&c.p, &c.q);
        if !cube.is_positive() || BigInt::from(7) * &chi <= cube {
            failures.push(format!("h0({c}) = {chi}, D^3 = {cube}"));
        } else {
            let r = Rational::new(chi, cube);
            if worst.as_ref().is_none_or(|w| &r < w) {
                worst = Some(r);
            }
        }
    }
    let detail = match worst {
        Some(w) => format!("min h0/D^3 = {:.6}", ratio_f64(&w)),
        None => String::new(),
    };
    outcome("h0-lower-band", failures, detail)
}

fn ratio_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Convenience for callers that want only the verdict.
pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|o| o.passed)
}
