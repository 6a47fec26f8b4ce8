//! Growth of `h^0(floor(m R) + A)` along a ray `R`, and the exponent fit.

use std::cmp::Ordering;
use std::io;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use crate::cone_dynamics::{DivisorClass, Geometry, IntegralClass};
use crate::exact_numbers::QuadNum;
use crate::riemann_roch::{h0_movable, RrError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KappaError {
    #[error("class {0} is not ample")]
    NotAmple(IntegralClass),
    #[error("ample class {0} needs both coordinates >= 2")]
    AmpleTooSmall(IntegralClass),
    #[error("m values must be positive and strictly increasing (at {0})")]
    BadGrid(BigInt),
    #[error("need at least 8 usable records, got {0}")]
    TooFewRecords(usize),
    #[error("records span a factor {0:.1} in m; need at least 1000")]
    InsufficientSpan(f64),
    #[error("degenerate fit: no variation in m or in h0")]
    Degenerate,
    #[error("h0 vanishes at m = {0}")]
    ZeroSections(BigInt),
    #[error("L1(D + A) is not positive for D = {0}")]
    NotMovable(String),
    #[error(transparent)]
    Rr(#[from] RrError),
}

/// Direction of a sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SweepRay {
    R1,
    R2,
    Class(IntegralClass),
}

impl SweepRay {
    fn class(&self, geom: &Geometry) -> DivisorClass {
        match self {
            SweepRay::R1 => geom.sigma.r1.clone(),
            SweepRay::R2 => geom.sigma.r2.clone(),
            SweepRay::Class(c) => geom.class(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRecord {
    pub m: BigInt,
    /// `floor(m R) + A`.
    pub floored: IntegralClass,
    /// `None` when `floored` is not big.
    pub h0: Option<BigInt>,
    /// `L1(m R + A)` of the unrounded class.
    pub l1: QuadNum,
    pub word_length: Option<usize>,
}

impl SweepRecord {
    pub fn skipped(&self) -> bool {
        self.h0.is_none()
    }
}

/// Least-squares fit of `log h0` against `log m`.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square residual in log space.
    pub residual: f64,
    /// Extremes of `h0 / m^(3/2)`.
    pub band_min: f64,
    pub band_max: f64,
    /// Largest slope change when one record is dropped.
    pub leave_one_out: f64,
    pub points: usize,
}

/// `floor(m R) + A`, flooring each coordinate in the basis `(H1, H2)`.
pub fn floor_class(m: &BigInt, r: &DivisorClass, a: &IntegralClass) -> IntegralClass {
    let mq = r.p.with_integer(m.clone());
    r.scale(&mq).floor().add(a)
}

/// `m = 2^k` for `k = 8..=20`.
pub fn default_grid() -> Vec<BigInt> {
    (8..=20).map(|k| BigInt::one() << k).collect()
}

/// `2^k` for `lo <= k <= hi`.
pub fn power_of_two_grid(lo: u32, hi: u32) -> Vec<BigInt> {
    (lo..=hi).map(|k| BigInt::one() << k).collect()
}

fn check_ample(geom: &Geometry, a: &IntegralClass) -> Result<(), KappaError> {
    if !geom.model.is_ample(a) {
        return Err(KappaError::NotAmple(a.clone()));
    }
    if a.p < BigInt::from(2) || a.q < BigInt::from(2) {
        return Err(KappaError::AmpleTooSmall(a.clone()));
    }
    Ok(())
}

/// One record per `m`, computed in parallel and returned in input order.
pub fn sweep(
    geom: &Geometry,
    a: &IntegralClass,
    ms: &[BigInt],
    ray: &SweepRay,
) -> Result<Vec<SweepRecord>, KappaError> {
    check_ample(geom, a)?;
    for (i, m) in ms.iter().enumerate() {
        if !m.is_positive() || (i > 0 && m <= &ms[i - 1]) {
            return Err(KappaError::BadGrid(m.clone()));
        }
    }
    let r = ray.class(geom);
    let a_real = geom.class(a);
    ms.par_iter()
        .map(|m| {
            let floored = floor_class(m, &r, a);
            let real = r.scale(&r.p.with_integer(m.clone())).add(&a_real);
            let l1 = geom.sigma.l1(&real);
            let (h0, word_length) = if geom.sigma.is_big(&geom.class(&floored)) {
                let (h0, word) = h0_movable(geom, &floored)?;
                (Some(h0), Some(word.len()))
            } else {
                (None, None)
            };
            Ok(SweepRecord {
                m: m.clone(),
                floored,
                h0,
                l1,
                word_length,
            })
        })
        .collect()
}

fn least_squares(points: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Some((slope, intercept, (rss / n).sqrt()))
}

/// Natural log of a positive big integer, safe beyond the `f64` range.
fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        x.to_f64().expect("finite").ln()
    } else {
        let shift = bits - 64;
        (x >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Fits the growth exponent over non-skipped records.
pub fn estimate_exponent(records: &[SweepRecord]) -> Result<FitReport, KappaError> {
    let used: Vec<&SweepRecord> = records.iter().filter(|r| !r.skipped()).collect();
    if used.len() < 8 {
        return Err(KappaError::TooFewRecords(used.len()));
    }
    let mut points = Vec::with_capacity(used.len());
    for r in &used {
        let h0 = r.h0.as_ref().expect("filtered");
        if !h0.is_positive() {
            return Err(KappaError::ZeroSections(r.m.clone()));
        }
        points.push((ln_big(&r.m), ln_big(h0)));
    }
    let same = |f: fn(&(f64, f64)) -> f64| points.iter().all(|p| f(p) == f(&points[0]));
    if same(|p| p.0) || same(|p| p.1) {
        return Err(KappaError::Degenerate);
    }
    let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (lo.min(p.0), hi.max(p.0))
    });
    let span = (hi - lo).exp();
    if span < 1000.0 {
        return Err(KappaError::InsufficientSpan(span));
    }
    let (slope, intercept, residual) = least_squares(&points).ok_or(KappaError::Degenerate)?;
    let leave_one_out = (0..points.len())
        .filter_map(|i| {
            let rest: Vec<_> = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| *p)
                .collect();
            least_squares(&rest).map(|(s, _, _)| (s - slope).abs())
        })
        .fold(0.0, f64::max);
    let band: Vec<f64> = points.iter().map(|p| (p.1 - 1.5 * p.0).exp()).collect();
    Ok(FitReport {
        slope,
        intercept,
        residual,
        band_min: band.iter().copied().fold(f64::INFINITY, f64::min),
        band_max: band.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        leave_one_out,
        points: points.len(),
    })
}

/// Extremes of `h0 / L1^(3/2)` over non-skipped records.
pub fn l1_band(records: &[SweepRecord]) -> Option<(f64, f64)> {
    let vals: Vec<f64> = records
        .iter()
        .filter_map(|r| {
            let h0 = r.h0.as_ref()?;
            Some((ln_big(h0) - 1.5 * r.l1.to_f64().ln()).exp())
        })
        .collect();
    if vals.is_empty() {
        return None;
    }
    Some((
        vals.iter().copied().fold(f64::INFINITY, f64::min),
        vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundDownReport {
    /// Smallest and largest exact ratio `L1(floor(D) + A) / L1(D + A)`.
    pub min: QuadNum,
    pub max: QuadNum,
    pub all_positive: bool,
    pub band_ratio: f64,
    pub bounded: bool,
    pub samples: usize,
}

/// Compares `L1(floor(D) + A)` with `L1(D + A)` exactly over the samples.
pub fn rounddown_check(
    geom: &Geometry,
    samples: &[(DivisorClass, IntegralClass)],
) -> Result<RoundDownReport, KappaError> {
    let mut ratios = Vec::with_capacity(samples.len());
    for (d, a) in samples {
        check_ample(geom, a)?;
        let a_real = geom.class(a);
        let exact = geom.sigma.l1(&d.add(&a_real));
        if !exact.is_positive() {
            return Err(KappaError::NotMovable(d.to_string()));
        }
        let rounded = geom.sigma.l1(&geom.class(&d.floor().add(a)));
        ratios.push(rounded.try_div(&exact).expect("same field"));
    }
    let cmp = |x: &&QuadNum, y: &&QuadNum| x.partial_cmp(y).unwrap_or(Ordering::Equal);
    let min = ratios.iter().min_by(cmp).cloned().unwrap_or_else(|| geom.sigma.zero());
    let max = ratios.iter().max_by(cmp).cloned().unwrap_or_else(|| geom.sigma.zero());
    let all_positive = ratios.iter().all(QuadNum::is_positive);
    let band_ratio = if all_positive && !ratios.is_empty() {
        max.try_div(&min).expect("same field").to_f64()
    } else {
        f64::INFINITY
    };
    Ok(RoundDownReport {
        bounded: band_ratio <= 1000.0,
        min,
        max,
        all_positive,
        band_ratio,
        samples: ratios.len(),
    })
}

/// Writes `m,p,q,h0,l1_approx,word_len,skipped` rows.
pub fn write_csv<W: io::Write>(records: &[SweepRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["m", "p", "q", "h0", "l1_approx", "word_len", "skipped"])?;
    for r in records {
        w.write_record([
            r.m.to_string(),
            r.floored.p.to_string(),
            r.floored.q.to_string(),
            r.h0.as_ref().map(|h| h.to_string()).unwrap_or_default(),
            r.l1.to_decimal(30),
            r.word_length.map(|l| l.to_string()).unwrap_or_default(),
            r.skipped().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone_dynamics::{C2Form, CYModel, LatticeMap, TriForm};

    fn geometry() -> Geometry {
        Geometry::new(CYModel::with_involutions(
            "example",
            TriForm::from_array([2, 6, 8, 2]),
            C2Form::from_array([44, 56]),
            LatticeMap::from_i64([1, 6, 0, -1]).unwrap(),
            LatticeMap::from_i64([-1, 0, 8, 1]).unwrap(),
        ))
        .unwrap()
    }

    #[test]
    fn floor_of_ten_r1() {
        let g = geometry();
        let f = floor_class(&BigInt::from(10), &g.sigma.r1, &IntegralClass::new(5, 5));
        assert_eq!(f, IntegralClass::new(3, 15));
        let one = floor_class(&BigInt::one(), &g.class(&IntegralClass::new(2, 7)), &IntegralClass::new(0, 0));
        assert_eq!(one, IntegralClass::new(2, 7));
    }

    #[test]
    fn sweep_validates_inputs() {
        let g = geometry();
        let ms = default_grid();
        assert_eq!(
            sweep(&g, &IntegralClass::new(0, 1), &ms, &SweepRay::R1),
            Err(KappaError::NotAmple(IntegralClass::new(0, 1)))
        );
        assert_eq!(
            sweep(&g, &IntegralClass::new(1, 5), &ms, &SweepRay::R1),
            Err(KappaError::AmpleTooSmall(IntegralClass::new(1, 5)))
        );
        let dup = [BigInt::from(4), BigInt::from(4)];
        assert!(matches!(
            sweep(&g, &IntegralClass::new(5, 5), &dup, &SweepRay::R1),
            Err(KappaError::BadGrid(_))
        ));
    }

    #[test]
    fn control_sweep_is_cubic() {
        let g = geometry();
        let recs = sweep(&g, &IntegralClass::new(5, 5), &default_grid(), &SweepRay::Class(IntegralClass::h1())).unwrap();
        let fit = estimate_exponent(&recs).unwrap();
        assert!((fit.slope - 3.0).abs() < 0.05, "{}", fit.slope);
    }

    #[test]
    fn degenerate_records() {
        let g = geometry();
        let rec = sweep(&g, &IntegralClass::new(5, 5), &[BigInt::from(256)], &SweepRay::R1).unwrap();
        let same = vec![rec[0].clone(); 10];
        assert_eq!(estimate_exponent(&same), Err(KappaError::Degenerate));
        assert_eq!(estimate_exponent(&same[..3]), Err(KappaError::TooFewRecords(3)));
    }

    #[test]
    fn csv_layout() {
        let g = geometry();
        let recs = sweep(&g, &IntegralClass::new(5, 5), &[BigInt::from(10)], &SweepRay::R1).unwrap();
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("m,p,q,h0,l1_approx,word_len,skipped"));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(&row[..3], ["10", "3", "15"]);
        assert_eq!(row[6], "false");
    }

    #[test]
    fn rounddown_of_integral_class_is_exact() {
        let g = geometry();
        let d = g.class(&IntegralClass::new(3, 4));
        let rep = rounddown_check(&g, &[(d, IntegralClass::new(5, 5))]).unwrap();
        assert_eq!(rep.min, QuadNum::one(g.d()));
        assert_eq!(rep.max, QuadNum::one(g.d()));
        assert!(rep.bounded);
    }
}
