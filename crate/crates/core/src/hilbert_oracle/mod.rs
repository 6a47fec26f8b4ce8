//! Bigraded Hilbert functions of explicit ideals, and the exact fit of the
//! Riemann-Roch cubic through them.
//!
//! `hilbert_dim` counts the monomials of a bidegree and subtracts the rank of
//! the matrix spanned by all monomial multiples of the generators landing in
//! that bidegree. The rank is taken over two independent primes above `2^30`
//! and must agree. `fit_chi` then inverts
//! `chi(a H1 + b H2) = (aH1 + bH2)^3 / 6 + c2.(aH1 + bH2) / 12`
//! over the rationals, demanding exact consistency on every sample.

mod poly;
mod rank;

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

pub use poly::{parse_poly, BiPoly, BiPolyRing, PolyError};
pub use rank::{rank_mod_p, PrimeStream, SparseRow};

use crate::cone_dynamics::{C2Form, TriForm};
use crate::exact_numbers::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealFileError {
    #[error("line {line}: expected header `ring x=<n> y=<m>`")]
    Header { line: usize },
    #[error("line {line}: {source}")]
    Poly { line: usize, source: PolyError },
    #[error("cannot combine ideals over different rings ({0:?} vs {1:?})")]
    RingMismatch(BiPolyRing, BiPolyRing),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("bidegree ({a},{b}) exceeds the configured bound {max}")]
    BoundExceeded { a: u32, b: u32, max: u32 },
    #[error("ranks disagree across primes after {attempts} attempts: {ranks:?}")]
    RankDisagreement { attempts: usize, ranks: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FitError {
    #[error("need at least 6 samples, got {0}")]
    TooFewSamples(usize),
    #[error("samples do not determine all six unknowns (rank {0})")]
    Underdetermined(usize),
    #[error("samples are inconsistent with a single cubic; the Hilbert function has not stabilized at bidegree {0:?}")]
    Inconsistent((u32, u32)),
    #[error("fitted value {name} = {value} is not an integer")]
    NonIntegral { name: &'static str, value: Rational },
}

#[derive(Debug, Error)]
pub enum DeriveError {
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Fit(#[from] FitError),
}

/// Generators of a bihomogeneous ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSpec {
    pub ring: BiPolyRing,
    pub generators: Vec<BiPoly>,
}

impl IdealSpec {
    pub fn zero(ring: BiPolyRing) -> Self {
        IdealSpec {
            ring,
            generators: Vec::new(),
        }
    }

    /// Parses the ideal-file format: a header line `ring x=<n> y=<m>`, then
    /// one generator per line. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, IdealFileError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(IdealFileError::Header { line: 1 })?;
        let ring = parse_header(header).ok_or(IdealFileError::Header { line: hline })?;
        let generators = lines
            .map(|(line, l)| parse_poly(l, ring).map_err(|source| IdealFileError::Poly { line, source }))
            .collect::<Result<_, _>>()?;
        Ok(IdealSpec { ring, generators })
    }

    pub fn render(&self) -> String {
        let mut out = format!("ring x={} y={}\n", self.ring.x_count, self.ring.y_count);
        for g in &self.generators {
            writeln!(out, "{g}").unwrap();
        }
        out
    }

    /// Sum of two ideals over the same ring.
    pub fn combine(mut self, other: IdealSpec) -> Result<Self, IdealFileError> {
        if self.ring != other.ring {
            return Err(IdealFileError::RingMismatch(self.ring, other.ring));
        }
        self.generators.extend(other.generators);
        Ok(self)
    }
}

fn parse_header(line: &str) -> Option<BiPolyRing> {
    let mut parts = line.split_whitespace();
    if parts.next()? != "ring" {
        return None;
    }
    let x = parts.next()?.strip_prefix("x=")?.parse().ok()?;
    let y = parts.next()?.strip_prefix("y=")?.parse().ok()?;
    if parts.next().is_some() || x == 0 || y == 0 {
        return None;
    }
    Some(BiPolyRing::new(x, y))
}

#[derive(Debug, Clone)]
pub struct HilbertConfig {
    /// Largest admissible `a` and `b`.
    pub max_degree: u32,
    pub prime_seed: u64,
    /// Prime pairs tried before giving up on a disagreement.
    pub attempts: usize,
}

impl Default for HilbertConfig {
    fn default() -> Self {
        HilbertConfig {
            max_degree: 6,
            prime_seed: 0x5eed_0001,
            attempts: 3,
        }
    }
}

/// Rows of the degree-`(a, b)` piece of the ideal, coefficients reduced mod `p`.
fn ideal_rows(ideal: &IdealSpec, a: u32, b: u32, index: &HashMap<Vec<u32>, u32>, p: u64) -> Vec<SparseRow> {
    let pb = BigInt::from(p);
    let mut rows = Vec::new();
    for g in &ideal.generators {
        let (ga, gb) = g.bidegree();
        if ga > a || gb > b {
            continue;
        }
        let terms: Vec<(&Vec<u32>, u64)> = g
            .terms()
            .map(|(e, c)| (e, c.mod_floor(&pb).to_u64().unwrap()))
            .collect();
        for shift in ideal.ring.monomials(a - ga, b - gb) {
            let mut row: SparseRow = terms
                .iter()
                .filter(|(_, c)| *c != 0)
                .map(|(e, c)| {
                    let m: Vec<u32> = e.iter().zip(&shift).map(|(x, y)| x + y).collect();
                    (index[&m], *c)
                })
                .collect();
            row.sort_unstable_by_key(|&(col, _)| col);
            rows.push(row);
        }
    }
    rows
}

/// Dimension of the degree-`(a, b)` piece of `ring / ideal`.
pub fn hilbert_dim(ideal: &IdealSpec, (a, b): (u32, u32), cfg: &HilbertConfig) -> Result<u64, HilbertError> {
    if a > cfg.max_degree || b > cfg.max_degree {
        return Err(HilbertError::BoundExceeded {
            a,
            b,
            max: cfg.max_degree,
        });
    }
    let monomials = ideal.ring.monomials(a, b);
    let index: HashMap<Vec<u32>, u32> = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i as u32))
        .collect();
    let mut primes = PrimeStream::new(cfg.prime_seed);
    let mut ranks = Vec::new();
    for _ in 0..cfg.attempts {
        let (p, q) = (primes.next().unwrap(), primes.next().unwrap());
        let rp = rank_mod_p(&ideal_rows(ideal, a, b, &index, p), p);
        let rq = rank_mod_p(&ideal_rows(ideal, a, b, &index, q), q);
        if rp == rq {
            return Ok((monomials.len() - rp) as u64);
        }
        ranks.extend([rp, rq]);
    }
    Err(HilbertError::RankDisagreement {
        attempts: cfg.attempts,
        ranks,
    })
}

/// Row of the fit system scaled by 12:
/// `[2a^3, 6a^2 b, 6ab^2, 2b^3, a, b] . unknowns = 12 chi`.
fn fit_row(a: u32, b: u32) -> [BigInt; 6] {
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    [
        2 * &a * &a * &a,
        6 * &a * &a * &b,
        6 * &a * &b * &b,
        2 * &b * &b * &b,
        a,
        b,
    ]
}

/// A value `h(a, b)` of the Hilbert function at bidegree `(a, b)`.
pub type Sample = ((u32, u32), u64);

/// Evaluates `D^3/6 + c2.D/12` at `D = a H1 + b H2`.
pub fn chi_polynomial(tri: &TriForm, c2: &C2Form, a: i64, b: i64) -> Rational {
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    Rational::new(tri.cube(&a, &b), BigInt::from(6)) + Rational::new(c2.degree(&a, &b), BigInt::from(12))
}

/// Solves for `(H1^3, H1^2H2, H1H2^2, H2^3, c2.H1, c2.H2)` from Hilbert
/// function samples, exactly.
pub fn fit_chi(samples: &[Sample]) -> Result<(TriForm, C2Form), FitError> {
    if samples.len() < 6 {
        return Err(FitError::TooFewSamples(samples.len()));
    }
    // augmented matrix over Q, reduced to row echelon form
    let mut m: Vec<Vec<Rational>> = samples
        .iter()
        .map(|&((a, b), h)| {
            let mut row: Vec<Rational> = fit_row(a, b).into_iter().map(Rational::from_integer).collect();
            row.push(Rational::from_integer(BigInt::from(h) * 12));
            row
        })
        .collect();
    let mut pivot_rows = Vec::new();
    let mut r = 0;
    for col in 0..6 {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][col].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivot_rows.push(col);
        r += 1;
    }
    if r < 6 {
        return Err(FitError::Underdetermined(r));
    }
    // echelon rows are permuted, so check consistency by substitution
    let sol: Vec<Rational> = (0..6).map(|i| m[i][6].clone()).collect();
    for &((a, b), h) in samples {
        let lhs: Rational = fit_row(a, b)
            .into_iter()
            .zip(&sol)
            .map(|(c, x)| Rational::from_integer(c) * x)
            .sum();
        if lhs != Rational::from_integer(BigInt::from(h) * 12) {
            return Err(FitError::Inconsistent((a, b)));
        }
    }
    const NAMES: [&str; 6] = ["H1^3", "H1^2H2", "H1H2^2", "H2^3", "c2.H1", "c2.H2"];
    let ints: Vec<BigInt> = sol
        .into_iter()
        .zip(NAMES)
        .map(|(v, name)| {
            if v.is_integer() {
                Ok(v.to_integer())
            } else {
                Err(FitError::NonIntegral { name, value: v })
            }
        })
        .collect::<Result<_, _>>()?;
    Ok((
        TriForm::new(ints[0].clone(), ints[1].clone(), ints[2].clone(), ints[3].clone()),
        C2Form::new(ints[4].clone(), ints[5].clone()),
    ))
}

/// Default sample bidegrees: the grid `1 <= a, b <= max`.
pub fn stabilized_grid(max: u32) -> Vec<(u32, u32)> {
    (1..=max).flat_map(|a| (1..=max).map(move |b| (a, b))).collect()
}

/// Hilbert function at each bidegree, computed in parallel.
pub fn sample_hilbert(
    ideal: &IdealSpec,
    bidegrees: &[(u32, u32)],
    cfg: &HilbertConfig,
) -> Result<Vec<Sample>, HilbertError> {
    bidegrees
        .par_iter()
        .map(|&bd| hilbert_dim(ideal, bd, cfg).map(|h| (bd, h)))
        .collect()
}

/// Samples the Hilbert function on `stabilized_grid(max)` and fits the cubic.
pub fn derive_intersection_data(
    ideal: &IdealSpec,
    max: u32,
    cfg: &HilbertConfig,
) -> Result<(TriForm, C2Form), DeriveError> {
    let samples = sample_hilbert(ideal, &stabilized_grid(max), cfg)?;
    Ok(fit_chi(&samples)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn zero_ideal_counts_monomials() {
        let ideal = IdealSpec::zero(BiPolyRing::new(4, 6));
        let cfg = HilbertConfig::default();
        assert_eq!(hilbert_dim(&ideal, (1, 0), &cfg).unwrap(), 4);
        for (a, b) in [(0, 0), (2, 3), (3, 1)] {
            assert_eq!(
                hilbert_dim(&ideal, (a, b), &cfg).unwrap(),
                binom(a as u64 + 3, 3) * binom(b as u64 + 5, 5)
            );
        }
    }

    #[test]
    fn bound_is_enforced() {
        let ideal = IdealSpec::zero(BiPolyRing::new(2, 2));
        let cfg = HilbertConfig::default();
        assert_eq!(
            hilbert_dim(&ideal, (7, 0), &cfg),
            Err(HilbertError::BoundExceeded { a: 7, b: 0, max: 6 })
        );
    }

    #[test]
    fn ideal_file_round_trip() {
        let text = "# comment\nring x=2 y=3\n\nx0*y1 - x1*y0\ny2\n";
        let ideal = IdealSpec::parse(text).unwrap();
        assert_eq!(ideal.generators.len(), 2);
        assert_eq!(IdealSpec::parse(&ideal.render()).unwrap(), ideal);
        assert_eq!(IdealSpec::parse("ring x=2\n"), Err(IdealFileError::Header { line: 1 }));
        assert!(matches!(
            IdealSpec::parse("ring x=2 y=2\nx0 + y0\n"),
            Err(IdealFileError::Poly { line: 2, .. })
        ));
    }

    #[test]
    fn fit_recovers_synthetic_cubic() {
        let tri = TriForm::new(2.into(), 6.into(), 6.into(), 2.into());
        let c2 = C2Form::new(44.into(), 44.into());
        let samples: Vec<_> = stabilized_grid(3)
            .into_iter()
            .map(|(a, b)| {
                let chi = chi_polynomial(&tri, &c2, a as i64, b as i64);
                assert!(chi.is_integer());
                ((a, b), chi.to_integer().to_u64().unwrap())
            })
            .collect();
        assert_eq!(fit_chi(&samples).unwrap(), (tri, c2));
    }

    #[test]
    fn fit_errors() {
        assert_eq!(fit_chi(&[((1, 1), 1)]), Err(FitError::TooFewSamples(1)));
        let diagonal: Vec<_> = (1..=6).map(|t| ((t, t), t as u64)).collect();
        assert!(matches!(fit_chi(&diagonal), Err(FitError::Underdetermined(_))));
        let mut samples: Vec<_> = stabilized_grid(3).into_iter().map(|bd| (bd, 1)).collect();
        samples[8].1 = 2;
        assert!(matches!(fit_chi(&samples), Err(FitError::Inconsistent(_))));
    }
}
