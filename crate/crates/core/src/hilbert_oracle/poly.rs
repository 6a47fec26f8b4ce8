//! Bihomogeneous polynomials over `Z` in variables `x_i` (bidegree (1,0))
//! and `y_j` (bidegree (0,1)), plus the plain-text grammar used by ideal
//! files.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("polynomial is not bihomogeneous: bidegrees {first:?} and {second:?}")]
    MixedBidegree {
        first: (u32, u32),
        second: (u32, u32),
    },
    #[error("polynomial is zero")]
    Zero,
}

/// `Q[x_0..x_{n-1}, y_0..y_{m-1}]` with the standard bigrading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BiPolyRing {
    pub x_count: usize,
    pub y_count: usize,
}

impl BiPolyRing {
    pub fn new(x_count: usize, y_count: usize) -> Self {
        assert!(x_count >= 1 && y_count >= 1, "both variable groups must be nonempty");
        BiPolyRing { x_count, y_count }
    }

    pub fn var_count(&self) -> usize {
        self.x_count + self.y_count
    }

    /// All exponent vectors of bidegree `(a, b)`, x-part first.
    pub fn monomials(&self, a: u32, b: u32) -> Vec<Vec<u32>> {
        let xs = compositions(a, self.x_count);
        let ys = compositions(b, self.y_count);
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for x in &xs {
            for y in &ys {
                let mut m = x.clone();
                m.extend_from_slice(y);
                out.push(m);
            }
        }
        out
    }
}

/// Exponent vectors of length `parts` summing to `total`, in lex order.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Nonzero bihomogeneous polynomial with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPoly {
    ring: BiPolyRing,
    bidegree: (u32, u32),
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl BiPoly {
    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated monomials and dropping zero coefficients.
    pub fn from_terms(
        ring: BiPolyRing,
        terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>,
    ) -> Result<Self, PolyError> {
        let mut merged: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (exps, c) in terms {
            assert_eq!(exps.len(), ring.var_count(), "exponent vector length");
            *merged.entry(exps).or_default() += c;
        }
        merged.retain(|_, c| !c.is_zero());
        let mut bidegree = None;
        for exps in merged.keys() {
            let bd = bidegree_of(&ring, exps);
            match bidegree {
                None => bidegree = Some(bd),
                Some(first) if first != bd => {
                    return Err(PolyError::MixedBidegree { first, second: bd })
                }
                _ => {}
            }
        }
        Ok(BiPoly {
            ring,
            bidegree: bidegree.ok_or(PolyError::Zero)?,
            terms: merged,
        })
    }

    pub fn ring(&self) -> BiPolyRing {
        self.ring
    }

    pub fn bidegree(&self) -> (u32, u32) {
        self.bidegree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

fn bidegree_of(ring: &BiPolyRing, exps: &[u32]) -> (u32, u32) {
    let (x, y) = exps.split_at(ring.x_count);
    (x.iter().sum(), y.iter().sum())
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (exps, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for (v, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = if v < self.ring.x_count {
                    format!("x{v}")
                } else {
                    format!("y{}", v - self.ring.x_count)
                };
                factors.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            if !mag.is_one() || factors.is_empty() {
                factors.insert(0, mag.to_string());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Parses `"y0*y5 - y1*y4 + y2*y3"`-style text.
///
/// Terms are joined by `+`/`-`; a term is an optional integer coefficient
/// and `*`-separated factors `x<i>`, `y<j>`, optionally raised to `^<e>`.
pub fn parse_poly(text: &str, ring: BiPolyRing) -> Result<BiPoly, PolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
    };
    let mut terms = Vec::new();
    p.skip_ws();
    let mut first = true;
    while p.pos < p.src.len() {
        let mut sign = BigInt::one();
        match p.peek() {
            Some(b'+') => p.pos += 1,
            Some(b'-') => {
                sign = -sign;
                p.pos += 1
            }
            _ if first => {}
            _ => return Err(p.syntax("expected `+` or `-` between terms")),
        }
        p.skip_ws();
        let (exps, coeff) = p.term()?;
        terms.push((exps, sign * coeff));
        p.skip_ws();
        first = false;
    }
    if terms.is_empty() {
        return Err(p.syntax("empty polynomial"));
    }
    BiPoly::from_terms(ring, terms)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: BiPolyRing,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn syntax(&self, msg: &str) -> PolyError {
        PolyError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn term(&mut self) -> Result<(Vec<u32>, BigInt), PolyError> {
        let mut exps = vec![0u32; self.ring.var_count()];
        let mut coeff = BigInt::one();
        loop {
            self.skip_ws();
            let start = self.pos;
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n: BigInt = self.digits().unwrap().parse().unwrap();
                    coeff *= n;
                }
                Some(c @ (b'x' | b'y')) => {
                    self.pos += 1;
                    let idx: usize = self
                        .digits()
                        .ok_or_else(|| self.syntax("expected variable index"))?
                        .parse()
                        .map_err(|_| self.syntax("variable index too large"))?;
                    let (limit, offset) = if c == b'x' {
                        (self.ring.x_count, 0)
                    } else {
                        (self.ring.y_count, self.ring.x_count)
                    };
                    if idx >= limit {
                        return Err(PolyError::UnknownVariable {
                            name: String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
                            pos: start,
                        });
                    }
                    self.skip_ws();
                    let mut e = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        e = self
                            .digits()
                            .ok_or_else(|| self.syntax("expected exponent"))?
                            .parse()
                            .map_err(|_| self.syntax("exponent too large"))?;
                    }
                    exps[offset + idx] += e;
                }
                Some(_) => {
                    let name: String = self.src[self.pos..]
                        .iter()
                        .take_while(|c| c.is_ascii_alphanumeric())
                        .map(|&c| c as char)
                        .collect();
                    if name.is_empty() {
                        return Err(self.syntax("expected coefficient or variable"));
                    }
                    return Err(PolyError::UnknownVariable { name, pos: start });
                }
                None => return Err(self.syntax("unexpected end of input")),
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((exps, coeff));
            }
        }
    }
}
