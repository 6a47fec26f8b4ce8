//! Rank of sparse integer matrices modulo word-size primes.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sparse row: strictly increasing column indices with nonzero residues.
pub type SparseRow = Vec<(u32, u64)>;

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// Deterministic stream of distinct primes in `(2^30, 2^31)`.
pub struct PrimeStream {
    rng: ChaCha8Rng,
    seen: Vec<u64>,
}

impl PrimeStream {
    pub fn new(seed: u64) -> Self {
        PrimeStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seen: Vec::new(),
        }
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            let mut n = self.rng.gen_range((1u64 << 30) + 1..(1u64 << 31) - 1000) | 1;
            while !is_prime(n) {
                n += 2;
            }
            if !self.seen.contains(&n) {
                self.seen.push(n);
                return Some(n);
            }
        }
    }
}

/// `row -= factor * pivot`, both sorted by column.
fn axpy(row: &[(u32, u64)], factor: u64, pivot: &[(u32, u64)], p: u64) -> SparseRow {
    let neg = (p - factor) % p;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i]);
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, pivot[j].1 * neg % p));
            j += 1;
        } else {
            let v = (row[i].1 + pivot[j].1 * neg) % p;
            if v != 0 {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank over `GF(p)` by incremental sparse echelon insertion: every row is
/// reduced against the stored pivots until its leading column is new.
pub fn rank_mod_p(rows: &[SparseRow], p: u64) -> usize {
    let mut pivots: HashMap<u32, SparseRow> = HashMap::new();
    for row in rows {
        let mut cur: SparseRow = row
            .iter()
            .map(|&(c, v)| (c, v % p))
            .filter(|&(_, v)| v != 0)
            .collect();
        while let Some(&(lead, coeff)) = cur.first() {
            match pivots.get(&lead) {
                Some(piv) => cur = axpy(&cur, coeff, piv, p),
                None => {
                    let inv = pow_mod(coeff, p - 2, p);
                    for entry in cur.iter_mut() {
                        entry.1 = entry.1 * inv % p;
                    }
                    pivots.insert(lead, cur);
                    break;
                }
            }
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 1_000_000_007;

    #[test]
    fn small_ranks() {
        let rows = vec![
            vec![(0, 1), (1, 2)],
            vec![(0, 2), (1, 4)],
            vec![(1, 1), (2, 1)],
        ];
        assert_eq!(rank_mod_p(&rows, P), 2);
        assert_eq!(rank_mod_p(&[], P), 0);
        assert_eq!(rank_mod_p(&[vec![(3, P)]], P), 0);
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // det [[1,1],[1,-1]] = -2 vanishes only mod 2
        let rows = |p: u64| vec![vec![(0, 1), (1, 1)], vec![(0, 1), (1, p - 1)]];
        assert_eq!(rank_mod_p(&rows(P), P), 2);
        assert_eq!(rank_mod_p(&rows(2), 2), 1);
    }

    #[test]
    fn primes_are_large_and_distinct() {
        let ps: Vec<u64> = PrimeStream::new(7).take(4).collect();
        assert!(ps.iter().all(|&p| p > 1 << 30 && is_prime(p)));
        for (i, a) in ps.iter().enumerate() {
            assert!(!ps[i + 1..].contains(a));
        }
        assert_eq!(ps, PrimeStream::new(7).take(4).collect::<Vec<_>>());
    }

    #[test]
    fn dense_identity_like() {
        let n = 50u32;
        let rows: Vec<SparseRow> = (0..n)
            .map(|i| (0..n).map(|j| (j, if i == j { 2 } else { 1 })).collect())
            .collect();
        // J + I has full rank whenever n + 1 is invertible
        assert_eq!(rank_mod_p(&rows, P), n as usize);
    }
}
