//! Rank of integer matrices: exact by fraction-free Gaussian elimination,
//! and an incremental echelon form modulo a large prime.

use num_bigint::BigInt;
use std::collections::HashMap;
use std::hash::Hash;

use num_traits::{ToPrimitive, Zero};

/// Rank over ℚ of the matrix with the given rows.
pub fn rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    for r in rows.iter_mut() {
        r.resize(cols, BigInt::zero());
    }
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(pivot.iter()).skip(c) {
                *x = &*x * &pivot[c] - &f * y;
            }
            // Keep entries small: divide out the row content.
            let g = row.iter().fold(BigInt::zero(), |g, x| gcd(&g, x));
            if g > BigInt::from(1) {
                for x in row.iter_mut() {
                    *x = &*x / &g;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.magnitude().clone(), b.magnitude().clone());
    while !b.is_zero() {
        let t = &a % &b;
        a = b;
        b = t;
    }
    BigInt::from(a)
}

const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn reduce(c: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let m = ((c % &p) + &p) % &p;
    m.to_u64().expect("reduced below the modulus")
}

/// Row-echelon form over `ℤ/p`, `p = 2^61 − 1`, built one sparse vector at
/// a time. Independence mod `p` implies independence over `ℚ`.
pub struct ModEchelon<K> {
    columns: HashMap<K, usize>,
    /// Normalised rows keyed by pivot column.
    rows: HashMap<usize, Vec<(usize, u64)>>,
}

impl<K: Hash + Eq + Clone> Default for ModEchelon<K> {
    fn default() -> Self {
        ModEchelon::new()
    }
}

impl<K: Hash + Eq + Clone> ModEchelon<K> {
    pub fn new() -> Self {
        ModEchelon {
            columns: HashMap::new(),
            rows: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds the vector; returns whether it was independent of the rows so far.
    pub fn insert(&mut self, v: &[(K, BigInt)]) -> bool {
        let mut dense: std::collections::BTreeMap<usize, u64> = std::collections::BTreeMap::new();
        for (k, c) in v {
            let next = self.columns.len();
            let col = *self.columns.entry(k.clone()).or_insert(next);
            let x = reduce(c);
            if x != 0 {
                let e = dense.entry(col).or_insert(0);
                *e = (*e + x) % PRIME;
            }
        }
        dense.retain(|_, x| *x != 0);
        loop {
            let Some((&col, &lead)) = dense.iter().find(|(c, _)| self.rows.contains_key(c)) else {
                break;
            };
            let row = &self.rows[&col];
            for &(c, x) in row {
                let e = dense.entry(c).or_insert(0);
                *e = (*e + PRIME - mul_mod(lead, x)) % PRIME;
            }
            dense.retain(|_, x| *x != 0);
        }
        let Some((&pivot, &lead)) = dense.iter().next() else {
            return false;
        };
        let inv = pow_mod(lead, PRIME - 2);
        let row: Vec<(usize, u64)> = dense.into_iter().map(|(c, x)| (c, mul_mod(x, inv))).collect();
        // Keep rows reduced against each other's pivots lazily: a row is
        // only used through its pivot, so later reductions stay correct.
        self.rows.insert(pivot, row);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(m(&[])), 0);
        assert_eq!(rank(m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), 2);
        assert_eq!(rank(m(&[&[2, 0, 1], &[0, 3, 0], &[1, 1, 5]])), 3);
    }

    #[test]
    fn modular_echelon_matches_exact_rank() {
        let rows = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9], &[0, 0, 1]]);
        let mut e = ModEchelon::new();
        let inserted: Vec<bool> = rows
            .iter()
            .map(|r| e.insert(&r.iter().cloned().enumerate().collect::<Vec<_>>()))
            .collect();
        assert_eq!(inserted, vec![true, true, false, true]);
        assert_eq!(e.rank(), rank(rows));
    }
}
