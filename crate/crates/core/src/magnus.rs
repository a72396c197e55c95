//! Truncated Magnus expansion `x_i ↦ 1 + X_i` into noncommutative integer
//! power series, and the lower-central-series degree it detects.
//!
//! A nonidentity word lies in `Γ_k ∖ Γ_{k+1}` exactly when the lowest-degree
//! nonzero term of its expansion minus 1 has degree `k`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::degree::GammaDegree;
use crate::error::{Error, Result};
use crate::lie::{LieElement, Letters, Poly};
use crate::word::{Rank, Word};

/// Dense fast path is used while the coefficient table stays below this size.
const DENSE_LIMIT: usize = 1 << 22;

/// Degree-truncated noncommutative polynomial with integer coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct NCPoly {
    rank: Rank,
    truncation: usize,
    coeffs: BTreeMap<Letters, BigInt>,
}

impl NCPoly {
    pub fn one(rank: Rank, truncation: usize) -> NCPoly {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Vec::new(), BigInt::one());
        NCPoly {
            rank,
            truncation,
            coeffs,
        }
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, dropping
    /// zeros and terms beyond the truncation.
    pub fn from_terms<I>(rank: Rank, truncation: usize, terms: I) -> Result<NCPoly>
    where
        I: IntoIterator<Item = (Letters, BigInt)>,
    {
        let mut p = NCPoly {
            rank,
            truncation,
            coeffs: BTreeMap::new(),
        };
        for (m, c) in terms {
            if let Some(&bad) = m.iter().find(|&&a| a == 0 || a as usize > rank.get()) {
                return Err(Error::IndexOutOfRange {
                    index: bad as usize,
                    rank: rank.get(),
                });
            }
            if m.len() <= truncation {
                p.add_term(m, c);
            }
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Letters, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn coefficient(&self, m: &[u16]) -> BigInt {
        self.coeffs.get(m).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Letters, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coefficient(&[]).is_one()
    }

    fn check_compatible(&self, other: &NCPoly) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank.get(),
                right: other.rank.get(),
            });
        }
        if self.truncation != other.truncation {
            return Err(Error::TruncationMismatch {
                left: self.truncation,
                right: other.truncation,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    /// Truncated product; terms of degree above the truncation are dropped.
    pub fn multiply(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check_compatible(other)?;
        let mut acc: BTreeMap<Letters, BigInt> = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                if a.len() + b.len() > self.truncation {
                    continue;
                }
                let mut m = Vec::with_capacity(a.len() + b.len());
                m.extend_from_slice(a);
                m.extend_from_slice(b);
                *acc.entry(m).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(NCPoly {
            rank: self.rank,
            truncation: self.truncation,
            coeffs: acc,
        })
    }

    /// Multiplies on the right by the univariate series `Σ_k b_k X_g^k`.
    fn mul_univariate(&self, g: u16, b: &[BigInt]) -> NCPoly {
        let mut acc: BTreeMap<Letters, BigInt> = BTreeMap::new();
        for (m, c) in &self.coeffs {
            for (k, bk) in b.iter().enumerate() {
                if m.len() + k > self.truncation {
                    break;
                }
                if bk.is_zero() {
                    continue;
                }
                let mut key = m.clone();
                key.extend(std::iter::repeat(g).take(k));
                *acc.entry(key).or_insert_with(BigInt::zero) += c * bk;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        NCPoly {
            rank: self.rank,
            truncation: self.truncation,
            coeffs: acc,
        }
    }

    /// Lowest degree `≥ 1` with a nonzero coefficient.
    pub fn min_positive_degree(&self) -> Option<usize> {
        self.coeffs.keys().map(Vec::len).filter(|&l| l > 0).min()
    }

    /// The homogeneous degree-`k` component.
    pub fn homogeneous_part(&self, k: usize) -> BTreeMap<Letters, BigInt> {
        self.coeffs
            .iter()
            .filter(|(m, _)| m.len() == k)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect()
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.coeffs.iter().collect();
        terms.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(b.0)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_empty() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            for a in m {
                write!(f, "X{a}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCPoly[n={}, D={}]({})", self.rank, self.truncation, self)
    }
}

/// `binom(e, k)` for `k = 0..=d`, valid for negative `e` as well.
fn binomials(e: i64, d: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(d + 1);
    let mut c = BigInt::one();
    out.push(c.clone());
    for k in 1..=d {
        c = c * BigInt::from(e - k as i64 + 1) / BigInt::from(k);
        out.push(c.clone());
    }
    out
}

fn binomials_i128(e: i64, d: usize) -> Option<Vec<i128>> {
    let mut out = Vec::with_capacity(d + 1);
    let mut c: i128 = 1;
    out.push(c);
    for k in 1..=d {
        c = c.checked_mul((e - k as i64 + 1) as i128)? / k as i128;
        out.push(c);
    }
    Some(out)
}

/// Dense truncated series with checked `i128` coefficients, laid out by
/// degree with words encoded in base `n`. Used to push Magnus expansions
/// through compositions of automorphisms without building the image words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Series {
    n: usize,
    d: usize,
    offset: Vec<usize>,
    data: Vec<i128>,
}

impl Series {
    /// The constant 1, or `None` if the table would be too large.
    pub(crate) fn one(n: usize, d: usize) -> Option<Series> {
        let mut offset = Vec::with_capacity(d + 2);
        let (mut total, mut p) = (0usize, 1usize);
        for _ in 0..=d {
            offset.push(total);
            total = total.checked_add(p)?;
            p = p.checked_mul(n)?;
        }
        offset.push(total);
        if total > DENSE_LIMIT {
            return None;
        }
        let mut data = vec![0i128; total];
        data[0] = 1;
        Some(Series { n, d, offset, data })
    }

    /// `(1 + X_g)^e`, `g` 1-based.
    pub(crate) fn generator_power(n: usize, d: usize, g: usize, e: i64) -> Option<Series> {
        let mut s = Series::one(n, d)?;
        let b = binomials_i128(e, d)?;
        let mut code = 0usize;
        for (k, bk) in b.into_iter().enumerate().skip(1) {
            code = code * n + (g - 1);
            s.data[s.offset[k] + code] = bk;
        }
        Some(s)
    }

    pub(crate) fn mul(&self, other: &Series) -> Option<Series> {
        let mut out = Series {
            n: self.n,
            d: self.d,
            offset: self.offset.clone(),
            data: vec![0i128; self.data.len()],
        };
        let mut pow = 1usize;
        let pows: Vec<usize> = (0..=self.d)
            .map(|_| {
                let p = pow;
                pow *= self.n;
                p
            })
            .collect();
        for a in 0..=self.d {
            for ca in 0..pows[a] {
                let va = self.data[self.offset[a] + ca];
                if va == 0 {
                    continue;
                }
                for b in 0..=self.d - a {
                    let base = self.offset[a + b] + ca * pows[b];
                    for cb in 0..pows[b] {
                        let vb = other.data[other.offset[b] + cb];
                        if vb == 0 {
                            continue;
                        }
                        let slot = &mut out.data[base + cb];
                        *slot = slot.checked_add(va.checked_mul(vb)?)?;
                    }
                }
            }
        }
        Some(out)
    }

    /// Lowest positive degree carrying a nonzero coefficient.
    pub(crate) fn lowest_positive_degree(&self) -> Option<usize> {
        (1..=self.d).find(|&k| self.data[self.offset[k]..self.offset[k + 1]].iter().any(|&c| c != 0))
    }
}

/// Magnus expansion of `w` truncated at degree `d`.
pub fn expand(w: &Word, d: usize) -> Result<NCPoly> {
    if d == 0 {
        return Err(Error::ZeroTruncation);
    }
    let mut p = NCPoly::one(w.rank(), d);
    for s in w.syllables() {
        p = p.mul_univariate(s.generator as u16, &binomials(s.exponent, d));
    }
    Ok(p)
}

/// Degree of `w` in the lower central series, exact up to truncation `d`.
pub fn gamma_degree(w: &Word, d: usize) -> Result<GammaDegree> {
    if d == 0 {
        return Err(Error::ZeroTruncation);
    }
    if w.is_identity() {
        return Ok(GammaDegree::Infinite);
    }
    // The degree-1 coefficients are the exponent sums.
    if !w.exponent_vector().is_zero() {
        return Ok(GammaDegree::Finite(1));
    }
    let lowest = match lowest_degree_dense(w, d) {
        Some(l) => l,
        None => expand(w, d)?.min_positive_degree(),
    };
    Ok(match lowest {
        Some(k) => GammaDegree::Finite(k),
        None => GammaDegree::AtLeast(d + 1),
    })
}

/// Same answer as [`gamma_degree`], computed only through the exact sparse
/// expansion. Kept for cross-checking the dense path.
pub fn gamma_degree_sparse(w: &Word, d: usize) -> Result<GammaDegree> {
    if w.is_identity() {
        return Ok(GammaDegree::Infinite);
    }
    Ok(match expand(w, d)?.min_positive_degree() {
        Some(k) => GammaDegree::Finite(k),
        None => GammaDegree::AtLeast(d + 1),
    })
}

/// Dense i128 expansion. Returns `None` if the table would be too large or a
/// coefficient overflows, in which case the caller falls back to BigInt.
fn lowest_degree_dense(w: &Word, d: usize) -> Option<Option<usize>> {
    let n = w.rank().get();
    let mut pow = Vec::with_capacity(d + 1);
    let mut offset = Vec::with_capacity(d + 2);
    let mut total = 0usize;
    let mut p = 1usize;
    for _ in 0..=d {
        offset.push(total);
        pow.push(p);
        total = total.checked_add(p)?;
        p = p.checked_mul(n)?;
    }
    offset.push(total);
    if total > DENSE_LIMIT {
        return None;
    }
    let mut table = vec![0i128; total];
    table[0] = 1;
    for s in w.syllables() {
        let g = s.generator - 1;
        let b = binomials_i128(s.exponent, d)?;
        for deg in (0..d).rev() {
            for code in 0..pow[deg] {
                let v = table[offset[deg] + code];
                if v == 0 {
                    continue;
                }
                let mut target = code;
                for (k, &bk) in b.iter().enumerate().skip(1).take(d - deg) {
                    target = target * n + g;
                    let slot = &mut table[offset[deg + k] + target];
                    *slot = slot.checked_add(bk.checked_mul(v)?)?;
                }
            }
        }
    }
    Some((1..=d).find(|&k| table[offset[k]..offset[k + 1]].iter().any(|&c| c != 0)))
}

/// Class of `w` in `Γ_k / Γ_{k+1}` (k its γ-degree), in Lyndon coordinates.
pub fn leading_lie_class(w: &Word, d: usize) -> Result<LieElement> {
    if w.is_identity() {
        return Err(Error::IdentityInput);
    }
    let k = match gamma_degree(w, d)? {
        GammaDegree::Finite(k) => k,
        _ => return Err(Error::DegreeUndetermined { truncation: d }),
    };
    let part: Poly = expand(w, k)?.homogeneous_part(k);
    LieElement::from_polynomial(w.rank(), &part)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: usize) -> Rank {
        Rank::new(n).unwrap()
    }

    fn w(n: usize, s: &str) -> Word {
        Word::parse(r(n), s).unwrap()
    }

    fn poly(n: usize, d: usize, terms: &[(&[u16], i64)]) -> NCPoly {
        NCPoly::from_terms(r(n), d, terms.iter().map(|(m, c)| (m.to_vec(), BigInt::from(*c)))).unwrap()
    }

    #[test]
    fn expand_examples() {
        assert_eq!(expand(&w(2, "x1"), 3).unwrap(), poly(2, 3, &[(&[], 1), (&[1], 1)]));
        assert_eq!(
            expand(&w(2, "x1^-1"), 3).unwrap(),
            poly(2, 3, &[(&[], 1), (&[1], -1), (&[1, 1], 1), (&[1, 1, 1], -1)])
        );
        // (1+X1)(1+X2)(1-X1+X1²)(1-X2+X2²) at degree 2, multiplied out by hand.
        assert_eq!(
            expand(&w(2, "[x1, x2]"), 2).unwrap(),
            poly(2, 2, &[(&[], 1), (&[1, 2], 1), (&[2, 1], -1)])
        );
        assert!(expand(&Word::identity(r(2)), 4).unwrap().is_one());
        assert_eq!(expand(&w(2, "x1"), 0), Err(Error::ZeroTruncation));
    }

    #[test]
    fn multiply_examples() {
        let p = poly(2, 2, &[(&[], 1), (&[1], 1)]);
        assert_eq!(p.multiply(&NCPoly::one(r(2), 2)).unwrap(), p);
        let q = poly(2, 2, &[(&[], 1), (&[1], -1), (&[1, 1], 1)]);
        assert!(p.multiply(&q).unwrap().is_one());
        let a = poly(2, 3, &[(&[], 1), (&[1], 1)]);
        let b = poly(2, 3, &[(&[], 1), (&[2], 1)]);
        assert_eq!(
            a.multiply(&b).unwrap(),
            poly(2, 3, &[(&[], 1), (&[1], 1), (&[2], 1), (&[1, 2], 1)])
        );
        assert!(matches!(a.multiply(&p), Err(Error::TruncationMismatch { .. })));
    }

    #[test]
    fn gamma_degree_examples() {
        assert_eq!(gamma_degree(&w(2, "x1"), 6).unwrap(), GammaDegree::Finite(1));
        assert_eq!(gamma_degree(&w(2, "[x1, x2]"), 6).unwrap(), GammaDegree::Finite(2));
        assert_eq!(gamma_degree(&w(2, "[[x1, x2], x1]"), 6).unwrap(), GammaDegree::Finite(3));
        assert_eq!(gamma_degree(&Word::identity(r(2)), 6).unwrap(), GammaDegree::Infinite);
        assert_eq!(
            gamma_degree(&w(2, "[[[x1, x2], x1], x2]"), 3).unwrap(),
            GammaDegree::AtLeast(4)
        );
    }

    #[test]
    fn dense_and_sparse_agree_on_large_exponents() {
        // Large exponents push binomials past i128 and force the fallback.
        let big = w(2, "[x1^100000000000, x2^100000000000]");
        assert_eq!(gamma_degree(&big, 4).unwrap(), gamma_degree_sparse(&big, 4).unwrap());
        assert_eq!(gamma_degree(&big, 4).unwrap(), GammaDegree::Finite(2));
    }

    #[test]
    fn leading_class_examples() {
        let n = r(2);
        assert_eq!(leading_lie_class(&w(2, "x1"), 4).unwrap(), LieElement::generator(n, 1).unwrap());
        assert_eq!(
            leading_lie_class(&w(2, "[x1, x2]"), 4).unwrap(),
            LieElement::parse(n, "[x1,x2]").unwrap()
        );
        assert_eq!(
            leading_lie_class(&w(2, "[x1, [x1, x2]]"), 4).unwrap(),
            LieElement::parse(n, "[x1,[x1,x2]]").unwrap()
        );
        assert_eq!(leading_lie_class(&Word::identity(n), 4), Err(Error::IdentityInput));
        assert!(matches!(
            leading_lie_class(&w(2, "[x1, [x1, x2]]"), 2),
            Err(Error::DegreeUndetermined { .. })
        ));
    }

    #[test]
    fn display() {
        assert_eq!(expand(&w(2, "[x1, x2]"), 2).unwrap().to_string(), "1 + X1X2 - X2X1");
    }
}
