//! The free Lie ring over ℤ with its Lyndon basis, graded derivations, and a
//! text grammar for Lie elements.
//!
//! Basis elements are Lyndon words with their standard right bracketing.
//! Coordinates are extracted from associative polynomials using the fact that
//! the expansion of a Lyndon word `l` is `l` plus lexicographically larger
//! words of the same length.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expr::{self, Cursor, LieSyntax};
use crate::word::Rank;

/// A word over the alphabet `1..=n`, used both as a monomial and as a
/// Lyndon basis label.
pub type Letters = Vec<u16>;

/// Homogeneous associative polynomial, untruncated.
/// Noncommutative polynomial: monomial letters to coefficient.
pub type Poly = BTreeMap<Letters, BigInt>;

pub(crate) fn poly_add_scaled(acc: &mut Poly, p: &Poly, c: &BigInt) {
    for (m, v) in p {
        let entry = acc.entry(m.clone()).or_insert_with(BigInt::zero);
        *entry += v * c;
        if entry.is_zero() {
            acc.remove(m);
        }
    }
}

pub(crate) fn poly_mul(p: &Poly, q: &Poly) -> Poly {
    let mut out = Poly::new();
    for (a, ca) in p {
        for (b, cb) in q {
            let mut m = Vec::with_capacity(a.len() + b.len());
            m.extend_from_slice(a);
            m.extend_from_slice(b);
            let entry = out.entry(m).or_insert_with(BigInt::zero);
            *entry += ca * cb;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub(crate) fn poly_commutator(p: &Poly, q: &Poly) -> Poly {
    let mut out = poly_mul(p, q);
    poly_add_scaled(&mut out, &poly_mul(q, p), &BigInt::from(-1));
    out
}

/// Lyndon words: strictly smaller than each of their proper suffixes.
pub fn is_lyndon(w: &[u16]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Splits a Lyndon word of length ≥ 2 as `u v` with `v` its longest proper
/// Lyndon suffix; both factors are Lyndon.
pub fn standard_factorization(w: &[u16]) -> (&[u16], &[u16]) {
    debug_assert!(w.len() >= 2 && is_lyndon(w));
    for i in 1..w.len() {
        if is_lyndon(&w[i..]) {
            return (&w[..i], &w[i..]);
        }
    }
    unreachable!("a Lyndon word of length >= 2 has a proper Lyndon suffix")
}

/// All Lyndon words of length exactly `k` over `1..=n`, lexicographically
/// increasing (Duval's generation algorithm).
pub fn lyndon_words(n: usize, k: usize) -> Vec<Letters> {
    let mut out = Vec::new();
    if n == 0 || k == 0 {
        return out;
    }
    let n = n as u16;
    let mut w: Vec<u16> = vec![1];
    loop {
        if w.len() == k {
            out.push(w.clone());
        }
        // Extend periodically to length k, then increment the last letter.
        let m = w.len();
        while w.len() < k {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&n) {
            w.pop();
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    out
}

/// Dimension of the degree-`k` part of the free Lie ring on `n` generators:
/// `(1/k) Σ_{d | k} μ(d) n^{k/d}`.
pub fn witt_dimension(n: usize, k: usize) -> u128 {
    assert!(n >= 1 && k >= 1, "witt_dimension needs n, k >= 1");
    let n = n as i128;
    let mut total: i128 = 0;
    for d in 1..=k {
        if k % d == 0 {
            let mu = mobius(d);
            if mu != 0 {
                total += mu as i128 * n.pow((k / d) as u32);
            }
        }
    }
    (total / k as i128) as u128
}

fn mobius(mut d: usize) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= d {
        if d % p == 0 {
            d /= p;
            if d % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if d > 1 {
        result = -result;
    }
    result
}

/// The degree-`k` Lyndon basis of the free Lie ring of rank `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LyndonBasis {
    pub rank: Rank,
    pub degree: usize,
    pub words: Vec<Letters>,
}

impl LyndonBasis {
    pub fn index_of(&self, w: &[u16]) -> Option<usize> {
        self.words.binary_search_by(|x| x.as_slice().cmp(w)).ok()
    }

    /// The standard bracketing of basis element `i`, e.g. `[x1,[x1,x2]]`.
    pub fn bracketing(&self, i: usize) -> String {
        bracketing_string(&self.words[i])
    }
}

type BasisCache = RwLock<HashMap<(usize, usize), Arc<LyndonBasis>>>;

fn basis_cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

pub fn lyndon_basis(n: Rank, k: usize) -> Arc<LyndonBasis> {
    let key = (n.get(), k);
    if let Some(b) = basis_cache().read().expect("basis cache").get(&key) {
        return Arc::clone(b);
    }
    let basis = Arc::new(LyndonBasis {
        rank: n,
        degree: k,
        words: lyndon_words(n.get(), k),
    });
    basis_cache()
        .write()
        .expect("basis cache")
        .entry(key)
        .or_insert(basis)
        .clone()
}

pub fn bracketing_string(w: &[u16]) -> String {
    if w.len() == 1 {
        format!("x{}", w[0])
    } else {
        let (u, v) = standard_factorization(w);
        format!("[{},{}]", bracketing_string(u), bracketing_string(v))
    }
}

type PolyCache = RwLock<HashMap<Letters, Arc<Poly>>>;

fn poly_cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Associative expansion of the standard bracketing of a Lyndon word.
pub(crate) fn lyndon_polynomial(w: &[u16]) -> Arc<Poly> {
    if let Some(p) = poly_cache().read().expect("poly cache").get(w) {
        return Arc::clone(p);
    }
    let p = if w.len() == 1 {
        let mut p = Poly::new();
        p.insert(w.to_vec(), BigInt::one());
        p
    } else {
        let (u, v) = standard_factorization(w);
        poly_commutator(&lyndon_polynomial(u), &lyndon_polynomial(v))
    };
    let p = Arc::new(p);
    poly_cache()
        .write()
        .expect("poly cache")
        .insert(w.to_vec(), Arc::clone(&p));
    p
}

/// Integer combination of Lyndon basis elements, keyed by Lyndon word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LieElement {
    rank: Rank,
    terms: BTreeMap<Letters, BigInt>,
}

impl LieElement {
    pub fn zero(rank: Rank) -> LieElement {
        LieElement {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(rank: Rank, i: usize) -> Result<LieElement> {
        Self::basis_element(rank, vec![i as u16])
    }

    pub fn basis_element(rank: Rank, w: Letters) -> Result<LieElement> {
        check_letters(rank, &w)?;
        if !is_lyndon(&w) {
            return Err(Error::NotLie(w));
        }
        let mut terms = BTreeMap::new();
        terms.insert(w, BigInt::one());
        Ok(LieElement { rank, terms })
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms `(lyndon word, coefficient)` in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Letters, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &[u16]) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Coordinates as `(degree, basis index, coefficient)`.
    pub fn coordinates(&self) -> Vec<(usize, usize, BigInt)> {
        self.terms
            .iter()
            .map(|(w, c)| {
                let basis = lyndon_basis(self.rank, w.len());
                let idx = basis.index_of(w).expect("terms are Lyndon words");
                (w.len(), idx, c.clone())
            })
            .collect()
    }

    /// Degrees that occur, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|w| w.len()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The single degree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        match self.degrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    pub fn homogeneous_part(&self, k: usize) -> LieElement {
        LieElement {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == k)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn with_rank(&self, rank: Rank) -> Result<LieElement> {
        for w in self.terms.keys() {
            check_letters(rank, w)?;
        }
        Ok(LieElement {
            rank,
            terms: self.terms.clone(),
        })
    }

    fn check_rank(&self, other: &LieElement) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank.get(),
                right: other.rank.get(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &LieElement) -> Result<LieElement> {
        self.check_rank(other)?;
        let mut out = self.clone();
        out.add_scaled_assign(other, &BigInt::one());
        Ok(out)
    }

    pub fn sub(&self, other: &LieElement) -> Result<LieElement> {
        self.check_rank(other)?;
        let mut out = self.clone();
        out.add_scaled_assign(other, &BigInt::from(-1));
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> LieElement {
        let mut out = LieElement::zero(self.rank);
        out.add_scaled_assign(self, c);
        out
    }

    pub fn neg(&self) -> LieElement {
        self.scale(&BigInt::from(-1))
    }

    pub(crate) fn add_scaled_assign(&mut self, other: &LieElement, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for (w, v) in &other.terms {
            let entry = self.terms.entry(w.clone()).or_insert_with(BigInt::zero);
            *entry += v * c;
            if entry.is_zero() {
                self.terms.remove(w);
            }
        }
    }

    /// Associative expansion of the element in the free associative ring.
    pub fn to_polynomial(&self) -> Poly {
        let mut p = Poly::new();
        for (w, c) in &self.terms {
            poly_add_scaled(&mut p, &lyndon_polynomial(w), c);
        }
        p
    }

    /// Lyndon coordinates of a polynomial; fails if it is not a Lie element.
    pub(crate) fn from_polynomial(rank: Rank, p: &Poly) -> Result<LieElement> {
        let mut rest = p.clone();
        let mut out = LieElement::zero(rank);
        while let Some((m, c)) = rest.iter().next().map(|(m, c)| (m.clone(), c.clone())) {
            if !is_lyndon(&m) {
                return Err(Error::NotLie(m));
            }
            check_letters(rank, &m)?;
            poly_add_scaled(&mut rest, &lyndon_polynomial(&m), &-&c);
            out.terms.insert(m, c);
        }
        Ok(out)
    }

    /// The Lie bracket, bilinear over the basis brackets.
    pub fn bracket(&self, other: &LieElement) -> Result<LieElement> {
        self.check_rank(other)?;
        let mut out = LieElement::zero(self.rank);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let coords = basis_bracket(a, b);
                let c = ca * cb;
                for (w, v) in coords.iter() {
                    let entry = out.terms.entry(w.clone()).or_insert_with(BigInt::zero);
                    *entry += v * &c;
                    if entry.is_zero() {
                        out.terms.remove(w);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Parses `3*[x1,[x1,x2]] - [x2,x3]`: integer combinations of bracket
    /// expressions in the generators. Brackets may contain combinations.
    pub fn parse(rank: Rank, src: &str) -> Result<LieElement> {
        expr::parse_lie(&LieParser { rank }, src)
    }
}

type BracketCache = RwLock<HashMap<(Letters, Letters), Arc<BTreeMap<Letters, BigInt>>>>;

fn bracket_cache() -> &'static BracketCache {
    static CACHE: OnceLock<BracketCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Lyndon coordinates of `[a, b]` for basis words `a`, `b`, via the
/// associative embedding. Rank-independent, so cached by words alone.
fn basis_bracket(a: &[u16], b: &[u16]) -> Arc<BTreeMap<Letters, BigInt>> {
    let key = (a.to_vec(), b.to_vec());
    if let Some(v) = bracket_cache().read().expect("bracket cache").get(&key) {
        return Arc::clone(v);
    }
    let p = poly_commutator(&lyndon_polynomial(a), &lyndon_polynomial(b));
    let max = a.iter().chain(b).copied().max().unwrap_or(1) as usize;
    let rank = Rank::new(max).expect("nonempty words");
    let coords = LieElement::from_polynomial(rank, &p)
        .expect("the commutator of Lie polynomials is a Lie polynomial")
        .terms;
    let coords = Arc::new(coords);
    bracket_cache()
        .write()
        .expect("bracket cache")
        .insert(key, Arc::clone(&coords));
    coords
}

fn check_letters(rank: Rank, w: &[u16]) -> Result<()> {
    if let Some(&bad) = w.iter().find(|&&a| a == 0 || a as usize > rank.get()) {
        return Err(Error::IndexOutOfRange {
            index: bad as usize,
            rank: rank.get(),
        });
    }
    Ok(())
}

struct LieParser {
    rank: Rank,
}

impl LieSyntax for LieParser {
    type Elem = LieElement;

    fn zero(&self) -> LieElement {
        LieElement::zero(self.rank)
    }

    fn add_scaled(&self, acc: &mut LieElement, x: &LieElement, c: i64) {
        acc.add_scaled_assign(x, &BigInt::from(c));
    }

    fn bracket(&self, a: &LieElement, b: &LieElement) -> Result<LieElement> {
        a.bracket(b)
    }

    fn generator(&self, cur: &mut Cursor<'_>) -> Result<Option<LieElement>> {
        if !cur.eat('x') {
            return Ok(None);
        }
        let i = cur.digits()?;
        if i == 0 || i > self.rank.get() {
            return Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank.get(),
            });
        }
        LieElement::generator(self.rank, i).map(Some)
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            f.write_str(&bracketing_string(w))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lie[{}]({})", self.rank, self)
    }
}

/// A graded derivation of degree `degree`: sends `x̄_i` to `images[i-1]`,
/// homogeneous of degree `degree + 1`, and raises every degree by `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rank: Rank,
    pub degree: usize,
    pub images: Vec<LieElement>,
}

impl Derivation {
    pub fn new(rank: Rank, degree: usize, images: Vec<LieElement>) -> Result<Derivation> {
        if degree == 0 {
            return Err(Error::Config("derivation degree must be at least 1".into()));
        }
        if images.len() != rank.get() {
            return Err(Error::LengthMismatch {
                expected: rank.get(),
                got: images.len(),
            });
        }
        for img in &images {
            if img.rank() != rank {
                return Err(Error::RankMismatch {
                    left: rank.get(),
                    right: img.rank().get(),
                });
            }
            if !img.is_zero() && img.homogeneous_degree() != Some(degree + 1) {
                return Err(Error::Config(format!(
                    "derivation image {img} is not homogeneous of degree {}",
                    degree + 1
                )));
            }
        }
        Ok(Derivation {
            rank,
            degree,
            images,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(LieElement::is_zero)
    }

    /// Leibniz extension: `d([u, v]) = [d u, v] + [u, d v]`.
    pub fn apply(&self, a: &LieElement) -> Result<LieElement> {
        if a.rank() != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank.get(),
                right: a.rank().get(),
            });
        }
        let mut out = LieElement::zero(self.rank);
        for (w, c) in a.terms() {
            out.add_scaled_assign(&self.apply_basis(w), c);
        }
        Ok(out)
    }

    fn apply_basis(&self, w: &[u16]) -> LieElement {
        apply_leibniz(self.rank, w, &|i| self.images[i - 1].clone())
    }
}

/// Applies the derivation determined by `on_generator` to the standard
/// bracketing of the Lyndon word `w`.
pub(crate) fn apply_leibniz(
    rank: Rank,
    w: &[u16],
    on_generator: &dyn Fn(usize) -> LieElement,
) -> LieElement {
    if w.len() == 1 {
        return on_generator(w[0] as usize);
    }
    let (u, v) = standard_factorization(w);
    let ue = LieElement::basis_element(rank, u.to_vec()).expect("Lyndon factor");
    let ve = LieElement::basis_element(rank, v.to_vec()).expect("Lyndon factor");
    let du = apply_leibniz(rank, u, on_generator);
    let dv = apply_leibniz(rank, v, on_generator);
    let mut out = du.bracket(&ve).expect("same rank");
    out.add_scaled_assign(&ue.bracket(&dv).expect("same rank"), &BigInt::one());
    out
}
