//! Freely reduced words in the free group `F_n` on generators `x1 .. xn`.
//!
//! Words are stored in syllable (run-length) form. Conventions:
//! `x^y = y⁻¹ x y` and `[x, y] = x y x⁻¹ y⁻¹`.

use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{self, Cursor, GroupAlgebra};

/// Number of free generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rank(u32);

impl Rank {
    pub fn new(n: usize) -> Result<Rank> {
        if n == 0 {
            return Err(Error::ZeroRank);
        }
        Ok(Rank(n as u32))
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A maximal run `x_generator^exponent`, with a 1-based generator index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    pub generator: usize,
    pub exponent: i64,
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    rank: Rank,
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity(rank: Rank) -> Word {
        Word {
            rank,
            syllables: Vec::new(),
        }
    }

    pub fn generator(rank: Rank, index: usize) -> Result<Word> {
        Word::from_syllables(rank, [(index, 1)])
    }

    /// Freely reduces an arbitrary sequence of `(generator, exponent)` pairs.
    pub fn from_syllables<I>(rank: Rank, raw: I) -> Result<Word>
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        let mut w = Word::identity(rank);
        for (g, e) in raw {
            check_index(rank, g)?;
            w.push(g, e);
        }
        Ok(w)
    }

    /// Stack-based free reduction: the stored syllables stay reduced.
    fn push(&mut self, generator: usize, exponent: i64) {
        if exponent == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.generator == generator {
                last.exponent += exponent;
                if last.exponent == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push(Syllable {
            generator,
            exponent,
        });
    }

    fn extend_from(&mut self, other: &Word) {
        for s in &other.syllables {
            self.push(s.generator, s.exponent);
        }
    }

    fn extend_inverse_from(&mut self, other: &Word) {
        for s in other.syllables.iter().rev() {
            self.push(s.generator, -s.exponent);
        }
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Letter length: the sum of absolute exponents.
    pub fn len(&self) -> usize {
        self.syllables
            .iter()
            .map(|s| s.exponent.unsigned_abs() as usize)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Letters `(generator, ±1)` from left to right.
    pub fn letters(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.syllables.iter().flat_map(|s| {
            let sign = s.exponent.signum();
            std::iter::repeat((s.generator, sign)).take(s.exponent.unsigned_abs() as usize)
        })
    }

    /// Largest generator index occurring, or 0 for the identity.
    pub fn max_generator(&self) -> usize {
        self.syllables.iter().map(|s| s.generator).max().unwrap_or(0)
    }

    fn check_rank(&self, other: &Word) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank.get(),
                right: other.rank.get(),
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        let mut w = self.clone();
        w.extend_from(other);
        Ok(w)
    }

    pub fn inverse(&self) -> Word {
        let mut w = Word::identity(self.rank);
        w.extend_inverse_from(self);
        w
    }

    pub fn pow(&self, e: i64) -> Word {
        if let [s] = self.syllables.as_slice() {
            return Word::from_syllables(self.rank, [(s.generator, s.exponent * e)])
                .expect("generator already validated");
        }
        let mut w = Word::identity(self.rank);
        for _ in 0..e.unsigned_abs() {
            if e > 0 {
                w.extend_from(self);
            } else {
                w.extend_inverse_from(self);
            }
        }
        w
    }

    /// Right conjugation `self^by = by⁻¹ · self · by`.
    pub fn conjugate(&self, by: &Word) -> Result<Word> {
        self.check_rank(by)?;
        let mut w = Word::identity(self.rank);
        w.extend_inverse_from(by);
        w.extend_from(self);
        w.extend_from(by);
        Ok(w)
    }

    /// `[self, other] = self · other · self⁻¹ · other⁻¹`.
    pub fn commutator(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        let mut w = self.clone();
        w.extend_from(other);
        w.extend_inverse_from(self);
        w.extend_inverse_from(other);
        Ok(w)
    }

    /// Applies the endomorphism `x_i ↦ images[i-1]`; the result has the
    /// rank of the images.
    pub fn substitute(&self, images: &[Word]) -> Result<Word> {
        if images.len() != self.rank.get() {
            return Err(Error::LengthMismatch {
                expected: self.rank.get(),
                got: images.len(),
            });
        }
        let target = images[0].rank;
        if let Some(bad) = images.iter().find(|w| w.rank != target) {
            return Err(Error::RankMismatch {
                left: target.get(),
                right: bad.rank.get(),
            });
        }
        Ok(self.substitute_unchecked(target, images))
    }

    pub(crate) fn substitute_unchecked(&self, target: Rank, images: &[Word]) -> Word {
        let mut w = Word::identity(target);
        for s in &self.syllables {
            let img = &images[s.generator - 1];
            for _ in 0..s.exponent.unsigned_abs() {
                if s.exponent > 0 {
                    w.extend_from(img);
                } else {
                    w.extend_inverse_from(img);
                }
            }
        }
        w
    }

    /// Reinterprets the word in a free group of a different rank. Fails if
    /// a generator beyond the new rank occurs.
    pub fn with_rank(&self, rank: Rank) -> Result<Word> {
        let m = self.max_generator();
        if m > rank.get() {
            return Err(Error::IndexOutOfRange {
                index: m,
                rank: rank.get(),
            });
        }
        Ok(Word {
            rank,
            syllables: self.syllables.clone(),
        })
    }

    pub fn exponent_vector(&self) -> ExponentVector {
        let mut v = vec![0i64; self.rank.get()];
        for s in &self.syllables {
            v[s.generator - 1] += s.exponent;
        }
        ExponentVector(v)
    }

    /// Total exponent of one generator.
    pub fn exponent_sum(&self, generator: usize) -> i64 {
        self.syllables
            .iter()
            .filter(|s| s.generator == generator)
            .map(|s| s.exponent)
            .sum()
    }

    /// Parses the token grammar `x1 x2^-1 x1^3` (empty means identity).
    /// Commutators `[u, v]` and parenthesised groups `(u)^e` are accepted too.
    pub fn parse(rank: Rank, src: &str) -> Result<Word> {
        expr::parse_product(&WordAlgebra { rank }, src)
    }

    /// Decomposes an element of the commutator subgroup as a product
    /// `∏ [x_α, x_β]^ω`, read left to right.
    ///
    /// Letters are insertion-sorted by generator index; each transposition
    /// `z y = y z [z⁻¹, y⁻¹]` emits one conjugated basic commutator, rewritten
    /// with `[a⁻¹, b] = [b, a]^a`, `[a, b⁻¹] = [b, a]^b` and
    /// `[a⁻¹, b⁻¹] = [a, b]^(ab)`.
    pub fn decompose_gamma2(&self) -> Result<Vec<CommutatorFactor>> {
        let ev = self.exponent_vector();
        if !ev.is_zero() {
            return Err(Error::NotInCommutatorSubgroup(ev.0));
        }
        let letters: Vec<(usize, i64)> = self.letters().collect();
        // Emitted factors, in reverse of their final order.
        let mut emitted: Vec<CommutatorFactor> = Vec::new();
        // Sorted prefix as letters (nondecreasing generator; same-generator
        // letters always share a sign since the prefix is kept reduced).
        let mut sorted: Vec<(usize, i64)> = Vec::new();
        for (pos, &(g, e)) in letters.iter().enumerate() {
            let suffix = Word::from_syllables(self.rank, letters[pos + 1..].iter().copied())
                .expect("letters of a valid word");
            // Move y = x_g^e left past every larger-index letter at the end.
            let mut passed: Vec<(usize, i64)> = Vec::new();
            while let Some(&(h, f)) = sorted.last() {
                if h <= g {
                    break;
                }
                sorted.pop();
                // z y = y z [z⁻¹, y⁻¹]; the commutator is pushed right past
                // the letters already passed (in their original order) and
                // the unread suffix.
                let mut tail = Word::identity(self.rank);
                for &(pg, pe) in passed.iter().rev() {
                    tail.push(pg, pe);
                }
                tail.extend_from(&suffix);
                emitted.push(basic_commutator(self.rank, (h, -f), (g, -e), &tail));
                passed.push((h, f));
            }
            // Insert y, cancelling against an equal generator of opposite sign.
            match sorted.last() {
                Some(&(h, f)) if h == g && f == -e => {
                    sorted.pop();
                }
                _ => sorted.push((g, e)),
            }
            sorted.extend(passed.into_iter().rev());
        }
        debug_assert!(sorted.is_empty());
        emitted.reverse();
        Ok(emitted)
    }

    /// Recomposes a list of commutator factors into a word.
    pub fn recompose_gamma2(rank: Rank, factors: &[CommutatorFactor]) -> Result<Word> {
        let mut w = Word::identity(rank);
        for f in factors {
            w.extend_from(&f.to_word(rank)?);
        }
        Ok(w)
    }
}

/// `[z⁻¹, y⁻¹]^tail` with z, y letters, rewritten as `[x_α, x_β]^ω`.
fn basic_commutator(rank: Rank, a: (usize, i64), b: (usize, i64), tail: &Word) -> CommutatorFactor {
    let (p, s) = a;
    let (q, t) = b;
    let letter = |g: usize| Word::from_syllables(rank, [(g, 1)]).expect("valid index");
    let (alpha, beta, inner) = match (s > 0, t > 0) {
        (true, true) => (p, q, Word::identity(rank)),
        (false, true) => (q, p, letter(p)),
        (true, false) => (q, p, letter(q)),
        (false, false) => (p, q, &letter(p) * &letter(q)),
    };
    CommutatorFactor {
        alpha,
        beta,
        conjugator: &inner * tail,
    }
}

/// One factor `[x_alpha, x_beta]^conjugator` of a commutator decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorFactor {
    pub alpha: usize,
    pub beta: usize,
    pub conjugator: Word,
}

impl CommutatorFactor {
    pub fn to_word(&self, rank: Rank) -> Result<Word> {
        let a = Word::generator(rank, self.alpha)?;
        let b = Word::generator(rank, self.beta)?;
        a.commutator(&b)?.conjugate(&self.conjugator.with_rank(rank)?)
    }
}

fn check_index(rank: Rank, g: usize) -> Result<()> {
    if g == 0 || g > rank.get() {
        return Err(Error::IndexOutOfRange {
            index: g,
            rank: rank.get(),
        });
    }
    Ok(())
}

/// Panics on rank mismatch; use [`Word::multiply`] for a checked product.
impl Mul<&Word> for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.multiply(rhs).expect("word ranks must agree")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if s.exponent == 1 {
                write!(f, "x{}", s.generator)?;
            } else {
                write!(f, "x{}^{}", s.generator, s.exponent)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            write!(f, "Word[{}](1)", self.rank)
        } else {
            write!(f, "Word[{}]({})", self.rank, self)
        }
    }
}

struct WordAlgebra {
    rank: Rank,
}

impl GroupAlgebra for WordAlgebra {
    type Elem = Word;

    fn identity(&self) -> Word {
        Word::identity(self.rank)
    }

    fn mul(&self, a: &Word, b: &Word) -> Result<Word> {
        a.multiply(b)
    }

    fn inv(&self, a: &Word) -> Word {
        a.inverse()
    }

    fn pow(&self, a: &Word, e: i64) -> Result<Word> {
        Ok(a.pow(e))
    }

    fn atom(&self, cur: &mut Cursor<'_>) -> Result<Option<Word>> {
        if !cur.eat('x') {
            return Ok(None);
        }
        let g = cur.digits()?;
        check_index(self.rank, g)?;
        Ok(Some(Word::from_syllables(self.rank, [(g, 1)])?))
    }
}

/// Image of a word in the abelianization `ℤ^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Add for ExponentVector {
    type Output = ExponentVector;

    fn add(self, rhs: ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
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

    #[test]
    fn reduce_examples() {
        let n = r(3);
        assert!(Word::from_syllables(n, [(1, 1), (1, -1)]).unwrap().is_identity());
        assert_eq!(Word::from_syllables(n, [(1, 1), (1, 1)]).unwrap().syllables(), &[Syllable { generator: 1, exponent: 2 }]);
        assert_eq!(
            Word::from_syllables(n, [(1, 1), (2, 1), (2, -1), (1, 1)]).unwrap(),
            w(3, "x1^2")
        );
        assert_eq!(
            Word::from_syllables(n, [(4, 1)]),
            Err(Error::IndexOutOfRange { index: 4, rank: 3 })
        );
        assert_eq!(Word::from_syllables(n, [(0, 1)]).unwrap_err(), Error::IndexOutOfRange { index: 0, rank: 3 });
    }

    #[test]
    fn multiply_and_invert() {
        let x1 = w(3, "x1");
        assert_eq!(&x1 * &Word::identity(r(3)), x1);
        assert_eq!(w(3, "x1 x2").inverse(), w(3, "x2^-1 x1^-1"));
        let u = w(3, "x1 x2^-1 x3");
        assert!((&u * &u.inverse()).is_identity());
        assert!(matches!(x1.multiply(&w(2, "x1")), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn conjugation_convention() {
        let x1 = w(3, "x1");
        assert_eq!(x1.conjugate(&Word::identity(r(3))).unwrap(), x1);
        assert_eq!(x1.conjugate(&w(3, "x2")).unwrap(), w(3, "x2^-1 x1 x2"));
        let u = w(3, "x2 x3");
        assert_eq!(x1.conjugate(&u).unwrap().conjugate(&u.inverse()).unwrap(), x1);
    }

    #[test]
    fn commutator_convention() {
        let x1 = w(2, "x1");
        assert!(x1.commutator(&x1).unwrap().is_identity());
        assert_eq!(x1.commutator(&w(2, "x2")).unwrap(), w(2, "x1 x2 x1^-1 x2^-1"));
        assert!(x1.commutator(&Word::identity(r(2))).unwrap().is_identity());
    }

    #[test]
    fn substitute_examples() {
        let swap = [w(2, "x2"), w(2, "x1")];
        assert_eq!(w(2, "x1 x2").substitute(&swap).unwrap(), w(2, "x2 x1"));
        assert!(Word::identity(r(2)).substitute(&swap).unwrap().is_identity());
        // [x1, x2] under x2 -> x2 x1: x1 (x2 x1) x1^-1 (x1^-1 x2^-1) = x1 x2 x1^-1 x2^-1
        let c = w(2, "[x1, x2]");
        let img = c.substitute(&[w(2, "x1"), w(2, "x2 x1")]).unwrap();
        assert_eq!(img, w(2, "x1 x2 x1^-1 x2^-1"));
        assert_eq!(img, w(2, "[x1, x2 x1]"));
        assert!(matches!(c.substitute(&[w(2, "x1")]), Err(Error::LengthMismatch { expected: 2, got: 1 })));
    }

    #[test]
    fn substitute_changes_rank() {
        let img = w(2, "x1 x2^2").substitute(&[w(3, "x3"), w(3, "x1 x2")]).unwrap();
        assert_eq!(img, w(3, "x3 x1 x2 x1 x2"));
        assert_eq!(img.rank(), r(3));
    }

    #[test]
    fn exponent_vectors() {
        assert_eq!(w(3, "x1 x2^-1").exponent_vector().0, vec![1, -1, 0]);
        assert!(w(3, "[x1 x3, x2^2 x1]").exponent_vector().is_zero());
        assert!(Word::identity(r(3)).exponent_vector().is_zero());
    }

    #[test]
    fn decompose_examples() {
        let n = r(3);
        assert_eq!(
            w(3, "[x1, x2]").decompose_gamma2().unwrap(),
            vec![CommutatorFactor { alpha: 1, beta: 2, conjugator: Word::identity(n) }]
        );
        assert!(Word::identity(n).decompose_gamma2().unwrap().is_empty());
        let g = w(3, "[x1, x2 x3]");
        // [a, bc] = [a, b] · b[a, c]b⁻¹
        let expected = &w(3, "[x1, x2]") * &w(3, "x2 [x1, x3] x2^-1");
        assert_eq!(g, expected);
        let factors = g.decompose_gamma2().unwrap();
        assert_eq!(Word::recompose_gamma2(n, &factors).unwrap(), g);
        assert!(matches!(w(3, "x1").decompose_gamma2(), Err(Error::NotInCommutatorSubgroup(_))));
    }

    #[test]
    fn text_round_trip() {
        for s in ["", "x1", "x1 x2^-1 x1^3", "x3^-2 x1"] {
            let word = w(3, s);
            assert_eq!(word.to_string(), s);
            assert_eq!(w(3, &word.to_string()), word);
        }
        assert!(Word::parse(r(2), "x3").is_err());
        assert!(Word::parse(r(2), "x1^").is_err());
        assert_eq!(w(2, "1"), Word::identity(r(2)));
        assert_eq!(w(2, "(x1 x2)^2"), w(2, "x1 x2 x1 x2"));
    }
}
