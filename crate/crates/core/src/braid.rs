//! Pure braids acting on free groups through the Artin representation,
//! combing into the iterated semidirect normal form, and the two filtration
//! degrees on `P_n`.
//!
//! `σ_i` acts by `x_i ↦ x_i x_{i+1} x_i⁻¹`, `x_{i+1} ↦ x_i`, and a braid word
//! `b1 … bm` acts by `ρ(b1) ∘ … ∘ ρ(bm)`. The generator `A(r,s)` is the braid
//! `σ_{s-1} ⋯ σ_{r+1} σ_r² σ_{r+1}⁻¹ ⋯ σ_{s-1}⁻¹`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::aut::{andreadakis_degree_of_composite, Automorphism, FreeEndo};
use crate::degree::{AndreadakisDegree, FiltrationDegree, GammaDegree};
use crate::error::{Error, Result};
use crate::expr::{self, Cursor, GroupAlgebra};
use crate::magnus::gamma_degree;
use crate::word::{Rank, Word};

/// Default cap on the length of a combed kernel word.
pub const DEFAULT_LENGTH_BUDGET: usize = 200_000;

/// A word in the generators `A(i,j)`, `i < j ≤ n`, freely reduced on
/// adjacent equal letters.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PureBraidWord {
    strands: usize,
    letters: Vec<(usize, usize, i64)>,
}

impl PureBraidWord {
    pub fn identity(strands: usize) -> PureBraidWord {
        PureBraidWord {
            strands,
            letters: Vec::new(),
        }
    }

    /// `A(i,j)^e`; the indices are normalised so that `i < j`.
    pub fn generator(strands: usize, i: usize, j: usize, e: i64) -> Result<PureBraidWord> {
        let (r, s) = if i < j { (i, j) } else { (j, i) };
        if r == s || r == 0 || s > strands {
            return Err(Error::InvalidIndices(format!("A({i},{j}) on {strands} strands")));
        }
        let mut w = PureBraidWord::identity(strands);
        w.push(r, s, e);
        Ok(w)
    }

    fn push(&mut self, r: usize, s: usize, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if (last.0, last.1) == (r, s) {
                last.2 += e;
                if last.2 == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push((r, s, e));
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    /// Syllables `(r, s, e)` meaning `A(r,s)^e`.
    pub fn letters(&self) -> &[(usize, usize, i64)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Total number of generator letters counted with multiplicity.
    pub fn len(&self) -> usize {
        self.letters.iter().map(|l| l.2.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &PureBraidWord) -> Result<PureBraidWord> {
        if self.strands != other.strands {
            return Err(Error::RankMismatch {
                left: self.strands,
                right: other.strands,
            });
        }
        let mut w = self.clone();
        for &(r, s, e) in &other.letters {
            w.push(r, s, e);
        }
        Ok(w)
    }

    pub fn inverse(&self) -> PureBraidWord {
        let mut w = PureBraidWord::identity(self.strands);
        for &(r, s, e) in self.letters.iter().rev() {
            w.push(r, s, -e);
        }
        w
    }

    /// Group commutator `a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, other: &PureBraidWord) -> Result<PureBraidWord> {
        self.multiply(other)?
            .multiply(&self.inverse())?
            .multiply(&other.inverse())
    }

    /// Reinterprets the word with more strands.
    pub fn with_strands(&self, strands: usize) -> Result<PureBraidWord> {
        if let Some(&(r, s, _)) = self.letters.iter().find(|l| l.1 > strands) {
            return Err(Error::InvalidIndices(format!("A({r},{s}) on {strands} strands")));
        }
        Ok(PureBraidWord {
            strands,
            letters: self.letters.clone(),
        })
    }

    /// The kernel word `x_{a1}^{e1} ⋯` read as `A(a1,k)^{e1} ⋯`.
    pub fn from_kernel_word(strands: usize, k: usize, w: &Word) -> Result<PureBraidWord> {
        let mut out = PureBraidWord::identity(strands);
        for s in w.syllables() {
            if s.generator >= k || k > strands {
                return Err(Error::InvalidIndices(format!("A({},{k}) on {strands} strands", s.generator)));
            }
            out.push(s.generator, k, s.exponent);
        }
        Ok(out)
    }

    /// Parses `A(1,2) A(1,3)^-1 [A(1,3), A(2,3)]`.
    pub fn parse(strands: usize, src: &str) -> Result<PureBraidWord> {
        if strands < 2 {
            return Err(Error::Config("a pure braid needs at least 2 strands".into()));
        }
        expr::parse_product(&BraidAlgebra { strands }, src)
    }
}

impl fmt::Display for PureBraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (idx, (r, s, e)) in self.letters.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            if *e == 1 {
                write!(f, "A({r},{s})")?;
            } else {
                write!(f, "A({r},{s})^{e}")?;
            }
        }
        Ok(())
    }
}

struct BraidAlgebra {
    strands: usize,
}

impl GroupAlgebra for BraidAlgebra {
    type Elem = PureBraidWord;

    fn identity(&self) -> PureBraidWord {
        PureBraidWord::identity(self.strands)
    }

    fn mul(&self, a: &PureBraidWord, b: &PureBraidWord) -> Result<PureBraidWord> {
        a.multiply(b)
    }

    fn inv(&self, a: &PureBraidWord) -> PureBraidWord {
        a.inverse()
    }

    fn pow(&self, a: &PureBraidWord, e: i64) -> Result<PureBraidWord> {
        if let [(r, s, k)] = a.letters.as_slice() {
            return PureBraidWord::generator(self.strands, *r, *s, k * e);
        }
        let base = if e < 0 { a.inverse() } else { a.clone() };
        let mut acc = self.identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.multiply(&base)?;
        }
        Ok(acc)
    }

    fn atom(&self, cur: &mut Cursor<'_>) -> Result<Option<PureBraidWord>> {
        if !cur.eat('A') {
            return Ok(None);
        }
        cur.expect('(')?;
        let i = cur.integer()?;
        cur.expect(',')?;
        let j = cur.integer()?;
        cur.expect(')')?;
        if i < 1 || j < 1 {
            return Err(cur.error("braid indices start at 1"));
        }
        Ok(Some(PureBraidWord::generator(self.strands, i as usize, j as usize, 1)?))
    }
}

/// The combed form `β = β_2 ⋯ β_n`, with `factors[k-2] = β_k` a word of rank
/// `k-1` in the letters `A(1,k), …, A(k-1,k)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CombedForm {
    strands: usize,
    factors: Vec<Word>,
}

impl CombedForm {
    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn factors(&self) -> &[Word] {
        &self.factors
    }

    /// `β_k`.
    pub fn factor(&self, k: usize) -> &Word {
        &self.factors[k - 2]
    }

    pub fn to_braid(&self) -> PureBraidWord {
        let mut out = PureBraidWord::identity(self.strands);
        for (idx, w) in self.factors.iter().enumerate() {
            let part = PureBraidWord::from_kernel_word(self.strands, idx + 2, w).expect("kernel alphabet");
            out = out.multiply(&part).expect("same strands");
        }
        out
    }
}

impl fmt::Display for CombedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, w) in self.factors.iter().enumerate() {
            let k = idx + 2;
            let b = PureBraidWord::from_kernel_word(self.strands, k, w).expect("kernel alphabet");
            if idx > 0 {
                f.write_str("\n")?;
            }
            write!(f, "b{k} = {b}")?;
        }
        Ok(())
    }
}

/// Artin action of `σ_i` on `F_n`, with its inverse.
pub fn artin_sigma(i: usize, n: usize) -> Result<Automorphism> {
    if i == 0 || i >= n {
        return Err(Error::InvalidIndices(format!("σ_{i} on {n} strands")));
    }
    let rank = Rank::new(n)?;
    let x = |k: usize| Word::generator(rank, k).expect("index in range");
    let mut fwd = FreeEndo::identity(rank).images().to_vec();
    let mut inv = fwd.clone();
    fwd[i - 1] = &(&x(i) * &x(i + 1)) * &x(i).inverse();
    fwd[i] = x(i);
    inv[i - 1] = x(i + 1);
    inv[i] = &(&x(i + 1).inverse() * &x(i)) * &x(i + 1);
    Automorphism::new(FreeEndo::new(rank, fwd)?, FreeEndo::new(rank, inv)?)
}

/// `A(r,s)` as a word in `σ_i^{±1}`, e.g. `[(2,1),(1,2),(2,-1)]` for `A(1,3)`.
fn sigma_word(r: usize, s: usize) -> Vec<(usize, i64)> {
    let mut out: Vec<(usize, i64)> = (r + 1..s).rev().map(|i| (i, 1)).collect();
    out.push((r, 2));
    out.extend((r + 1..s).map(|i| (i, -1)));
    out
}

/// Artin action of `A(r,s)` on `F_n`, with its inverse.
pub fn artin_a(r: usize, s: usize, n: usize) -> Result<Automorphism> {
    if r == 0 || r >= s || s > n {
        return Err(Error::InvalidIndices(format!("A({r},{s}) on {n} strands")));
    }
    Ok(tables(n).a(r, s).clone())
}

/// Per-strand-count data computed once: the Artin images of the `A(r,s)`
/// and the conjugation action of braids on `n-1` strands on the kernel
/// `⟨A(1,n), …, A(n-1,n)⟩ ≅ F_{n-1}`.
struct Tables {
    n: usize,
    a: HashMap<(usize, usize), Automorphism>,
    /// `kernel[(r, s, ±1)]`: `K ↦ A(r,s)^{±1} K A(r,s)^{∓1}` on kernel words.
    kernel: HashMap<(usize, usize, i64), FreeEndo>,
}

impl Tables {
    fn a(&self, r: usize, s: usize) -> &Automorphism {
        &self.a[&(r, s)]
    }

    fn build(n: usize) -> Tables {
        let rank = Rank::new(n).expect("n >= 1");
        let sigmas: Vec<Automorphism> = (1..n).map(|i| artin_sigma(i, n).expect("valid")).collect();
        let sigma_pow = |i: usize, e: i64| sigmas[i - 1].pow(e);
        let mut a = HashMap::new();
        for s in 2..=n {
            for r in 1..s {
                let mut acc = Automorphism::identity(rank);
                for (i, e) in sigma_word(r, s) {
                    acc = acc.compose(&sigma_pow(i, e)).expect("same rank");
                }
                a.insert((r, s), acc);
            }
        }
        let mut t = Tables {
            n,
            a,
            kernel: HashMap::new(),
        };
        if n >= 3 {
            t.build_kernel_action(&sigmas);
        }
        t
    }

    /// Artin image of a kernel word, reading `x_k` as `A(k,n)`.
    fn kernel_aut(&self, w: &Word) -> Automorphism {
        let mut acc = Automorphism::identity(Rank::new(self.n).expect("n >= 1"));
        for s in w.syllables() {
            acc = acc.compose(&self.a(s.generator, self.n).pow(s.exponent)).expect("same rank");
        }
        acc
    }

    /// Finds, for each `σ_i^{±1}` with `i ≤ n-2`, the kernel word equal to
    /// `σ_i^{±1} A(k,n) σ_i^{∓1}`. The standard Artin formulas are tried
    /// first; otherwise all kernel words of length at most 3 are searched.
    /// Every entry is certified by equality of Artin images.
    fn build_kernel_action(&mut self, sigmas: &[Automorphism]) {
        let n = self.n;
        let krank = Rank::new(n - 1).expect("n >= 2");
        let gen = |k: usize| Word::generator(krank, k).expect("index in range");
        let candidates = short_words(krank, 3);
        let mut conj: HashMap<(usize, i64), FreeEndo> = HashMap::new();
        for i in 1..=n - 2 {
            for e in [1i64, -1] {
                let g = sigmas[i - 1].pow(e);
                let artin = artin_sigma(i, n - 1).expect("valid").pow(e);
                let mut images = Vec::with_capacity(n - 1);
                for k in 1..n {
                    let target = g
                        .compose(self.a(k, n))
                        .and_then(|t| t.compose(&g.inverse()))
                        .expect("same rank");
                    let guesses = [
                        artin.forward().image(k).clone(),
                        artin.inverse_endo().image(k).clone(),
                        gen(k),
                    ];
                    let found = guesses
                        .iter()
                        .chain(candidates.iter())
                        .find(|w| self.kernel_aut(w).forward() == target.forward())
                        .unwrap_or_else(|| panic!("no kernel word for the conjugate of A({k},{n}) by σ_{i}^{e}"))
                        .clone();
                    images.push(found);
                }
                conj.insert((i, e), FreeEndo::new(krank, images).expect("rank n-1"));
            }
        }
        for s in 2..n {
            for r in 1..s {
                for sign in [1i64, -1] {
                    // c_{gh} = c_g ∘ c_h, and A(r,s)⁻¹ reverses the σ word.
                    let mut word = sigma_word(r, s);
                    if sign < 0 {
                        word = word.into_iter().rev().map(|(i, e)| (i, -e)).collect();
                    }
                    let mut acc = FreeEndo::identity(krank);
                    for (i, e) in word {
                        for _ in 0..e.unsigned_abs() {
                            acc = acc.compose(&conj[&(i, e.signum())]).expect("same rank");
                        }
                    }
                    self.kernel.insert((r, s, sign), acc);
                }
            }
        }
    }
}

/// All reduced words of length `1..=max_len`, shortest first.
fn short_words(rank: Rank, max_len: usize) -> Vec<Word> {
    let letters: Vec<Word> = (1..=rank.get())
        .flat_map(|k| [1i64, -1].map(|e| Word::from_syllables(rank, [(k, e)]).expect("valid")))
        .collect();
    let mut layer = vec![Word::identity(rank)];
    let mut out = Vec::new();
    for len in 1..=max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in &letters {
                let v = w * l;
                if v.len() == len {
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn tables(n: usize) -> Arc<Tables> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Tables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("cache lock").get(&n) {
        return t.clone();
    }
    // Built outside the lock; a racing duplicate build is harmless.
    let built = Arc::new(Tables::build(n));
    cache
        .lock()
        .expect("cache lock")
        .entry(n)
        .or_insert(built)
        .clone()
}

/// The Artin automorphism `ρ(β)` of `F_n`, `n` the strand count.
pub fn braid_to_aut(beta: &PureBraidWord) -> Automorphism {
    let t = tables(beta.strands);
    let mut acc = Automorphism::identity(Rank::new(beta.strands).expect("n >= 2"));
    for &(r, s, e) in &beta.letters {
        acc = acc.compose(&t.a(r, s).pow(e)).expect("same rank");
    }
    acc
}

/// Equality of pure braids, decided through the faithful Artin action.
pub fn braids_equal(a: &PureBraidWord, b: &PureBraidWord) -> bool {
    a.strands == b.strands && braid_to_aut(a).forward() == braid_to_aut(b).forward()
}

/// The conjugation `K ↦ A(r,s)^e K A(r,s)^{-e}` on kernel words of the
/// `n`-strand group, `s < n`.
pub fn kernel_conjugation(n: usize, r: usize, s: usize, e: i64, k: &Word) -> Word {
    let t = tables(n);
    let c = &t.kernel[&(r, s, e.signum())];
    let mut out = k.clone();
    for _ in 0..e.unsigned_abs() {
        out = out.substitute_unchecked(out.rank(), c.images());
    }
    out
}

/// Combs a pure braid into `β_2 ⋯ β_n` with the default length budget.
pub fn comb(beta: &PureBraidWord) -> Result<CombedForm> {
    comb_with_budget(beta, DEFAULT_LENGTH_BUDGET)
}

/// Combs a pure braid: kernel letters `A(i,n)` are pushed right past every
/// other letter `ℓ` via `x ℓ = ℓ (ℓ⁻¹ x ℓ)`, then the prefix is combed on
/// one strand fewer. Fails once a kernel word outgrows `budget` letters.
pub fn comb_with_budget(beta: &PureBraidWord, budget: usize) -> Result<CombedForm> {
    let strands = beta.strands;
    let mut factors = vec![Word::identity(Rank::new(1).expect("1 > 0")); strands - 1];
    let mut current = beta.letters.clone();
    for n in (2..=strands).rev() {
        let krank = Rank::new(n - 1).expect("n >= 2");
        let mut kernel = Word::identity(krank);
        let mut prefix = Vec::with_capacity(current.len());
        for &(r, s, e) in &current {
            if s == n {
                kernel = &kernel * &Word::from_syllables(krank, [(r, e)])?;
            } else {
                prefix.push((r, s, e));
                if !kernel.is_identity() {
                    kernel = kernel_conjugation(n, r, s, -e, &kernel);
                }
            }
            if kernel.len() > budget {
                return Err(Error::BudgetExceeded(budget));
            }
        }
        factors[n - 2] = kernel;
        current = prefix;
    }
    Ok(CombedForm { strands, factors })
}

/// Γ-degree in `P_n` via the combed form: `min_k deg(β_k)`.
pub fn braid_gamma_degree(beta: &PureBraidWord, d: usize) -> Result<GammaDegree> {
    let combed = comb(beta)?;
    combed_gamma_degree(&combed, d)
}

pub fn combed_gamma_degree(combed: &CombedForm, d: usize) -> Result<GammaDegree> {
    let mut acc = FiltrationDegree::Infinite;
    for f in &combed.factors {
        acc = acc.min(gamma_degree(f, d)?);
    }
    Ok(acc)
}

/// Andreadakis degree of the Artin image.
pub fn braid_andreadakis_degree(beta: &PureBraidWord, d: usize) -> Result<AndreadakisDegree> {
    let t = tables(beta.strands);
    let inverses: HashMap<(usize, usize), Automorphism> = beta
        .letters
        .iter()
        .filter(|l| l.2 < 0)
        .map(|&(r, s, _)| ((r, s), t.a(r, s).inverse()))
        .collect();
    let letters: Vec<&FreeEndo> = beta
        .letters
        .iter()
        .flat_map(|&(r, s, e)| {
            let f = if e > 0 { t.a(r, s).forward() } else { inverses[&(r, s)].forward() };
            std::iter::repeat(f).take(e.unsigned_abs() as usize)
        })
        .collect();
    if letters.is_empty() {
        return Ok(FiltrationDegree::Infinite);
    }
    andreadakis_degree_of_composite(letters.iter().copied(), d)
}

/// The parallels: `w_i` with `ρ(β)(x_i) = w_i x_i w_i⁻¹`, `w_i` taken
/// reduced so it does not end in `x_i^{±1}`.
pub fn parallels(beta: &PureBraidWord) -> Result<Vec<Word>> {
    let aut = braid_to_aut(beta);
    aut.forward()
        .images()
        .iter()
        .enumerate()
        .map(|(idx, img)| split_conjugate(img, idx + 1))
        .collect()
}

fn split_conjugate(img: &Word, i: usize) -> Result<Word> {
    let letters: Vec<(usize, i64)> = img.letters().collect();
    let m = letters.len();
    if m % 2 == 0 || letters[m / 2] != (i, 1) {
        return Err(Error::NotConjugate { generator: i });
    }
    let a = &letters[..m / 2];
    let b = &letters[m / 2 + 1..];
    if !a.iter().zip(b.iter().rev()).all(|(p, q)| p.0 == q.0 && p.1 == -q.1) {
        return Err(Error::NotConjugate { generator: i });
    }
    Word::from_syllables(img.rank(), a.iter().copied())
}

/// Andreadakis degree read off the parallels: `min_i deg(w_i x_i^{-e_i})`
/// with `e_i` the exponent of `x_i` in `w_i`.
pub fn parallel_degree(beta: &PureBraidWord, d: usize) -> Result<AndreadakisDegree> {
    let mut acc = FiltrationDegree::Infinite;
    for (idx, w) in parallels(beta)?.iter().enumerate() {
        let i = idx + 1;
        let e = w.exponent_sum(i);
        let xi = Word::from_syllables(w.rank(), [(i, -e)])?;
        acc = acc.min(gamma_degree(&(w * &xi), d)?);
    }
    Ok(acc)
}

/// One of the commutator conventions a written relation may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CommutatorConvention {
    /// `[a,b] = a b a⁻¹ b⁻¹`.
    Left,
    /// `[a,b] = a⁻¹ b⁻¹ a b`.
    Right,
}

impl CommutatorConvention {
    pub const ALL: [CommutatorConvention; 2] = [CommutatorConvention::Left, CommutatorConvention::Right];

    pub fn apply(self, a: &PureBraidWord, b: &PureBraidWord) -> PureBraidWord {
        match self {
            CommutatorConvention::Left => a.commutator(b),
            CommutatorConvention::Right => a.inverse().commutator(&b.inverse()),
        }
        .expect("same strands")
    }
}

/// A reading of the relation table: the convention of the outer commutator
/// `[A_rs, x_i]`, of the commutators written in the tabulated words, and of
/// the nested `[x_r, x_s]` in the case `r < i < s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TableReading {
    pub outer: CommutatorConvention,
    pub inner: CommutatorConvention,
    pub nested: CommutatorConvention,
}

impl TableReading {
    pub fn all() -> impl Iterator<Item = TableReading> {
        use CommutatorConvention as C;
        C::ALL.into_iter().flat_map(|outer| {
            C::ALL.into_iter().flat_map(move |inner| {
                C::ALL.into_iter().map(move |nested| TableReading { outer, inner, nested })
            })
        })
    }
}

/// The tabulated value of `[A(r,s), x_i]` with `x_α = A(α,n)`, or `None`
/// outside the table's range `r < s < n`, `i < n`.
pub fn relation_table_rhs(n: usize, r: usize, s: usize, i: usize, reading: TableReading) -> Option<PureBraidWord> {
    if !(r >= 1 && r < s && s < n && i >= 1 && i < n) {
        return None;
    }
    let x = |a: usize| PureBraidWord::generator(n, a, n, 1).expect("valid");
    let c = |a: &PureBraidWord, b: &PureBraidWord| reading.inner.apply(a, b);
    Some(if s < i || i < r {
        PureBraidWord::identity(n)
    } else if s == i {
        c(&x(i).inverse(), &x(r).inverse())
    } else if r == i {
        c(&x(s).inverse(), &x(i))
    } else {
        c(&reading.nested.apply(&x(r), &x(s)).inverse(), &x(i))
    })
}

/// Checks every case of the table for `n` strands under `reading`,
/// returning the failing `(r, s, i)`.
pub fn relation_table_failures(n: usize, reading: TableReading) -> Vec<(usize, usize, usize)> {
    let mut failures = Vec::new();
    for s in 2..n {
        for r in 1..s {
            for i in 1..n {
                let rhs = relation_table_rhs(n, r, s, i, reading).expect("in range");
                let a = PureBraidWord::generator(n, r, s, 1).expect("valid");
                let x = PureBraidWord::generator(n, i, n, 1).expect("valid");
                let lhs = reading.outer.apply(&a, &x);
                if !braids_equal(&lhs, &rhs) {
                    failures.push((r, s, i));
                }
            }
        }
    }
    failures
}

/// The readings of the table under which every case holds for all strand
/// counts up to `max_n`.
pub fn calibrate_relation_table(max_n: usize) -> Vec<TableReading> {
    TableReading::all()
        .filter(|&reading| (3..=max_n).all(|n| relation_table_failures(n, reading).is_empty()))
        .collect()
}

/// A random braid word: a plain word in the `A(r,s)^{±1}` (half the
/// time), otherwise a commutator of short words, possibly nested.
pub fn random_braid<R: Rng>(rng: &mut R, strands: usize, max_len: usize) -> PureBraidWord {
    let letter = |rng: &mut R| {
        let s = rng.gen_range(2..=strands);
        let r = rng.gen_range(1..s);
        let e = if rng.gen_bool(0.5) { 1 } else { -1 };
        PureBraidWord::generator(strands, r, s, e).expect("valid")
    };
    let word = |rng: &mut R, len: usize| {
        let mut w = PureBraidWord::identity(strands);
        for _ in 0..len {
            w = w.multiply(&letter(rng)).expect("same strands");
        }
        w
    };
    match rng.gen_range(0..4) {
        0 | 1 => {
            let len = rng.gen_range(1..=max_len.max(1));
            word(rng, len)
        }
        2 => {
            let (la, lb) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let a = word(rng, la);
            let b = word(rng, lb);
            a.commutator(&b).expect("same strands")
        }
        _ => {
            let a = letter(rng);
            let b = letter(rng);
            let c = letter(rng);
            a.commutator(&b).and_then(|ab| ab.commutator(&c)).expect("same strands")
        }
    }
}
