//! The Drinfeld–Kohno Lie ring `p_n`, stored in its iterated semidirect
//! normal form `p_n = 𝔏(t_{12}) ⋉ 𝔏(t_{13}, t_{23}) ⋉ ⋯ ⋉ 𝔏(t_{1n}, …, t_{n-1,n})`.
//!
//! Component `k` is a free Lie ring on `t(1,k), …, t(k-1,k)`, with `t(i,k)`
//! stored as the letter `x_i`. A generator `t(r,s)` with `s < k` acts on
//! component `k` by the derivation
//! `t(i,k) ↦ 0` for `i ∉ {r,s}`, `t(r,k) ↦ [t(r,k), t(s,k)]`,
//! `t(s,k) ↦ [t(s,k), t(r,k)]`,
//! and brackets of generators act by commutators of derivations.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::braid::{comb, PureBraidWord};
use crate::degree::FiltrationDegree;
use crate::error::{Error, Result};
use crate::expr::{self, Cursor, LieSyntax};
use crate::lie::{apply_leibniz, standard_factorization, witt_dimension, LieElement, Letters};
use crate::magnus::{gamma_degree, leading_lie_class};
use crate::word::Rank;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DKElement {
    n: usize,
    comps: Vec<LieElement>,
}

fn comp_rank(k: usize) -> Rank {
    Rank::new(k - 1).expect("k >= 2")
}

impl DKElement {
    pub fn zero(n: usize) -> DKElement {
        DKElement {
            n,
            comps: (2..=n).map(|k| LieElement::zero(comp_rank(k))).collect(),
        }
    }

    /// `t(i,j)`, normalised so that `t(j,i) = t(i,j)`.
    pub fn generator(n: usize, i: usize, j: usize) -> Result<DKElement> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        if a == b || a == 0 || b > n {
            return Err(Error::InvalidIndices(format!("t({i},{j}) with n = {n}")));
        }
        let mut out = DKElement::zero(n);
        out.comps[b - 2] = LieElement::generator(comp_rank(b), a)?;
        Ok(out)
    }

    /// Places a Lie element over `t(1,k), …, t(k-1,k)` in component `k`.
    pub fn from_component(n: usize, k: usize, e: LieElement) -> Result<DKElement> {
        if k < 2 || k > n {
            return Err(Error::InvalidIndices(format!("component {k} with n = {n}")));
        }
        let e = e.with_rank(comp_rank(k))?;
        let mut out = DKElement::zero(n);
        out.comps[k - 2] = e;
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Component `k`, `2 ≤ k ≤ n`.
    pub fn component(&self, k: usize) -> &LieElement {
        &self.comps[k - 2]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(LieElement::is_zero)
    }

    fn check(&self, other: &DKElement) -> Result<()> {
        if self.n != other.n {
            return Err(Error::RankMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &DKElement) -> Result<DKElement> {
        self.check(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(DKElement { n: self.n, comps })
    }

    pub fn sub(&self, other: &DKElement) -> Result<DKElement> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i64) -> DKElement {
        DKElement {
            n: self.n,
            comps: self.comps.iter().map(|a| a.scale(&BigInt::from(c))).collect(),
        }
    }

    /// The bracket degree if the element is homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.comps.iter().flat_map(LieElement::degrees);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Coordinates `((k, Lyndon word), coefficient)` in the normal-form basis.
    pub fn coordinates(&self) -> Vec<((usize, Letters), BigInt)> {
        self.comps
            .iter()
            .enumerate()
            .flat_map(|(idx, c)| c.terms().map(move |(w, v)| ((idx + 2, w.clone()), v.clone())))
            .collect()
    }

    /// Parses `[t(1,2),t(1,3)] + 2*t(2,3)`.
    pub fn parse(n: usize, src: &str) -> Result<DKElement> {
        if n < 2 {
            return Err(Error::Config("the Drinfeld-Kohno ring needs n >= 2".into()));
        }
        expr::parse_lie(&DKParser { n }, src)
    }
}

struct DKParser {
    n: usize,
}

impl LieSyntax for DKParser {
    type Elem = DKElement;

    fn zero(&self) -> DKElement {
        DKElement::zero(self.n)
    }

    fn add_scaled(&self, acc: &mut DKElement, x: &DKElement, c: i64) {
        *acc = acc.add(&x.scale(c)).expect("same n");
    }

    fn bracket(&self, a: &DKElement, b: &DKElement) -> Result<DKElement> {
        dk_bracket(a, b)
    }

    fn generator(&self, cur: &mut Cursor<'_>) -> Result<Option<DKElement>> {
        if !cur.eat('t') {
            return Ok(None);
        }
        cur.expect('(')?;
        let i = cur.integer()?;
        cur.expect(',')?;
        let j = cur.integer()?;
        cur.expect(')')?;
        if i < 1 || j < 1 {
            return Err(cur.error("indices start at 1"));
        }
        DKElement::generator(self.n, i as usize, j as usize).map(Some)
    }
}

fn t_bracketing(w: &[u16], k: usize) -> String {
    if w.len() == 1 {
        return format!("t({},{k})", w[0]);
    }
    let (u, v) = standard_factorization(w);
    format!("[{},{}]", t_bracketing(u, k), t_bracketing(v, k))
}

impl fmt::Display for DKElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for ((k, w), c) in self.coordinates() {
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if mag != BigInt::from(1) {
                write!(f, "{mag}*")?;
            }
            f.write_str(&t_bracketing(&w, k))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `δ_{rs}` on component `q > s`, applied to `y`.
fn delta(r: usize, s: usize, q: usize, y: &LieElement) -> LieElement {
    let rank = comp_rank(q);
    let g = |i: usize| LieElement::generator(rank, i).expect("index in range");
    let on_generator = |i: usize| {
        if i == r {
            g(r).bracket(&g(s)).expect("same rank")
        } else if i == s {
            g(s).bracket(&g(r)).expect("same rank")
        } else {
            LieElement::zero(rank)
        }
    };
    let mut out = LieElement::zero(rank);
    for (w, c) in y.terms() {
        out.add_scaled_assign(&apply_leibniz(rank, w, &on_generator), c);
    }
    out
}

/// Action of the basis element `w` of component `p` on `y` in component `q > p`:
/// `ad_{[u,v]} = ad_u ad_v − ad_v ad_u`.
fn act_basis(p: usize, w: &[u16], q: usize, y: &LieElement) -> LieElement {
    if y.is_zero() {
        return y.clone();
    }
    if w.len() == 1 {
        return delta(w[0] as usize, p, q, y);
    }
    let (u, v) = standard_factorization(w);
    let uv = act_basis(p, u, q, &act_basis(p, v, q, y));
    let vu = act_basis(p, v, q, &act_basis(p, u, q, y));
    uv.sub(&vu).expect("same rank")
}

fn act(p: usize, a: &LieElement, q: usize, y: &LieElement) -> LieElement {
    let mut out = LieElement::zero(comp_rank(q));
    for (w, c) in a.terms() {
        out.add_scaled_assign(&act_basis(p, w, q, y), c);
    }
    out
}

/// The Lie bracket of `p_n`.
pub fn dk_bracket(a: &DKElement, b: &DKElement) -> Result<DKElement> {
    a.check(b)?;
    let n = a.n;
    let mut out = DKElement::zero(n);
    for p in 2..=n {
        let ap = a.component(p);
        if ap.is_zero() {
            continue;
        }
        for q in 2..=n {
            let bq = b.component(q);
            if bq.is_zero() {
                continue;
            }
            use std::cmp::Ordering::*;
            let (k, term) = match p.cmp(&q) {
                Equal => (p, ap.bracket(bq)?),
                Less => (q, act(p, ap, q, bq)),
                Greater => (p, act(q, bq, p, ap).scale(&BigInt::from(-1))),
            };
            out.comps[k - 2] = out.comps[k - 2].add(&term)?;
        }
    }
    Ok(out)
}

/// Rank of the degree-`k` part of `p_n`: `Σ_{m=2}^{n} witt(m-1, k)`.
pub fn dk_dimension(n: usize, k: usize) -> u128 {
    (2..=n).map(|m| witt_dimension(m - 1, k)).sum()
}

/// The defining relations of `p_n`, each of which must bracket to zero:
/// `[t_ij, t_ik + t_kj]` for distinct `i, j, k` and `[t_ij, t_kl]` for
/// disjoint pairs.
pub fn dk_relations(n: usize) -> Vec<(String, DKElement)> {
    let t = |i: usize, j: usize| DKElement::generator(n, i, j).expect("valid");
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i == j || j == k || i == k {
                    continue;
                }
                let rel = dk_bracket(&t(i, j), &t(i, k).add(&t(k, j)).expect("same n")).expect("same n");
                out.push((format!("[t({i},{j}), t({i},{k}) + t({k},{j})]"), rel));
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in 1..=n {
                for l in k + 1..=n {
                    if [k, l].iter().any(|x| *x == i || *x == j) {
                        continue;
                    }
                    let rel = dk_bracket(&t(i, j), &t(k, l)).expect("same n");
                    out.push((format!("[t({i},{j}), t({k},{l})]"), rel));
                }
            }
        }
    }
    out
}

/// Ranks of the degree-`1..=kmax` parts of the Lie subring generated by the
/// `t(i,j)`, computed by closing under brackets with generators. Ranks are
/// taken modulo a large prime, which can only undercount; equality with
/// [`dk_dimension`] therefore certifies generation exactly.
pub fn generated_dimensions(n: usize, kmax: usize) -> Vec<usize> {
    let gens: Vec<DKElement> = (2..=n)
        .flat_map(|j| (1..j).map(move |i| DKElement::generator(n, i, j).expect("valid")))
        .collect();
    let mut dims = Vec::new();
    let mut layer = {
        let mut e = crate::linalg::ModEchelon::new();
        gens.iter().filter(|g| e.insert(&g.coordinates())).cloned().collect::<Vec<_>>()
    };
    for k in 1..=kmax {
        dims.push(layer.len());
        if k == kmax {
            break;
        }
        let mut e = crate::linalg::ModEchelon::new();
        let mut next = Vec::new();
        for g in &gens {
            for v in &layer {
                let b = dk_bracket(g, v).expect("same n");
                if e.insert(&b.coordinates()) {
                    next.push(b);
                }
            }
        }
        layer = next;
    }
    dims
}

/// The class of a pure braid in `p_n`: with `k` its Γ-degree, the sum over
/// combed factors `β_m` of degree `k` of their leading Lie classes, read
/// with `A(i,m) ↦ t(i,m)`.
pub fn braid_class_to_dk(beta: &PureBraidWord, d: usize) -> Result<DKElement> {
    let n = beta.strands();
    let combed = comb(beta)?;
    let mut degrees = HashMap::new();
    let mut k = FiltrationDegree::Infinite;
    for m in 2..=n {
        let deg = gamma_degree(combed.factor(m), d)?;
        degrees.insert(m, deg);
        k = k.min(deg);
    }
    let k = match k {
        FiltrationDegree::Finite(k) => k,
        FiltrationDegree::Infinite => return Err(Error::IdentityInput),
        FiltrationDegree::AtLeast(_) => return Err(Error::DegreeUndetermined { truncation: d }),
    };
    let mut out = DKElement::zero(n);
    for m in 2..=n {
        if degrees[&m] == FiltrationDegree::Finite(k) {
            out.comps[m - 2] = leading_lie_class(combed.factor(m), d)?;
        }
    }
    Ok(out)
}
