//! Acceptance suite: one PASS/FAIL line per criterion, exit status nonzero
//! if any criterion fails. Runs as a plain binary so the lines always show.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::Instant;

use andreadakis::braid::{
    braids_equal, calibrate_relation_table, comb, random_braid, relation_table_failures, CommutatorConvention,
    TableReading,
};
use andreadakis::dk::{braid_class_to_dk, dk_bracket, dk_dimension, dk_relations, generated_dimensions};
use andreadakis::harness::{run_verification, Target, VerificationConfig, VerificationReport};
use andreadakis::lie::{lyndon_words, witt_dimension};
use andreadakis::magnus::{expand, gamma_degree, leading_lie_class};
use andreadakis::sampling::{random_word, sample_rng};
use andreadakis::{DKElement, FiltrationDegree, LieElement, PureBraidWord, Rank, Word};
use num_bigint::BigInt;
use rand::Rng;

type Outcome = Result<String, String>;

fn rank(n: usize) -> Rank {
    Rank::new(n).unwrap()
}

fn check(ok: bool, pass: String, fail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(pass)
    } else {
        Err(fail())
    }
}

fn witt_enumeration() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 1..=4 {
        for k in 1..=7 {
            let listed = lyndon_words(n, k).len() as u128;
            if listed != witt_dimension(n, k) {
                bad.push((n, k, listed));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        bad.is_empty() && secs < 1.0,
        format!("Lyndon counts match the Witt formula, n <= 4, k <= 7, in {secs:.3} s"),
        || format!("mismatches {bad:?}, {secs:.3} s"),
    )
}

fn magnus() -> Outcome {
    let r = rank(3);
    let mut bad_mult = 0;
    for i in 0..1000 {
        let mut rng = sample_rng(11, i);
        let (u, v) = (random_word(&mut rng, r, 12), random_word(&mut rng, r, 12));
        let lhs = expand(&(&u * &v), 5).unwrap();
        let rhs = expand(&u, 5).unwrap().multiply(&expand(&v, 5).unwrap()).unwrap();
        if lhs != rhs {
            bad_mult += 1;
        }
    }
    // Every left-normed commutator of generators of length <= 5 whose Lie
    // bracket is nonzero.
    let (mut checked, mut bad_deg) = (0, Vec::new());
    for len in 2..=5usize {
        for code in 0..3usize.pow(len as u32) {
            let idx: Vec<usize> = (0..len).map(|p| (code / 3usize.pow(p as u32)) % 3 + 1).collect();
            let gen = |i: usize| Word::generator(r, i).unwrap();
            let lie = |i: usize| LieElement::generator(r, i).unwrap();
            let mut word = gen(idx[len - 1]);
            let mut bracket = lie(idx[len - 1]);
            for &i in idx[..len - 1].iter().rev() {
                word = gen(i).commutator(&word).unwrap();
                bracket = lie(i).bracket(&bracket).unwrap();
            }
            if bracket.is_zero() {
                continue;
            }
            checked += 1;
            let deg = gamma_degree(&word, 5).unwrap();
            if deg != FiltrationDegree::Finite(len) || leading_lie_class(&word, 5).unwrap() != bracket {
                bad_deg.push(idx);
            }
        }
    }
    check(
        bad_mult == 0 && bad_deg.is_empty(),
        format!("multiplicative on 1000 pairs; {checked} left-normed commutators have degree = length"),
        || format!("{bad_mult} multiplicativity failures; degree failures {bad_deg:?}"),
    )
}

type Poly = BTreeMap<Vec<u16>, BigInt>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (u, x) in a {
        for (v, y) in b {
            let mut w = u.clone();
            w.extend_from_slice(v);
            *out.entry(w).or_default() += x * y;
        }
    }
    out
}

fn poly_commutator(a: &Poly, b: &Poly) -> Poly {
    let mut out = poly_mul(a, b);
    for (w, c) in poly_mul(b, a) {
        *out.entry(w).or_default() -= c;
    }
    out.retain(|_, c| *c != BigInt::from(0));
    out
}

/// Standard bracketing of a Lyndon word expanded in the free associative
/// ring, with the split at the longest proper Lyndon suffix.
fn lyndon_polynomial(w: &[u16]) -> Poly {
    if w.len() == 1 {
        return Poly::from([(w.to_vec(), BigInt::from(1))]);
    }
    let is_lyndon = |s: &[u16]| (1..s.len()).all(|k| s < &s[k..]);
    let split = (1..w.len()).find(|&k| is_lyndon(&w[k..])).unwrap();
    poly_commutator(&lyndon_polynomial(&w[..split]), &lyndon_polynomial(&w[split..]))
}

fn lie_bracket_oracle() -> Outcome {
    let (mut pairs, mut bad) = (0, Vec::new());
    for n in 1..=3 {
        let r = rank(n);
        let basis: Vec<Vec<u16>> = (1..=4).flat_map(|k| lyndon_words(n, k)).collect();
        for u in &basis {
            for v in basis.iter().filter(|v| u.len() + v.len() <= 5) {
                pairs += 1;
                let bu = LieElement::basis_element(r, u.clone()).unwrap();
                let bv = LieElement::basis_element(r, v.clone()).unwrap();
                let got: Poly = bu.bracket(&bv).unwrap().to_polynomial().into_iter().collect();
                let want = poly_commutator(&lyndon_polynomial(u), &lyndon_polynomial(v));
                if got != want {
                    bad.push((n, u.clone(), v.clone()));
                }
            }
        }
    }
    check(
        bad.is_empty(),
        format!("{pairs} basis pairs agree with the associative embedding"),
        || format!("disagreements {bad:?}"),
    )
}

struct Campaign {
    determinate: u64,
    failed: u64,
    degrees: BTreeSet<String>,
}

fn campaign(target: Target, ns: &[usize], samples: u64, d: usize) -> Campaign {
    let mut c = Campaign {
        determinate: 0,
        failed: 0,
        degrees: BTreeSet::new(),
    };
    for &n in ns {
        let report: VerificationReport =
            run_verification(&VerificationConfig::new(target, n, d, samples, 2024 + n as u64)).unwrap();
        // Identity samples agree trivially and are not counted.
        for (deg, count) in &report.degree_histogram {
            if deg != "infinite" {
                c.determinate += count;
                c.degrees.insert(deg.clone());
            }
        }
        c.failed += report.failed;
        for f in report.failures() {
            eprintln!("  {target} n={n} #{}: {} {:?}", f.index, f.input, f.detail);
        }
    }
    c
}

fn equality_campaign(target: Target, ns: &[usize], samples: u64, min: u64, degrees: &[&str]) -> Outcome {
    let c = campaign(target, ns, samples, 5);
    let spans = degrees.iter().all(|d| c.degrees.contains(*d));
    check(
        c.failed == 0 && c.determinate >= min && spans,
        format!(
            "{} determinate samples over n = {ns:?}, degrees {:?}, 0 failures",
            c.determinate, c.degrees
        ),
        || format!("{} failures, {} determinate, degrees {:?}", c.failed, c.determinate, c.degrees),
    )
}

/// The three generators and their inverses of the 3-strand pure braid group.
fn p3_letters() -> Vec<PureBraidWord> {
    let mut out = Vec::new();
    for (r, s) in [(1, 2), (1, 3), (2, 3)] {
        for e in [1, -1] {
            out.push(PureBraidWord::generator(3, r, s, e).unwrap());
        }
    }
    out
}

fn comb_faithfulness() -> Outcome {
    let mut bad_round_trip = 0;
    for i in 0..1000 {
        let mut rng = sample_rng(7, i);
        let n = rng.gen_range(3..=5);
        let beta = random_braid(&mut rng, n, 12);
        if !braids_equal(&comb(&beta).unwrap().to_braid(), &beta) {
            bad_round_trip += 1;
        }
    }
    // Exhaustive words of length <= 3: equal normal forms must give equal
    // automorphisms and distinct normal forms distinct ones.
    let letters = p3_letters();
    let mut words = vec![PureBraidWord::identity(3)];
    let mut frontier = words.clone();
    for _ in 0..3 {
        frontier = frontier
            .iter()
            .flat_map(|w| letters.iter().map(move |l| w.multiply(l).unwrap()))
            .collect();
        words.extend(frontier.iter().cloned());
    }
    let mut by_form: HashMap<String, String> = HashMap::new();
    let mut by_aut: HashMap<String, String> = HashMap::new();
    let mut conflicts = 0;
    for w in &words {
        let form = comb(w).unwrap().to_string();
        let aut = andreadakis::braid::braid_to_aut(w).forward().to_string();
        if by_form.entry(form.clone()).or_insert_with(|| aut.clone()) != &aut {
            conflicts += 1;
        }
        if by_aut.entry(aut).or_insert_with(|| form.clone()) != &form {
            conflicts += 1;
        }
    }
    check(
        bad_round_trip == 0 && conflicts == 0,
        format!(
            "1000 round trips; {} words of length <= 3 give {} braids and as many automorphisms",
            words.len(),
            by_form.len()
        ),
        || format!("{bad_round_trip} round-trip failures, {conflicts} conflicts"),
    )
}

fn relation_table() -> Outcome {
    use CommutatorConvention::{Left, Right};
    let valid = calibrate_relation_table(5);
    let chosen = TableReading {
        outer: Left,
        inner: Left,
        nested: Right,
    };
    let failures: usize = (3..=5).map(|n| relation_table_failures(n, chosen).len()).sum();
    let cases: usize = (3..=5).map(|n| (n - 1) * (n - 2) / 2 * (n - 1)).sum();
    check(
        failures == 0 && valid.contains(&chosen),
        format!("{cases} cases hold for n <= 5; {} consistent reading(s)", valid.len()),
        || format!("{failures} failing cases; consistent readings {valid:?}"),
    )
}

fn random_dk<R: Rng>(rng: &mut R, n: usize) -> DKElement {
    let gen = |rng: &mut R| {
        let j = rng.gen_range(2..=n);
        DKElement::generator(n, rng.gen_range(1..j), j).unwrap()
    };
    let mut acc = gen(rng);
    for _ in 0..rng.gen_range(0..3) {
        let g = gen(rng);
        acc = dk_bracket(&g, &acc).unwrap();
    }
    let other = gen(rng);
    acc.add(&other.scale(rng.gen_range(-2..=2))).unwrap()
}

fn short_braid<R: Rng>(rng: &mut R, n: usize) -> PureBraidWord {
    let letter = |rng: &mut R| {
        let s = rng.gen_range(2..=n);
        let e = if rng.gen_bool(0.5) { 1 } else { -1 };
        PureBraidWord::generator(n, rng.gen_range(1..s), s, e).unwrap()
    };
    if rng.gen_bool(0.5) {
        letter(rng)
    } else {
        letter(rng).commutator(&letter(rng)).unwrap()
    }
}

fn drinfeld_kohno() -> Outcome {
    let relations_ok = (2..=6).all(|n| dk_relations(n).iter().all(|(_, r)| r.is_zero()));
    let mut jacobi_bad = 0;
    for i in 0..1000 {
        let mut rng = sample_rng(5, i);
        let n = rng.gen_range(3..=5);
        let (a, b, c) = (random_dk(&mut rng, n), random_dk(&mut rng, n), random_dk(&mut rng, n));
        let br = |x: &DKElement, y: &DKElement| dk_bracket(x, y).unwrap();
        let j = br(&a, &br(&b, &c)).add(&br(&b, &br(&c, &a))).unwrap().add(&br(&c, &br(&a, &b))).unwrap();
        if !j.is_zero() {
            jacobi_bad += 1;
        }
    }
    let mut dim_bad = Vec::new();
    for n in 2..=5 {
        let expected: Vec<usize> = (1..=5usize)
            .map(|k| {
                if k == 1 {
                    n * (n - 1) / 2
                } else {
                    (2..=n).map(|m| witt_dimension(m - 1, k) as usize).sum()
                }
            })
            .collect();
        let formula: Vec<usize> = (1..=5).map(|k| dk_dimension(n, k) as usize).collect();
        let generated = generated_dimensions(n, 5);
        if expected != formula || expected != generated {
            dim_bad.push((n, expected, generated));
        }
    }
    let (mut compared, mut compat_bad, mut i) = (0, 0, 0u64);
    while compared < 100 && i < 10_000 {
        let mut rng = sample_rng(9, i);
        i += 1;
        let n = rng.gen_range(3..=5);
        let (x, y) = (short_braid(&mut rng, n), short_braid(&mut rng, n));
        let (Ok(cx), Ok(cy)) = (braid_class_to_dk(&x, 6), braid_class_to_dk(&y, 6)) else {
            continue;
        };
        let expected = dk_bracket(&cx, &cy).unwrap();
        if expected.is_zero() {
            continue;
        }
        compared += 1;
        if braid_class_to_dk(&x.commutator(&y).unwrap(), 6).unwrap() != expected {
            compat_bad += 1;
        }
    }
    check(
        relations_ok && jacobi_bad == 0 && dim_bad.is_empty() && compared == 100 && compat_bad == 0,
        "relations vanish n <= 6; Jacobi on 1000 triples; dimensions n <= 5, k <= 5; 100 bracket-compatible pairs"
            .into(),
        || {
            format!(
                "relations {relations_ok}, {jacobi_bad} Jacobi failures, dimensions {dim_bad:?}, \
                 {compat_bad}/{compared} compatibility failures"
            )
        },
    )
}

fn word_lemma() -> Outcome {
    let report = run_verification(&VerificationConfig::new(Target::WordLemma, 3, 6, 200, 31)).unwrap();
    check(
        report.passed == 200,
        "predicted exponent found in all 200 instances at D = 6".into(),
        || format!("{} failures, {} indeterminate", report.failed, report.indeterminate),
    )
}

fn disjointness() -> Outcome {
    // Samples cycle through IA kernel, IA complement, braid kernel, braid
    // complement; 800 samples give 200 of each.
    let report = run_verification(&VerificationConfig::new(Target::Disjointness, 3, 5, 800, 17)).unwrap();
    let larger = run_verification(&VerificationConfig::new(Target::Disjointness, 4, 5, 200, 17)).unwrap();
    check(
        report.passed == 800 && larger.passed == 200,
        "200 kernel and complement samples per decomposition at n = 3, 50 each at n = 4".into(),
        || {
            format!(
                "{} + {} failures, {} + {} indeterminate",
                report.failed, larger.failed, report.indeterminate, larger.indeterminate
            )
        },
    )
}

fn strong_centrality() -> Outcome {
    let report = run_verification(&VerificationConfig::new(Target::StrongCentrality, 3, 6, 200, 13)).unwrap();
    check(
        report.failed == 0 && report.passed >= 190,
        format!(
            "{} of 200 witness pairs at n = 3 determinate: degree of [sigma, tau] >= p + q",
            report.passed
        ),
        || format!("{} failures, {} indeterminate", report.failed, report.indeterminate),
    )
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("witt dimensions", witt_enumeration),
        ("magnus expansion", magnus),
        ("free lie bracket", lie_bracket_oracle),
        ("triangular equality", || {
            equality_campaign(Target::Triangular, &[2, 3, 4], 200, 500, &["1", "2", "3", "4"])
        }),
        ("mccool equality", || {
            equality_campaign(Target::Mccool, &[2, 3, 4], 200, 500, &["1", "2", "3", "4"])
        }),
        ("pure braid equality", || {
            equality_campaign(Target::Braid, &[3, 4, 5], 120, 300, &["1", "2", "3"])
        }),
        ("combing and faithfulness", comb_faithfulness),
        ("relation table", relation_table),
        ("drinfeld-kohno ring", drinfeld_kohno),
        ("word lemma", word_lemma),
        ("disjointness probes", disjointness),
        ("strong centrality", strong_centrality),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({secs:.1} s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} ({secs:.1} s)", i + 1);
            }
        }
    }
    println!("{} of 12 criteria pass", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
