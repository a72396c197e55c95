//! Seeded random generators for words and commutators.
//!
//! Every sampler takes an explicit RNG; per-sample RNGs come from
//! [`sample_rng`] so that serial and parallel runs draw identical data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::word::{Rank, Word};

/// Mixes a run seed and a sample index into an independent RNG stream.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_letter<R: Rng>(rng: &mut R, rank: Rank) -> Word {
    let g = rng.gen_range(1..=rank.get());
    let e = if rng.gen_bool(0.5) { 1 } else { -1 };
    Word::from_syllables(rank, [(g, e)]).expect("index in range")
}

/// A random reduced word with at most `max_len` letters (possibly shorter
/// after reduction).
pub fn random_word<R: Rng>(rng: &mut R, rank: Rank, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let mut w = Word::identity(rank);
    for _ in 0..len {
        w = &w * &random_letter(rng, rank);
    }
    w
}

/// A random nonidentity word of length at most `max_len`.
pub fn random_nontrivial_word<R: Rng>(rng: &mut R, rank: Rank, max_len: usize) -> Word {
    loop {
        let w = random_word(rng, rank, max_len.max(1));
        if !w.is_identity() {
            return w;
        }
    }
}

/// A left-normed commutator `[[..[y1, y2], ..], y_weight]` of short random
/// words; it lies in `Γ_weight` and is generically of exact degree `weight`.
/// Weight 1 gives a short random word.
pub fn random_commutator<R: Rng>(rng: &mut R, rank: Rank, weight: usize) -> Word {
    let entry = |rng: &mut R| {
        if rng.gen_bool(0.8) {
            random_letter(rng, rank)
        } else {
            random_nontrivial_word(rng, rank, 2)
        }
    };
    let mut acc = entry(rng);
    for _ in 1..weight {
        let y = entry(rng);
        acc = if rng.gen_bool(0.5) {
            acc.commutator(&y)
        } else {
            y.commutator(&acc)
        }
        .expect("same rank");
    }
    acc
}

/// A random element of `Γ_weight(F_rank)`: a short product of conjugated
/// commutators of weight `≥ weight`. Always the identity when the group is
/// abelian and `weight ≥ 2`.
pub fn random_lcs_element<R: Rng>(rng: &mut R, rank: Rank, weight: usize) -> Word {
    if rank.get() == 1 && weight >= 2 {
        return Word::identity(rank);
    }
    let factors = if rng.gen_bool(0.75) { 1 } else { 2 };
    let mut acc = Word::identity(rank);
    for _ in 0..factors {
        let extra = if rng.gen_bool(0.8) { 0 } else { 1 };
        let mut c = random_commutator(rng, rank, weight + extra);
        if rng.gen_bool(0.2) {
            c = c.conjugate(&random_letter(rng, rank)).expect("same rank");
        }
        acc = &acc * &c;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnus::gamma_degree;

    #[test]
    fn streams_are_reproducible() {
        let rank = Rank::new(3).unwrap();
        let a = random_word(&mut sample_rng(7, 3), rank, 10);
        let b = random_word(&mut sample_rng(7, 3), rank, 10);
        assert_eq!(a, b);
    }

    #[test]
    fn commutators_have_at_least_their_weight() {
        let rank = Rank::new(3).unwrap();
        for i in 0..200 {
            let mut rng = sample_rng(11, i);
            let weight = 1 + (i as usize % 4);
            let c = random_lcs_element(&mut rng, rank, weight);
            assert_ne!(gamma_degree(&c, 6).unwrap().at_least(weight), Some(false), "{c}");
        }
    }
}
