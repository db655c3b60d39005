//! Seeded random elements for randomized property checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::laurent::LaurentPoly;
use super::ncpoly::{normal_order, NCPoly};
use super::word::{Generator, Word};

/// Environment variable holding the seed for randomized drivers.
pub const SEED_ENV: &str = "QDFS_SEED";

const DEFAULT_SEED: u64 = 0x5eed_0001;

/// Reads `QDFS_SEED` (decimal or `0x` hex); falls back to a fixed seed.
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| {
            let s = s.trim();
            match s.strip_prefix("0x") {
                Some(hex) => u64::from_str_radix(hex, 16).ok(),
                None => s.parse().ok(),
            }
        })
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng_from_env() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed_from_env())
}

pub fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word((0..len).map(|_| Generator::ALL[rng.gen_range(0..4)]).collect())
}

/// Small integer coefficient times `μ^k`, `|k| ≤ 2`.
pub fn random_coefficient<R: Rng>(rng: &mut R) -> LaurentPoly {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-3i64..=3);
    }
    LaurentPoly::from_integer(c).shift(rng.gen_range(-2..=2))
}

/// A sum of up to `max_terms` random words of length `≤ max_len`.
pub fn random_poly<R: Rng>(rng: &mut R, max_terms: usize, max_len: usize) -> NCPoly {
    let terms = rng.gen_range(1..=max_terms);
    let mut p = NCPoly::zero();
    for _ in 0..terms {
        p += &normal_order(&random_word(rng, max_len)).scale(&random_coefficient(rng));
    }
    p
}
