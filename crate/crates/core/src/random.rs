//! Deterministic randomness for genericity draws, seeded per thread.

use std::cell::Cell;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Field, FieldElem};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

thread_local! {
    static SEED: Cell<u64> = const { Cell::new(DEFAULT_SEED) };
    static DRAWS: Cell<u64> = const { Cell::new(0) };
}

/// Resets the stream; identical seeds give identical draw sequences.
pub fn set_seed(seed: u64) {
    SEED.with(|s| s.set(seed));
    DRAWS.with(|d| d.set(0));
}

pub fn seed() -> u64 {
    SEED.with(|s| s.get())
}

pub fn with_seed<T>(seed: u64, f: impl FnOnce() -> T) -> T {
    let (old_seed, old_draws) = (SEED.with(|s| s.get()), DRAWS.with(|d| d.get()));
    set_seed(seed);
    let out = f();
    SEED.with(|s| s.set(old_seed));
    DRAWS.with(|d| d.set(old_draws));
    out
}

/// A fresh generator; successive calls yield independent streams.
pub fn rng() -> ChaCha8Rng {
    let n = DRAWS.with(|d| {
        let n = d.get();
        d.set(n + 1);
        n
    });
    ChaCha8Rng::seed_from_u64(seed() ^ n.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Uniform over `GF(p)`, or a small integer in `[-bound, bound]` over `Q`.
pub fn field_elem(rng: &mut ChaCha8Rng, field: Field, bound: i64) -> FieldElem {
    match field {
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p as i64)),
        Field::Rational => field.from_i64(rng.gen_range(-bound..=bound)),
    }
}

pub fn nonzero_field_elem(rng: &mut ChaCha8Rng, field: Field, bound: i64) -> FieldElem {
    loop {
        let e = field_elem(rng, field, bound);
        if !e.is_zero() {
            return e;
        }
    }
}
