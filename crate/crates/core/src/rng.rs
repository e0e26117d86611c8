//! Seeded random streams.
//!
//! Every random quantity in the crate is drawn from ChaCha8 (`rand_chacha::ChaCha8Rng`).
//! A run is identified by a 64-bit seed; the seed is expanded into the 256-bit ChaCha key
//! with `SeedableRng::seed_from_u64`, and independent workers use disjoint ChaCha stream
//! ids on the same key. ChaCha is a counter-based generator, so a stream is fully
//! determined by `(seed, stream)` and produces the same values on every platform.
//!
//! Monte Carlo work is split into fixed-size trial ranges; range `r` always uses stream
//! `r`, which makes results independent of the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Trials per range. Fixed, because it is part of what makes results reproducible.
pub const TRIALS_PER_RANGE: u64 = 2048;

/// Generator for stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Splits `trials` into consecutive `(stream, first_trial, len)` ranges.
pub(crate) fn trial_ranges(trials: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut stream = 0;
    while start < trials {
        let len = TRIALS_PER_RANGE.min(trials - start);
        out.push((stream, start, len));
        start += len;
        stream += 1;
    }
    out
}
