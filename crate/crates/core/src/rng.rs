//! Seeded random streams. Every consumer draws from its own ChaCha stream so
//! that adding draws in one place never shifts another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const STREAM_POINTS: u64 = 1;
pub const STREAM_TEST_FIELDS: u64 = 2;
pub const STREAM_YAMABE: u64 = 3;
pub const STREAM_VECTORS: u64 = 4;

pub fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(id);
    r
}
