//! Seeded random streams.
//!
//! Every search in the crate draws from a ChaCha stream keyed by the user
//! seed plus a per-purpose stream id, so independent restarts never share
//! state and results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream ids. The low 40 bits carry an index (restart, candidate, slice).
pub(crate) mod stream {
    pub const SPHERE: u64 = 1;
    pub const EXPR: u64 = 2;
    pub const HOMOGENEITY: u64 = 3;
    pub const NORM_RANDOM_START: u64 = 4;
    pub const NORM_ASCENT: u64 = 5;
    pub const BANACH_MAZUR: u64 = 6;
    pub const OCTA: u64 = 7;
    pub const PERTURB: u64 = 8;
    pub const ROUGH: u64 = 9;
    pub const FAMILY: u64 = 10;
}

pub fn seeded(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) fn indexed(seed: u64, purpose: u64, a: u64, b: u64) -> Rng {
    // purpose: 8 bits, a: 24 bits, b: 32 bits
    let stream = (purpose << 56) | ((a & 0xff_ffff) << 32) | (b & 0xffff_ffff);
    seeded(seed, stream)
}
