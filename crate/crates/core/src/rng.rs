//! Counter-based random streams.
//!
//! Every stochastic computation in the crate draws from a stream identified
//! by `(base_seed, domain, index)`. Streams are independent ChaCha8 streams,
//! so work can be split across threads in any order and still reproduce the
//! serial result bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// Domain tags separating the stream families drawn from one base seed.
pub mod domain {
    pub const SPREAD: u64 = 1;
    pub const LDAG_GAME: u64 = 2;
    pub const LAZY_GREEDY: u64 = 3;
    pub const SINGLE: u64 = 4;
}

fn mix(mut z: u64) -> u64 {
    // splitmix64 finalizer
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The `index`-th stream of `domain` under `base_seed`.
pub fn stream(base_seed: u64, domain: u64, index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(base_seed ^ mix(domain)));
    rng.set_stream(index);
    rng
}

/// Derives a child base seed, e.g. for one `(node, round)` evaluation.
pub fn derive_seed(base_seed: u64, a: u64, b: u64) -> u64 {
    mix(mix(base_seed ^ mix(a)) ^ b)
}
