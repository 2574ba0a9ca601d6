//! Deterministic randomness source shared by every engine.
//!
//! A seeded xoshiro256** generator: the same seed always yields the same
//! stream, which is what makes the statistical suites and the verify
//! reports reproducible byte for byte. Not cryptographic.

/// Seeded pseudo-random source with the two primitives the engines need:
/// a uniform unit variate in `[0, 1)` and an unbiased integer in `[0, n)`.
///
/// Not `Copy`: duplicating the stream silently is almost always a bug.
/// Clone explicitly when a forked stream is really wanted.
#[derive(Debug, Clone)]
pub struct RandomSource {
    state: [u64; 4],
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        let mut s = seed;
        let state = [
            splitmix64(&mut s),
            splitmix64(&mut s),
            splitmix64(&mut s),
            splitmix64(&mut s),
        ];
        RandomSource { state }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform variate in `[0, 1)` with 53-bit resolution.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Unbiased uniform integer in `[0, n)`. Lemire's multiply-shift with
    /// rejection of the short lanes.
    ///
    /// # Panics
    /// Panics if `n == 0`.
    #[inline]
    pub fn below(&mut self, n: usize) -> usize {
        let n = n as u64;
        assert!(n >= 1, "below(n) requires n >= 1");
        let mut m = (self.next_u64() as u128) * (n as u128);
        let mut low = m as u64;
        if low < n {
            let threshold = n.wrapping_neg() % n;
            while low < threshold {
                m = (self.next_u64() as u128) * (n as u128);
                low = m as u64;
            }
        }
        (m >> 64) as usize
    }
}

/// Fold extra stream tags into a base seed. Used to hand independent,
/// reproducible substreams to benchmark cells and verification checks.
pub fn derive_seed(base: u64, tags: &[u64]) -> u64 {
    let mut acc = base;
    for &tag in tags {
        let mut s = acc ^ tag.wrapping_mul(GOLDEN_GAMMA);
        acc = splitmix64(&mut s);
    }
    acc
}
