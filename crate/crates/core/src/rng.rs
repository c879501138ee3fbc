//! Seeded random streams.
//!
//! A [`RandomStream`] is a ChaCha8 keystream: the state is a key plus a block
//! counter, so a stream is fully determined by its seed and the number of
//! words drawn. Independent per-trial streams come from [`derive_seed`].

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Real;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for child stream `index` of `master`. Distinct indices give
/// statistically independent streams; the mapping is stable across
/// platforms and releases.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ splitmix64(index.wrapping_mul(GOLDEN_GAMMA).wrapping_add(1)))
}

/// Owned, single-consumer random stream.
#[derive(Clone, Debug)]
pub struct RandomStream {
    inner: ChaCha8Rng,
}

impl RandomStream {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Child stream for `(master, index)`; see [`derive_seed`].
    pub fn child(master: u64, index: u64) -> Self {
        Self::from_seed(derive_seed(master, index))
    }

    /// Uniform draw on the open interval (0, 1).
    #[inline]
    pub fn open01<T: Real>(&mut self) -> T {
        // 53 random bits shifted by half an ulp keeps both endpoints out.
        let bits = self.inner.next_u64() >> 11;
        let u = T::lit((bits as f64 + 0.5) * (1.0 / (1u64 << 53) as f64));
        // narrowing to f32 can round up to exactly 1
        if u < T::one() {
            u
        } else {
            T::one() - T::epsilon()
        }
    }

    /// Uniform index in `0..n`. `n` must be positive.
    #[inline]
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    /// `amount` distinct elements of `pool`, uniformly without replacement.
    pub fn sample_without_replacement(&mut self, pool: &[usize], amount: usize) -> Vec<usize> {
        rand::seq::index::sample(&mut self.inner, pool.len(), amount)
            .into_iter()
            .map(|i| pool[i])
            .collect()
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}
