//! Counter-based random numbers.
//!
//! Sample `i` of a stream keyed by `seed` is a pure function of `(seed, i)`,
//! so any partition of the index range across workers reproduces the same
//! samples. The mixer is the SplitMix64 finalizer applied to a Weyl
//! sequence, i.e. SplitMix64 evaluated at an arbitrary position.

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A keyed stream of 64-bit words addressable by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterRng {
    key: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        // decorrelate nearby seeds before they become Weyl offsets
        CounterRng {
            key: mix64(seed ^ 0x6a09_e667_f3bc_c908),
        }
    }

    /// Word number `index` of the stream.
    #[inline]
    pub fn word(&self, index: u64) -> u64 {
        mix64(self.key.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
    }

    /// Uniform double in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn unit(&self, index: u64) -> f64 {
        (self.word(index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform double in `[-1, 1)`.
    #[inline]
    pub fn symmetric(&self, index: u64) -> f64 {
        2.0 * self.unit(index) - 1.0
    }

    /// Standard normal variate built by Box-Muller from words `2 * index`
    /// and `2 * index + 1`.
    pub fn gaussian(&self, index: u64) -> f64 {
        // 1 - u lies in (0, 1], so the log is finite
        let u = 1.0 - self.unit(2 * index);
        let v = self.unit(2 * index + 1);
        libm::sqrt(-2.0 * libm::log(u)) * libm::cos(2.0 * core::f64::consts::PI * v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = CounterRng::new(42);
        let b = CounterRng::new(42);
        let c = CounterRng::new(43);
        for i in 0..100 {
            assert_eq!(a.word(i), b.word(i));
        }
        assert!((0..100).any(|i| a.word(i) != c.word(i)));
    }

    #[test]
    fn unit_moments() {
        let rng = CounterRng::new(7);
        let n = 200_000u64;
        let mean = (0..n).map(|i| rng.unit(i)).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.005);
        let bits = (0..n).map(|i| (rng.word(i) & 1) as f64).sum::<f64>() / n as f64;
        assert!((bits - 0.5).abs() < 0.005);
    }

    #[test]
    fn gaussian_moments() {
        let rng = CounterRng::new(1);
        let n = 200_000u64;
        let (mut s1, mut s2) = (0.0, 0.0);
        for i in 0..n {
            let z = rng.gaussian(i);
            s1 += z;
            s2 += z * z;
        }
        assert!((s1 / n as f64).abs() < 0.01);
        assert!((s2 / n as f64 - 1.0).abs() < 0.01);
    }
}
