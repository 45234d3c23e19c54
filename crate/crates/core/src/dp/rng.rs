use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Seeded ChaCha stream with named substreams and a noise switch.
///
/// Every mechanism draws its noise through `gaussian` / `laplace`. Substreams
/// are derived from a label so adding a stage does not shift the draws of others.
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
    noise_off: bool,
}

fn fnv1a(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        SeededRng { seed, stream, inner, noise_off: false }
    }

    /// Independent stream identified by `label`, inheriting the noise switch.
    pub fn substream(&self, label: &str) -> SeededRng {
        let stream = splitmix(self.stream ^ fnv1a(label));
        let mut out = Self::with_stream(self.seed, stream);
        out.noise_off = self.noise_off;
        out
    }

    /// Same as `substream` with a numeric index appended to the label.
    pub fn substream_indexed(&self, label: &str, index: u64) -> SeededRng {
        let stream = splitmix(splitmix(self.stream ^ fnv1a(label)) ^ index);
        let mut out = Self::with_stream(self.seed, stream);
        out.noise_off = self.noise_off;
        out
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Zero-noise limit: every privacy draw returns 0 and halting thresholds vanish.
    #[cfg(any(test, feature = "noise-off"))]
    pub fn without_noise(mut self) -> Self {
        self.noise_off = true;
        self
    }

    pub fn noise_off(&self) -> bool {
        self.noise_off
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    /// Privacy noise N(0, std^2).
    pub fn gaussian(&mut self, std: f64) -> f64 {
        if self.noise_off {
            return 0.0;
        }
        std * self.standard_normal()
    }

    /// Privacy noise Lap(b) sampled by inverting the CDF.
    pub fn laplace(&mut self, b: f64) -> f64 {
        if self.noise_off {
            return 0.0;
        }
        let u = self.uniform() - 0.5;
        -b * u.signum() * (1.0 - 2.0 * u.abs()).ln()
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
