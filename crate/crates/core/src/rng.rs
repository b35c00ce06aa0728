//! Reproducible random streams.
//!
//! A stream is a `(seed, stream_id)` pair mapped onto ChaCha8 with the seed as
//! key and the stream id as the ChaCha stream selector. Child streams are
//! derived by mixing the parent id with a child index, so the numbers drawn
//! for chunk `k` of a batch never depend on how chunks are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub type LabRng = ChaCha8Rng;

/// Samples per independently seeded chunk in batch sampling.
pub const CHUNK_LEN: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    /// Root stream for a named job, so that results do not depend on the
    /// position of the job in a run.
    pub fn for_name(seed: u64, name: &str) -> Self {
        RngStream::new(seed, fnv1a(name.as_bytes()))
    }

    pub fn rng(&self) -> LabRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Deterministic child stream `k`.
    pub fn substream(&self, k: u64) -> RngStream {
        RngStream {
            seed: self.seed,
            stream_id: splitmix64(self.stream_id ^ splitmix64(k.wrapping_add(0x5851_f42d_4c95_7f2d))),
        }
    }
}

/// Draws `n` values, chunk `j` from `stream.substream(j)`, in parallel.
/// The output order and values are independent of the thread count.
pub fn sample_batch<T, F>(stream: RngStream, n: usize, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut LabRng) -> T + Sync,
{
    let chunks = n.div_ceil(CHUNK_LEN);
    let parts: Vec<Vec<T>> = (0..chunks)
        .into_par_iter()
        .map(|j| {
            let len = CHUNK_LEN.min(n - j * CHUNK_LEN);
            let mut rng = stream.substream(j as u64).rng();
            (0..len).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_stream_same_sequence() {
        let s = RngStream::new(42, 7);
        let (mut r1, mut r2) = (s.rng(), s.rng());
        let a: Vec<u64> = (0..16).map(|_| r1.random()).collect();
        let b: Vec<u64> = (0..16).map(|_| r2.random()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn distinct_streams_differ() {
        let mut a = RngStream::new(42, 7).rng();
        let mut b = RngStream::new(42, 8).rng();
        let mut c = RngStream::new(43, 7).rng();
        let x: u64 = a.random();
        assert_ne!(x, b.random::<u64>());
        assert_ne!(x, c.random::<u64>());
        let s = RngStream::new(1, 2);
        assert_ne!(s.substream(0), s.substream(1));
        assert_ne!(s.substream(0).stream_id, s.stream_id);
    }

    #[test]
    fn batch_is_thread_count_independent() {
        let s = RngStream::new(3, 11);
        let draw = |r: &mut LabRng| r.random::<f64>();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| sample_batch(s, 10_000, draw));
        let b = four.install(|| sample_batch(s, 10_000, draw));
        assert_eq!(a, b);
        assert_eq!(a.len(), 10_000);
    }

    #[test]
    fn independent_streams_are_uncorrelated() {
        let n = 200_000;
        let a = sample_batch(RngStream::new(5, 1), n, |r| r.random::<f64>() - 0.5);
        let b = sample_batch(RngStream::new(5, 2), n, |r| r.random::<f64>() - 0.5);
        let cov: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>() / n as f64;
        // sd of the product mean is (1/12)/sqrt(n) ≈ 1.9e-4
        assert!(cov.abs() < 1e-3, "{cov}");
    }
}
