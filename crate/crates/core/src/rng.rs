//! Seeded random streams.
//!
//! Every random quantity is drawn from a ChaCha20 stream keyed by a 64-bit
//! seed. ChaCha20 is counter based and exposes 2^64 independent streams per
//! key, so a worker handling trial `t` of experiment `e` uses
//! `stream(seed, substream(&[e, t]))` and never shares state with any other
//! worker. `substream` folds its path with SplitMix64 so that distinct paths
//! map to distinct stream ids with overwhelming probability.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::f64::consts::TAU;

pub type Stream = ChaCha20Rng;

/// Opens stream `stream_id` of the generator keyed by `seed`.
pub fn stream(seed: u64, stream_id: u64) -> Stream {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// Derives a stream id from a path of integers (experiment tag, trial index, ...).
pub fn substream(path: &[u64]) -> u64 {
    let mut h = 0x243f_6a88_85a3_08d3_u64;
    for &p in path {
        h = splitmix64(h ^ splitmix64(p));
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Standard complex Gaussian (E|ξ|² = 1) by Box–Muller on one uniform pair.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    // u1 in (0, 1] so the log is finite.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    Complex64::from_polar((-u1.ln()).sqrt(), TAU * u2)
}

/// Uniform point in the open disk of radius `r`.
pub fn uniform_in_disk<R: Rng + ?Sized>(rng: &mut R, r: f64) -> Complex64 {
    let u: f64 = rng.gen();
    let t: f64 = rng.gen();
    Complex64::from_polar(r * u.sqrt(), TAU * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| stream(7, 3).gen()).collect();
        let mut s = stream(7, 3);
        let b: Vec<u64> = (0..4).map(|_| s.gen()).collect();
        assert_eq!(a[0], b[0]);
        let mut t = stream(7, 4);
        assert_ne!(b[0], t.gen::<u64>());
        assert_ne!(substream(&[1, 2]), substream(&[2, 1]));
    }

    #[test]
    fn gaussian_moments() {
        let mut rng = stream(11, 0);
        let n = 200_000;
        let (mut m2, mut m1) = (0.0, Complex64::new(0.0, 0.0));
        for _ in 0..n {
            let z = complex_gaussian(&mut rng);
            m2 += z.norm_sqr();
            m1 += z;
        }
        assert!((m2 / n as f64 - 1.0).abs() < 0.01);
        assert!((m1 / n as f64).norm() < 0.01);
    }
}
