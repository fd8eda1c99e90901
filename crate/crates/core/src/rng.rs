//! Counter-based random numbers (Philox4x32-10).
//!
//! Every draw is a pure function of `(seed, trial, stream, index)`, so
//! Monte Carlo trials can run in any order or on any number of threads and
//! still produce identical results.

use core::f64::consts::PI;

const MUL0: u32 = 0xD251_1F53;
const MUL1: u32 = 0xCD9E_8D57;
const WEYL0: u32 = 0x9E37_79B9;
const WEYL1: u32 = 0xBB67_AE85;

/// The Philox4x32 bijection with 10 rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Philox4x32 {
    key: [u32; 2],
}

impl Philox4x32 {
    pub fn new(seed: u64) -> Self {
        Philox4x32 { key: [seed as u32, (seed >> 32) as u32] }
    }

    pub fn from_key(key: [u32; 2]) -> Self {
        Philox4x32 { key }
    }

    pub fn block(&self, mut ctr: [u32; 4]) -> [u32; 4] {
        let mut key = self.key;
        for round in 0..10 {
            if round > 0 {
                key[0] = key[0].wrapping_add(WEYL0);
                key[1] = key[1].wrapping_add(WEYL1);
            }
            let p0 = u64::from(MUL0) * u64::from(ctr[0]);
            let p1 = u64::from(MUL1) * u64::from(ctr[2]);
            ctr = [
                (p1 >> 32) as u32 ^ ctr[1] ^ key[0],
                p1 as u32,
                (p0 >> 32) as u32 ^ ctr[3] ^ key[1],
                p0 as u32,
            ];
        }
        ctr
    }
}

/// Sequential view of one `(seed, trial, stream)` substream.
#[derive(Debug, Clone)]
pub struct Substream {
    gen: Philox4x32,
    trial: u64,
    stream: u32,
    next_block: u32,
    buffer: [u32; 4],
    used: usize,
}

impl Substream {
    pub fn new(seed: u64, trial: u64, stream: u32) -> Self {
        Substream {
            gen: Philox4x32::new(seed),
            trial,
            stream,
            next_block: 0,
            buffer: [0; 4],
            used: 4,
        }
    }

    fn next_u32(&mut self) -> u32 {
        if self.used == 4 {
            let ctr = [self.trial as u32, (self.trial >> 32) as u32, self.stream, self.next_block];
            self.buffer = self.gen.block(ctr);
            self.next_block += 1;
            self.used = 0;
        }
        let v = self.buffer[self.used];
        self.used += 1;
        v
    }

    pub fn next_u64(&mut self) -> u64 {
        let lo = u64::from(self.next_u32());
        let hi = u64::from(self.next_u32());
        (hi << 32) | lo
    }

    /// Uniform in the open interval `(0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }

    /// Uniform integer in `[0, bound)`; `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        // Lemire's multiply-shift; the bias is below 2^-64 · bound.
        ((u128::from(self.next_u64()) * u128::from(bound)) >> 64) as u64
    }

    /// Pair of independent standard normals (Box-Muller).
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let (s, c) = libm::sincos(2.0 * PI * u2);
        (r * c, r * s)
    }

    /// Fills `out` with independent `N(0, sigma²)` values.
    pub fn fill_normal(&mut self, sigma: f64, out: &mut [f64]) {
        let mut chunks = out.chunks_exact_mut(2);
        for pair in &mut chunks {
            let (a, b) = self.normal_pair();
            pair[0] = sigma * a;
            pair[1] = sigma * b;
        }
        if let [last] = chunks.into_remainder() {
            *last = sigma * self.normal_pair().0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_answer_vectors() {
        // Random123 kat_vectors for philox4x32 with 10 rounds.
        let zero = Philox4x32::from_key([0, 0]).block([0; 4]);
        assert_eq!(zero, [0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8]);
        let ones = Philox4x32::from_key([u32::MAX; 2]).block([u32::MAX; 4]);
        assert_eq!(ones, [0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd]);
        let pi = Philox4x32::from_key([0xa4093822, 0x299f31d0])
            .block([0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344]);
        assert_eq!(pi, [0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1]);
    }

    #[test]
    fn substreams_are_reproducible_and_distinct() {
        let a: [u64; 4] = core::array::from_fn({
            let mut s = Substream::new(7, 3, 1);
            move |_| s.next_u64()
        });
        let b: [u64; 4] = core::array::from_fn({
            let mut s = Substream::new(7, 3, 1);
            move |_| s.next_u64()
        });
        assert_eq!(a, b);
        let mut other = Substream::new(7, 4, 1);
        assert_ne!(a[0], other.next_u64());
        let mut other = Substream::new(7, 3, 2);
        assert_ne!(a[0], other.next_u64());
    }

    #[test]
    fn normal_moments() {
        let mut s = Substream::new(11, 0, 0);
        let n = 200_000;
        let (mut m1, mut m2) = (0.0, 0.0);
        for _ in 0..n / 2 {
            let (a, b) = s.normal_pair();
            m1 += a + b;
            m2 += a * a + b * b;
        }
        let mean = m1 / n as f64;
        let var = m2 / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn below_stays_in_range() {
        let mut s = Substream::new(1, 2, 3);
        let mut seen = [0u32; 5];
        for _ in 0..5000 {
            seen[s.below(5) as usize] += 1;
        }
        assert!(seen.iter().all(|&c| c > 800));
    }
}
