//! Portable seeded pseudo-random generator.
//!
//! Seeds are expanded with SplitMix64 and the stream is produced by
//! xorshift64* (Marsaglia shifts 12/25/27, multiplier
//! `0x2545F4914F6CDD1D`). Both are fully specified here so that any
//! implementation reproduces the exact same sequence:
//!
//! ```text
//! splitmix64(x):  x += 0x9E3779B97F4A7C15
//!                 z = x
//!                 z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!                 z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!                 return z ^ (z >> 31)
//!
//! next():         s ^= s >> 12; s ^= s << 25; s ^= s >> 27
//!                 return s * 0x2545F4914F6CDD1D      (wrapping)
//! ```
//!
//! `ShiftRng::new(seed)` sets the state to `splitmix64(seed)` (replaced by
//! `0x9E3779B97F4A7C15` if that is zero). `split(stream)` derives an
//! independent child seeded with `splitmix64(seed ^ splitmix64(stream))`.
//! `below(n)` uses rejection sampling on the top of the 64-bit range so it
//! is exactly uniform.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(GOLDEN);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftRng {
    seed: u64,
    state: u64,
}

impl ShiftRng {
    pub fn new(seed: u64) -> Self {
        let mut state = splitmix64(seed);
        if state == 0 {
            state = GOLDEN;
        }
        ShiftRng { seed, state }
    }

    /// Child generator for an independent sub-stream.
    pub fn split(&self, stream: u64) -> Self {
        ShiftRng::new(self.seed ^ splitmix64(stream))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut s = self.state;
        s ^= s >> 12;
        s ^= s << 25;
        s ^= s >> 27;
        self.state = s;
        s.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform integer in `[0, n)`. Panics if `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.below(len as u64) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // Reference outputs of SplitMix64 seeded with 0, consecutive calls.
        let mut x = 0u64;
        let mut out = Vec::new();
        for _ in 0..3 {
            out.push(splitmix64(x));
            x = x.wrapping_add(GOLDEN);
        }
        assert_eq!(
            out,
            vec![0xE220_A839_7B1D_CDAF, 0x6E78_9E6A_A1B9_65F4, 0x06C4_5D18_8009_454F]
        );
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = ShiftRng::new(42);
        let mut b = ShiftRng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = a.split(1);
        let mut d = b.split(2);
        assert_ne!(c.next_u64(), d.next_u64());
    }

    #[test]
    fn below_stays_in_range() {
        let mut r = ShiftRng::new(7);
        let mut seen = [0u32; 5];
        for _ in 0..1000 {
            seen[r.below(5) as usize] += 1;
        }
        assert!(seen.iter().all(|&c| c > 150));
    }
}
