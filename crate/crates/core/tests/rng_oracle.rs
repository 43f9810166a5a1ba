//! The generator stream checked against two independent implementations of
//! SplitMix64-seeded xoshiro256**: the `rand_xoshiro` crate and a direct
//! transcription written here.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use tendency::Rng;

struct Transcribed {
    s: [u64; 4],
}

impl Transcribed {
    fn new(seed: u64) -> Self {
        let mut x = seed;
        let mut next = || {
            x = x.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = x;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        };
        Transcribed {
            s: [next(), next(), next(), next()],
        }
    }

    fn next(&mut self) -> u64 {
        let [s0, s1, s2, s3] = self.s;
        let out = (s1.wrapping_mul(5)).rotate_left(7).wrapping_mul(9);
        let t = s1 << 17;
        let s2 = s2 ^ s0;
        let s3 = s3 ^ s1;
        let s1 = s1 ^ s2;
        let s0 = s0 ^ s3;
        let s2 = s2 ^ t;
        let s3 = s3.rotate_left(45);
        self.s = [s0, s1, s2, s3];
        out
    }
}

#[test]
fn matches_transcription_bitwise() {
    for seed in [0, 1, 42, u64::MAX] {
        let mut ours = Rng::new(seed);
        let mut oracle = Transcribed::new(seed);
        for _ in 0..1000 {
            assert_eq!(ours.next_u64(), oracle.next());
        }
    }
}

#[test]
fn matches_rand_xoshiro() {
    for seed in [0, 42, 0xDEAD_BEEF] {
        let mut ours = Rng::new(seed);
        let mut oracle = Xoshiro256StarStar::seed_from_u64(seed);
        for _ in 0..1000 {
            assert_eq!(ours.next_u64(), oracle.next_u64());
        }
    }
}

#[test]
fn doubles_use_top_53_bits() {
    let mut ours = Rng::new(42);
    let mut oracle = Transcribed::new(42);
    for _ in 0..1000 {
        let expected = (oracle.next() >> 11) as f64 / 9007199254740992.0;
        assert_eq!(ours.next_f64().to_bits(), expected.to_bits());
    }
}
