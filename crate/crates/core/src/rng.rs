//! The deterministic random-number contract.
//!
//! Every stochastic operation in the crate draws from an [`RngStream`], and a
//! stream is fully determined by its `(seed, run_index)` pair, so replaying a
//! run replays every draw bit for bit on any platform. No external RNG crate
//! is used: value stability across versions and languages requires a pinned
//! algorithm, so the generator is spelled out here, constants and all.
//!
//! Construction: the pair is folded into a sub-seed with the splitmix64
//! finalizer (`sub = mix64(seed ^ mix64(run_index + GAMMA))`), and four
//! successive splitmix64 outputs from that sub-seed become the xoshiro256**
//! state. Draws:
//!
//! - `next_u64` — one xoshiro256** step.
//! - `next_f64` — `(next_u64() >> 11) * 2^-53`, uniform on `[0, 1)`.
//! - `next_index(n)` — unbiased integer in `[0, n)` by rejection.
//! - `next_gaussian` — Marsaglia polar method (second component discarded).
//!
//! Constants: `GAMMA = 0x9E3779B97F4A7C15`, multipliers
//! `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB` (splitmix64), and the
//! standard xoshiro256** update.

/// Weyl increment used by splitmix64.
pub const GAMMA: u64 = 0x9E3779B97F4A7C15;

const MIX_MUL_1: u64 = 0xBF58476D1CE4E5B9;
const MIX_MUL_2: u64 = 0x94D049BB133111EB;

/// splitmix64 output finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX_MUL_1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_MUL_2);
    z ^ (z >> 31)
}

/// One splitmix64 step: advance the Weyl state, return the mixed value.
#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GAMMA);
    mix64(*state)
}

/// A deterministic draw stream derived from `(seed, run_index)`.
///
/// Single-owner: a stream is never shared between concurrent activities.
/// `Clone` exists so tests can fork a stream and predict upcoming draws.
#[derive(Clone, Debug)]
pub struct RngStream {
    s: [u64; 4],
}

impl RngStream {
    pub fn new(seed: u64, run_index: u64) -> Self {
        let sub_seed = mix64(seed ^ mix64(run_index.wrapping_add(GAMMA)));
        let mut sm = sub_seed;
        let mut s = [0u64; 4];
        for word in &mut s {
            *word = splitmix64(&mut sm);
        }
        // xoshiro requires a nonzero state
        if s == [0; 4] {
            s[0] = GAMMA;
        }
        RngStream { s }
    }

    /// One xoshiro256** step.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
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

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[0, n)`, unbiased via rejection of the partial block.
    #[inline]
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        let n = n as u64;
        let reject_below = n.wrapping_neg() % n; // 2^64 mod n
        loop {
            let r = self.next_u64();
            if r >= reject_below {
                return (r % n) as usize;
            }
        }
    }

    /// Uniform entity value in `[1, s_max]`.
    #[inline]
    pub fn next_entity_value(&mut self, s_max: u32) -> u32 {
        self.next_index(s_max as usize) as u32 + 1
    }

    /// Fair coin: the top bit of one `next_u64` draw.
    #[inline]
    pub fn next_bool(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    /// Standard Gaussian via the Marsaglia polar method. Each call runs its
    /// own rejection loop and discards the paired second component, keeping
    /// the stream state free of carried values.
    pub fn next_gaussian(&mut self) -> f64 {
        loop {
            let u = 2.0 * self.next_f64() - 1.0;
            let v = 2.0 * self.next_f64() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                return u * (-2.0 * s.ln() / s).sqrt();
            }
        }
    }

    /// Fisher-Yates shuffle driven by `next_index`.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_index(i + 1);
            items.swap(i, j);
        }
    }
}
