//! The fitness landscape: canonical byte encoding of a multiset, the 64-bit
//! FNV-1a hash over it, and the `(h mod m) / m` mapping into `[0, 1)`.
//!
//! Fitness values are held in exact integer form (`numerator / modulus`), so
//! comparing two fitnesses, detecting a tie, and serializing a value are all
//! exact operations; floating point only enters when a caller asks for the
//! value as a scalar.

use crate::scalar::Real;
use crate::types::Multiset;
use crate::error::{Error, Result};

/// FNV-1a 64-bit offset basis.
pub const FNV_OFFSET_BASIS: u64 = 14_695_981_039_346_656_037; // 0xcbf29ce484222325
/// FNV-1a 64-bit prime.
pub const FNV_PRIME: u64 = 1_099_511_628_211; // 0x100000001b3

/// Resolution of the fixed-point fitness used by the log format: 8 fractional
/// decimal digits.
pub const FIXED_POINT_DENOMINATOR: u64 = 100_000_000;

/// FNV-1a over a byte sequence: start at the offset basis, then for each byte
/// XOR and multiply by the prime (mod 2^64).
#[inline]
pub fn hash64(data: &[u8]) -> u64 {
    let mut state = FNV_OFFSET_BASIS;
    for &byte in data {
        state = (state ^ byte as u64).wrapping_mul(FNV_PRIME);
    }
    state
}

/// Canonical encoding: each element value as a 4-byte little-endian unsigned
/// integer, concatenated in ascending multiset order.
pub fn encode_canonical(ms: &Multiset) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 * ms.size());
    for value in ms.values() {
        out.extend_from_slice(&value.to_le_bytes());
    }
    out
}

/// FNV-1a of the canonical encoding, streamed without building the byte
/// buffer. Identical to `hash64(&encode_canonical(ms))`.
#[inline]
pub fn hash_multiset(ms: &Multiset) -> u64 {
    let mut state = FNV_OFFSET_BASIS;
    for value in ms.values() {
        for byte in value.to_le_bytes() {
            state = (state ^ byte as u64).wrapping_mul(FNV_PRIME);
        }
    }
    state
}

/// A fitness in `[0, 1)` stored exactly as `numerator / modulus` with
/// `0 <= numerator < modulus`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FitnessValue {
    num: u64,
    m: u64,
}

impl FitnessValue {
    pub fn new(num: u64, m: u64) -> Result<Self> {
        if m < 2 || num >= m {
            return Err(Error::InvalidFitness { num, m });
        }
        Ok(FitnessValue { num, m })
    }

    #[inline]
    pub fn numerator(self) -> u64 {
        self.num
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.m
    }

    /// The fitness as a scalar, `numerator / modulus`.
    #[inline]
    pub fn value<R: Real>(self) -> R {
        R::from_f64_lossy(self.num as f64 / self.m as f64)
    }

    /// Rescales to the log format's 8-digit fixed point, rounding half up.
    /// Exact whenever the modulus divides 10^8 (both engine defaults do);
    /// for finer moduli the result clamps to the representable ceiling so it
    /// stays below 1.
    pub fn to_fixed8(self) -> u64 {
        let scaled = self.num as u128 * FIXED_POINT_DENOMINATOR as u128 + self.m as u128 / 2;
        ((scaled / self.m as u128) as u64).min(FIXED_POINT_DENOMINATOR - 1)
    }

    /// Reconstructs a value from the log's fixed-point representation.
    pub fn from_fixed8(f8: u64) -> Result<Self> {
        FitnessValue::new(f8, FIXED_POINT_DENOMINATOR)
    }

    /// `-log10(1 - f)`, evaluated on the exact representation as
    /// `log10(m) - log10(m - numerator)` so powers of ten come out exact.
    pub fn neglog10_closeness<R: Real>(self) -> R {
        let whole = (self.m as f64).log10();
        let gap = ((self.m - self.num) as f64).log10();
        R::from_f64_lossy(whole - gap)
    }
}

impl FitnessValue {
    /// Exact comparison of the represented values `a/m_a` vs `b/m_b`.
    ///
    /// Not an `Ord` impl: two representations of the same value (for example
    /// `1/2` and `50/100`) compare `Equal` here while `==` distinguishes
    /// them structurally.
    pub fn value_cmp(self, other: Self) -> std::cmp::Ordering {
        let lhs = self.num as u128 * other.m as u128;
        let rhs = other.num as u128 * self.m as u128;
        lhs.cmp(&rhs)
    }
}

/// Fitness of a multiset: `f = (hash64(encode_canonical(ms)) mod m) / m`.
#[inline]
pub fn fitness(ms: &Multiset, m: u64) -> FitnessValue {
    debug_assert!(m >= 2);
    FitnessValue {
        num: hash_multiset(ms) % m,
        m,
    }
}
