//! Fixed 64-bit hash functions.
//!
//! Signatures and bucket keys must be reproducible across runs, platforms and
//! independent reimplementations, so nothing here uses `std`'s randomized
//! hasher. The algorithms are:
//!
//! * `fingerprint(bytes, seed)`: FNV-1a over the bytes, starting from
//!   `0xcbf29ce484222325 ^ seed` with prime `0x100000001b3`, then passed
//!   through [`mix64`].
//! * `mix64(x)`: the SplitMix64 finalizer
//!   (`x ^= x >> 30; x *= 0xbf58476d1ce4e5b9; x ^= x >> 27;
//!   x *= 0x94d049bb133111eb; x ^= x >> 31`). It is a bijection on `u64`.

pub const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
pub const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Seed used for shingle fingerprints ("SHINGLE1" in ASCII).
pub const SHINGLE_SEED: u64 = 0x5348_494e_474c_4531;

/// Separator placed between tokens of a shingle before fingerprinting.
pub const SHINGLE_SEPARATOR: char = '\u{1}';

#[inline]
pub fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

#[inline]
pub fn fnv1a(bytes: &[u8], seed: u64) -> u64 {
    let mut h = FNV_OFFSET ^ seed;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

#[inline]
pub fn fingerprint(bytes: &[u8], seed: u64) -> u64 {
    mix64(fnv1a(bytes, seed))
}

/// Step of the SplitMix64 generator; used to derive per-row MinHash keys.
#[inline]
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    mix64(*state)
}
