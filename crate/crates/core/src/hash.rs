//! Seeded 64-bit mixing used for sketch rows, set selection and seed
//! derivation.
//!
//! All hashes are built from the MurmurHash3 `fmix64` finalizer and the
//! SplitMix64 output function, both bijections on `u64`.

/// Identity string recorded in experiment metadata.
pub const HASH_IDENTITY: &str = "fmix64(x ^ seed) with splitmix64-derived seeds";

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// MurmurHash3 64-bit finalizer.
#[inline]
pub fn fmix64(mut k: u64) -> u64 {
    k ^= k >> 33;
    k = k.wrapping_mul(0xff51_afd7_ed55_8ccd);
    k ^= k >> 33;
    k = k.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    k ^= k >> 33;
    k
}

/// SplitMix64 output function applied to `x`.
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the `index`-th child seed of `master`.
#[inline]
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_mul(GOLDEN_GAMMA)))
}

/// Seeded hash of a 64-bit key.
#[inline]
pub fn hash64(seed: u64, key: u64) -> u64 {
    fmix64(key ^ seed)
}

/// Maps a hash uniformly onto `[0, n)` with a multiply-shift reduction.
#[inline]
pub fn reduce(hash: u64, n: usize) -> usize {
    ((hash as u128 * n as u128) >> 64) as usize
}
