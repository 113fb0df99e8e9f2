//! The polarization transform `d = u · G_N` with `G_N` the n-fold Kronecker
//! power of `G_2 = [[1, 0], [1, 1]]`.
//!
//! Bits are packed 64 to a word; stages with half-span below 64 run as
//! masked shift-XORs inside each word and wider stages XOR whole words.

use crate::error::{Error, Result};

/// Masks selecting bit positions `j` with `j & h == 0`, for `h = 1 << s`.
const STAGE_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// Pack a 0/1 vector LSB-first into 64-bit words.
pub fn pack_bits(bits: &[u8]) -> Vec<u64> {
    let mut words = vec![0u64; bits.len().div_ceil(64)];
    for (i, &b) in bits.iter().enumerate() {
        words[i / 64] |= ((b & 1) as u64) << (i % 64);
    }
    words
}

pub fn unpack_bits(words: &[u64], len: usize) -> Vec<u8> {
    (0..len)
        .map(|i| ((words[i / 64] >> (i % 64)) & 1) as u8)
        .collect()
}

/// Apply the transform in place on a packed vector of `len` bits.
pub fn polar_transform_packed(words: &mut [u64], len: usize) {
    debug_assert!(len.is_power_of_two());
    let mut h = 1usize;
    let mut stage = 0usize;
    while h < len {
        if h < 64 {
            let mask = STAGE_MASKS[stage];
            for w in words.iter_mut() {
                *w ^= (*w >> h) & mask;
            }
        } else {
            let hw = h / 64;
            for block in words.chunks_mut(2 * hw) {
                let (lo, hi) = block.split_at_mut(hw);
                for (a, b) in lo.iter_mut().zip(hi.iter()) {
                    *a ^= *b;
                }
            }
        }
        h <<= 1;
        stage += 1;
    }
}

/// Encode `u` into `d = u · G_N`.
pub fn polar_transform(u: &[u8]) -> Result<Vec<u8>> {
    let n = u.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut words = pack_bits(u);
    polar_transform_packed(&mut words, n);
    Ok(unpack_bits(&words, n))
}

/// Dense `G_N` for `N = 2^n`, built by the block recursion
/// `G_N = [[G_{N/2}, 0], [G_{N/2}, G_{N/2}]]`. Test-scale only.
pub fn dense_gn(n: usize) -> Result<Vec<Vec<u8>>> {
    if n > 10 {
        return Err(Error::TooLarge(n));
    }
    let mut g = vec![vec![1u8]];
    for _ in 0..n {
        let half = g.len();
        let mut next = vec![vec![0u8; 2 * half]; 2 * half];
        for r in 0..half {
            for c in 0..half {
                let v = g[r][c];
                next[r][c] = v;
                next[half + r][c] = v;
                next[half + r][half + c] = v;
            }
        }
        g = next;
    }
    Ok(g)
}

/// Row-vector times matrix over GF(2).
pub fn gf2_vec_mat(u: &[u8], g: &[Vec<u8>]) -> Vec<u8> {
    let cols = g.first().map_or(0, Vec::len);
    let mut d = vec![0u8; cols];
    for (row, &ui) in g.iter().zip(u) {
        if ui & 1 == 1 {
            for (dj, &gj) in d.iter_mut().zip(row) {
                *dj ^= gj;
            }
        }
    }
    d
}
