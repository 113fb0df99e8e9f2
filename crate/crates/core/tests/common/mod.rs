#![allow(dead_code)]

use nrpolar::pipeline::PolarCodec;
use nrpolar::{ChannelKind, CodeConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_bits<R: Rng>(rng: &mut R, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.random_range(0..2u8)).collect()
}

const PUCCH: (&str, &[usize], &[usize]) = (
    "pucch",
    &[12, 16, 19, 20, 32, 64, 150],
    &[40, 54, 100, 108, 160, 250, 300, 600],
);
const PUSCH: (&str, &[usize], &[usize]) = ("pusch", &[360, 1013, 1706], &[1088, 2000, 3500]);
const PDCCH: (&str, &[usize], &[usize]) =
    ("pdcch", &[1, 12, 40, 100, 140], &[54, 100, 200, 432, 864]);

/// Code configurations used by the end-to-end suites. Every channel, rate
/// matching mode, the segmented case and the parity-check case all occur.
/// Combinations whose frozen set cannot be built (more shortened bits than
/// frozen positions) are left out.
pub fn config_grid() -> Vec<(String, CodeConfig)> {
    let mut out = Vec::new();
    for (name, a_list, g_list) in [PUCCH, PUSCH, PDCCH] {
        let ch: ChannelKind = name.parse().unwrap();
        for &a in a_list {
            for &g in g_list {
                let Ok(cfg) = CodeConfig::select(ch, a, g, None) else {
                    continue;
                };
                if PolarCodec::new(cfg.clone()).is_ok() {
                    out.push((name.to_owned(), cfg));
                }
            }
        }
    }
    out.push((
        "pdcch".to_owned(),
        CodeConfig::select(ChannelKind::DciPdcch, 40, 108, Some(0xbeef)).unwrap(),
    ));
    out.push((
        "pbch".to_owned(),
        CodeConfig::select(ChannelKind::PbchPayload, 32, 864, None).unwrap(),
    ));
    out
}

/// `F^{⊗n}` row by row, bit-packed: row `i` has ones at every `j` whose set
/// bits are a subset of those of `i`.
pub struct KroneckerOracle {
    n: usize,
    rows: Vec<Vec<u64>>,
}

impl KroneckerOracle {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![0u64; words];
                for j in 0..n {
                    if i & j == j {
                        r[j / 64] |= 1 << (j % 64);
                    }
                }
                r
            })
            .collect();
        Self { n, rows }
    }

    pub fn encode(&self, u: &[u8]) -> Vec<u8> {
        let mut acc = vec![0u64; self.n.div_ceil(64)];
        for (i, _) in u.iter().enumerate().filter(|(_, &b)| b == 1) {
            for (a, r) in acc.iter_mut().zip(&self.rows[i]) {
                *a ^= r;
            }
        }
        (0..self.n)
            .map(|j| ((acc[j / 64] >> (j % 64)) & 1) as u8)
            .collect()
    }
}

/// Parity-check bit at `i` from the already filled `u`:
/// XOR of `u[5j + p]` for `j` from `⌊i_pc / 5⌋` to `⌊i / 5⌋ - 1`, where `p = i mod 5`
/// and `i_pc` is the previous parity position with the same residue (0 if none).
pub fn pc_closed_form(u: &[u8], pc_positions: &[usize], i: usize) -> u8 {
    let (q, p) = (i / 5, i % 5);
    let i_pc = pc_positions
        .iter()
        .copied()
        .filter(|&x| x < i && x % 5 == p)
        .max()
        .unwrap_or(0);
    (i_pc / 5..q).fold(0, |acc, j| acc ^ u[5 * j + p])
}

/// Wilson-free binomial standard deviation of a rate estimate.
pub fn rate_sigma(p: f64, n: f64) -> f64 {
    (p * (1.0 - p) / n).sqrt()
}

/// Generator exponents, highest first.
pub const G6: &[u32] = &[6, 5, 0];
pub const G11: &[u32] = &[11, 10, 9, 5, 0];
pub const G24: &[u32] = &[24, 23, 21, 20, 17, 15, 13, 12, 8, 4, 2, 1, 0];

/// Remainder of `m(x)·x^L` modulo `g(x)` by schoolbook long division,
/// highest-order coefficient first.
pub fn long_division_crc(msg: &[u8], gen: &[u32]) -> Vec<u8> {
    let l = gen[0] as usize;
    let mut r: Vec<u8> = msg
        .iter()
        .copied()
        .chain(std::iter::repeat_n(0, l))
        .collect();
    for i in 0..msg.len() {
        if r[i] == 1 {
            for &e in gen {
                r[i + l - e as usize] ^= 1;
            }
        }
    }
    r.split_off(msg.len())
}
