//! CRC attachment, RNTI masking and checking for the three NR polar CRCs.
//!
//! The remainder is produced by a direct-form shift register: each message
//! bit is XORed with the register MSB and the result drives the feedback
//! taps. Remainder bits are emitted MSB first (coefficient of `x^{L-1}`
//! first).
//!
//! An all-ones initialization follows the NR convention of conceptually
//! prepending `L` ones to the message. In the direct form that equals
//! presetting the register with the remainder those `L` ones leave behind.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CRC generator polynomials used by the polar chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrcPoly {
    /// `x^6 + x^5 + 1`
    G6,
    /// `x^11 + x^10 + x^9 + x^5 + 1`
    G11,
    /// `x^24 + x^23 + x^21 + x^20 + x^17 + x^15 + x^13 + x^12 + x^8 + x^4 + x^2 + x + 1`
    G24,
}

impl CrcPoly {
    /// Degree `L` of the generator.
    pub const fn degree(self) -> usize {
        match self {
            CrcPoly::G6 => 6,
            CrcPoly::G11 => 11,
            CrcPoly::G24 => 24,
        }
    }

    /// Generator including the leading `x^L` term, bit `i` holding the
    /// coefficient of `x^i`.
    pub const fn generator(self) -> u32 {
        match self {
            CrcPoly::G6 => (1 << 6) | (1 << 5) | 1,
            CrcPoly::G11 => (1 << 11) | (1 << 10) | (1 << 9) | (1 << 5) | 1,
            CrcPoly::G24 => {
                (1 << 24)
                    | (1 << 23)
                    | (1 << 21)
                    | (1 << 20)
                    | (1 << 17)
                    | (1 << 15)
                    | (1 << 13)
                    | (1 << 12)
                    | (1 << 8)
                    | (1 << 4)
                    | (1 << 2)
                    | (1 << 1)
                    | 1
            }
        }
    }

    /// Coefficients from `x^L` down to `x^0`.
    pub fn coefficients(self) -> Vec<u8> {
        let g = self.generator();
        (0..=self.degree())
            .rev()
            .map(|i| ((g >> i) & 1) as u8)
            .collect()
    }

    fn mask(self) -> u32 {
        (1u32 << self.degree()) - 1
    }
}

/// Register fill before the message is shifted in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrcInit {
    Zeros,
    Ones,
}

fn shift_in(mut state: u32, bits: impl IntoIterator<Item = u8>, poly: CrcPoly) -> u32 {
    let l = poly.degree();
    let taps = poly.generator() & poly.mask();
    let mask = poly.mask();
    for b in bits {
        let fb = ((state >> (l - 1)) & 1) ^ (b as u32 & 1);
        state = (state << 1) & mask;
        if fb == 1 {
            state ^= taps;
        }
    }
    state
}

fn initial_state(poly: CrcPoly, init: CrcInit) -> u32 {
    match init {
        CrcInit::Zeros => 0,
        CrcInit::Ones => shift_in(0, std::iter::repeat_n(1u8, poly.degree()), poly),
    }
}

/// CRC remainder of `msg` as an `L`-bit integer (MSB = first emitted bit).
pub fn crc_remainder(msg: &[u8], poly: CrcPoly, init: CrcInit) -> u32 {
    shift_in(initial_state(poly, init), msg.iter().copied(), poly)
}

fn remainder_bits(rem: u32, l: usize) -> impl Iterator<Item = u8> {
    (0..l).rev().map(move |i| ((rem >> i) & 1) as u8)
}

/// Append the `L` remainder bits to `msg`.
pub fn crc_attach(msg: &[u8], poly: CrcPoly, init: CrcInit) -> Vec<u8> {
    let rem = crc_remainder(msg, poly, init);
    let mut out = Vec::with_capacity(msg.len() + poly.degree());
    out.extend_from_slice(msg);
    out.extend(remainder_bits(rem, poly.degree()));
    out
}

/// XOR the 16-bit RNTI onto the last 16 bits of a 24-bit CRC, i.e. positions
/// `A+8 .. A+24`. Bit `k` of the mask is the `k`-th most significant bit of
/// `rnti`.
pub fn rnti_mask(c: &[u8], rnti: u16, a: usize) -> Result<Vec<u8>> {
    if c.len() < a + 24 {
        return Err(Error::LengthMismatch {
            expected: a + 24,
            actual: c.len(),
        });
    }
    let mut out = c.to_vec();
    for k in 0..16 {
        out[a + 8 + k] ^= ((rnti >> (15 - k)) & 1) as u8;
    }
    Ok(out)
}

/// True iff the trailing `L` bits of `c` are the CRC of its prefix, after
/// removing the optional RNTI mask.
pub fn crc_check(c: &[u8], poly: CrcPoly, init: CrcInit, rnti: Option<u16>) -> bool {
    let l = poly.degree();
    if c.len() < l {
        return false;
    }
    let a = c.len() - l;
    let unmasked;
    let c = match rnti {
        Some(r) if poly == CrcPoly::G24 => {
            unmasked = match rnti_mask(c, r, a) {
                Ok(v) => v,
                Err(_) => return false,
            };
            &unmasked[..]
        }
        _ => c,
    };
    let rem = crc_remainder(&c[..a], poly, init);
    remainder_bits(rem, l).eq(c[a..].iter().copied())
}

/// Parity structure of a CRC over a fixed message length: the remainder is
/// `constant ^ XOR_{k : m_k = 1} columns[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrcParity {
    pub poly: CrcPoly,
    pub columns: Vec<u32>,
    pub constant: u32,
}

impl CrcParity {
    /// Build the affine map for messages of length `msg_len`, folding the
    /// initialization and optional RNTI mask into `constant`.
    pub fn new(msg_len: usize, poly: CrcPoly, init: CrcInit, rnti: Option<u16>) -> Self {
        let l = poly.degree();
        // Bit k shifted in followed by (msg_len - 1 - k) zeros.
        let mut columns = vec![0u32; msg_len];
        let mut state = shift_in(0, [1u8], poly);
        for k in (0..msg_len).rev() {
            columns[k] = state;
            state = shift_in(state, [0u8], poly);
        }
        let mut constant = shift_in(
            initial_state(poly, init),
            std::iter::repeat_n(0u8, msg_len),
            poly,
        );
        if let (Some(r), CrcPoly::G24) = (rnti, poly) {
            constant ^= r as u32;
        }
        debug_assert!(constant >> l == 0);
        Self {
            poly,
            columns,
            constant,
        }
    }

    /// Value of remainder bit `j` (0 = first emitted) from an accumulated
    /// column XOR.
    #[inline]
    pub fn bit(&self, accumulated: u32, j: usize) -> u8 {
        (((accumulated ^ self.constant) >> (self.poly.degree() - 1 - j)) & 1) as u8
    }

    /// Message indices each remainder bit depends on.
    pub fn dependencies(&self, j: usize) -> Vec<usize> {
        let shift = self.poly.degree() - 1 - j;
        self.columns
            .iter()
            .enumerate()
            .filter(|(_, &col)| (col >> shift) & 1 == 1)
            .map(|(k, _)| k)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const POLYS: [CrcPoly; 3] = [CrcPoly::G6, CrcPoly::G11, CrcPoly::G24];

    /// Long division of `prefix ∥ msg ∥ 0^L` by the generator over GF(2).
    fn long_division(prefix: &[u8], msg: &[u8], poly: CrcPoly) -> Vec<u8> {
        let coeffs = poly.coefficients();
        let l = poly.degree();
        let mut dividend: Vec<u8> = prefix.iter().chain(msg).copied().collect();
        dividend.extend(std::iter::repeat_n(0, l));
        for i in 0..dividend.len() - l {
            if dividend[i] == 1 {
                for (j, &c) in coeffs.iter().enumerate() {
                    dividend[i + j] ^= c;
                }
            }
        }
        dividend[dividend.len() - l..].to_vec()
    }

    fn oracle(msg: &[u8], poly: CrcPoly, init: CrcInit) -> Vec<u8> {
        let prefix = match init {
            CrcInit::Zeros => vec![],
            CrcInit::Ones => vec![1; poly.degree()],
        };
        long_division(&prefix, msg, poly)
    }

    fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
        (0..len).map(|_| rng.random_range(0..2u8)).collect()
    }

    #[test]
    fn polynomial_coefficients() {
        assert_eq!(CrcPoly::G6.coefficients(), vec![1, 1, 0, 0, 0, 0, 1]);
        assert_eq!(
            CrcPoly::G11.coefficients(),
            vec![1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1]
        );
        assert_eq!(CrcPoly::G24.generator(), 0x1B2_B117);
    }

    #[test]
    fn zero_message_zero_init() {
        for p in POLYS {
            let c = crc_attach(&[0; 20], p, CrcInit::Zeros);
            assert!(c.iter().all(|&b| b == 0));
        }
    }

    #[test]
    fn short_message_g6() {
        let msg = [1, 0, 1, 0, 1];
        let c = crc_attach(&msg, CrcPoly::G6, CrcInit::Zeros);
        let expected = long_division(&[], &msg, CrcPoly::G6);
        assert_eq!(&c[5..], &expected[..]);
        // 10101 x^6 mod (x^6 + x^5 + 1), worked by hand: 111001
        assert_eq!(expected, vec![1, 1, 1, 0, 0, 1]);
    }

    #[test]
    fn ones_init_equals_prepended_ones() {
        let c = crc_attach(&[0; 40], CrcPoly::G24, CrcInit::Ones);
        let expected = long_division(&[1; 24], &[0; 40], CrcPoly::G24);
        assert_eq!(&c[40..], &expected[..]);
        assert!(expected.contains(&1));
        // An empty message leaves exactly the CRC of 24 ones.
        let empty = crc_attach(&[], CrcPoly::G24, CrcInit::Ones);
        assert_eq!(empty, long_division(&[], &[1; 24], CrcPoly::G24));
    }

    #[test]
    fn register_matches_long_division() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in POLYS {
            for init in [CrcInit::Zeros, CrcInit::Ones] {
                for _ in 0..1000 {
                    let len = rng.random_range(1..200);
                    let msg = random_bits(&mut rng, len);
                    let c = crc_attach(&msg, p, init);
                    assert_eq!(&c[len..], &oracle(&msg, p, init)[..]);
                }
            }
        }
    }

    #[test]
    fn round_trip_and_single_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for p in POLYS {
            for _ in 0..10_000 {
                let msg = random_bits(&mut rng, 48);
                let c = crc_attach(&msg, p, CrcInit::Zeros);
                assert!(crc_check(&c, p, CrcInit::Zeros, None));
            }
            let msg = random_bits(&mut rng, 48);
            let c = crc_attach(&msg, p, CrcInit::Ones);
            for i in 0..c.len() {
                let mut bad = c.clone();
                bad[i] ^= 1;
                assert!(!crc_check(&bad, p, CrcInit::Ones, None), "{p:?} bit {i}");
            }
        }
    }

    #[test]
    fn linear_under_zero_init() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for p in POLYS {
            for _ in 0..200 {
                let m1 = random_bits(&mut rng, 64);
                let m2 = random_bits(&mut rng, 64);
                let m3: Vec<u8> = m1.iter().zip(&m2).map(|(a, b)| a ^ b).collect();
                let r = |m: &[u8]| crc_remainder(m, p, CrcInit::Zeros);
                assert_eq!(r(&m3), r(&m1) ^ r(&m2));
            }
        }
    }

    #[test]
    fn rnti_masking() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let a = 30;
        let c = crc_attach(&random_bits(&mut rng, a), CrcPoly::G24, CrcInit::Ones);
        assert_eq!(rnti_mask(&c, 0, a).unwrap(), c);
        let flipped = rnti_mask(&c, 0xffff, a).unwrap();
        assert_eq!(&flipped[..a + 8], &c[..a + 8]);
        assert!(flipped[a + 8..]
            .iter()
            .zip(&c[a + 8..])
            .all(|(x, y)| x != y));
        assert_eq!(rnti_mask(&flipped, 0xffff, a).unwrap(), c);
        assert_eq!(
            rnti_mask(&c[..40], 1, a),
            Err(Error::LengthMismatch {
                expected: 54,
                actual: 40
            })
        );
    }

    #[test]
    fn wrong_rnti_fails_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let a = 40;
        let rnti = 0xBEEF;
        let c = crc_attach(&random_bits(&mut rng, a), CrcPoly::G24, CrcInit::Ones);
        let masked = rnti_mask(&c, rnti, a).unwrap();
        assert!(crc_check(&masked, CrcPoly::G24, CrcInit::Ones, Some(rnti)));
        for k in 0..16 {
            let wrong = rnti ^ (1 << k);
            assert!(!crc_check(
                &masked,
                CrcPoly::G24,
                CrcInit::Ones,
                Some(wrong)
            ));
        }
    }

    #[test]
    fn parity_map_reproduces_remainder() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for p in POLYS {
            for init in [CrcInit::Zeros, CrcInit::Ones] {
                let rnti = (p == CrcPoly::G24).then_some(0x1234);
                let parity = CrcParity::new(37, p, init, rnti);
                for _ in 0..100 {
                    let msg = random_bits(&mut rng, 37);
                    let acc = msg
                        .iter()
                        .zip(&parity.columns)
                        .filter(|(&b, _)| b == 1)
                        .fold(0u32, |acc, (_, &col)| acc ^ col);
                    let mut c = crc_attach(&msg, p, init);
                    if let Some(r) = rnti {
                        c = rnti_mask(&c, r, 37).unwrap();
                    }
                    for j in 0..p.degree() {
                        assert_eq!(parity.bit(acc, j), c[37 + j]);
                    }
                }
            }
        }
    }
}
