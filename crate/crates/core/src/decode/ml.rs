//! Exhaustive maximum-likelihood decoding for small codes.

use crate::construct::{assemble_u, SubchannelAllocation};
use crate::error::{Error, Result};
use crate::kernel::polar_transform;
use crate::soft::hard_decision;

pub const ML_MAX_K: usize = 16;

/// Sum of `|llr_j|` over positions where `d` disagrees with the hard
/// decision. Minimizing it maximizes the correlation with `llr`.
pub fn correlation_discrepancy(llr: &[f64], d: &[u8]) -> f64 {
    llr.iter()
        .zip(d)
        .filter(|(&l, &b)| b != hard_decision(l))
        .map(|(l, _)| l.abs())
        .sum()
}

/// The input vector `u` whose codeword best correlates with `llr`, over all
/// `2^K` messages (parity-check bits follow from the message). Ties go to
/// the lowest message value, reading the first message bit as the least
/// significant.
pub fn ml_decode_bruteforce(llr: &[f64], alloc: &SubchannelAllocation) -> Result<Vec<u8>> {
    let k = alloc.k();
    if k > ML_MAX_K {
        return Err(Error::TooLarge(k));
    }
    if llr.len() != alloc.n {
        return Err(Error::LengthMismatch {
            expected: alloc.n,
            actual: llr.len(),
        });
    }
    let mut best: Option<(f64, Vec<u8>)> = None;
    for value in 0u32..(1 << k) {
        let msg: Vec<u8> = (0..k).map(|b| ((value >> b) & 1) as u8).collect();
        let u = assemble_u(alloc, &msg)?;
        let score = correlation_discrepancy(llr, &polar_transform(&u)?);
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, u));
        }
    }
    Ok(best.expect("at least one candidate").1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::extract_message;
    use crate::soft::bits_to_llr;

    fn toy() -> SubchannelAllocation {
        SubchannelAllocation::from_frozen(8, &[0, 1, 2, 4]).unwrap()
    }

    #[test]
    fn noiseless() {
        let alloc = toy();
        let u = assemble_u(&alloc, &[0, 1, 1, 0]).unwrap();
        let d = polar_transform(&u).unwrap();
        assert_eq!(
            ml_decode_bruteforce(&bits_to_llr(&d, 1.0), &alloc).unwrap(),
            u
        );
    }

    #[test]
    fn nearest_codeword_after_flip() {
        let alloc = toy();
        let u = assemble_u(&alloc, &[1, 1, 0, 1]).unwrap();
        let mut d = polar_transform(&u).unwrap();
        d[3] ^= 1;
        let mut llr = bits_to_llr(&d, 1.0);
        llr[3] *= 0.5;
        // Minimum distance 4 code: a single flip stays closest to the original.
        let mut best = (usize::MAX, vec![]);
        for v in 0..16u8 {
            let m: Vec<u8> = (0..4).map(|b| (v >> b) & 1).collect();
            let cw = polar_transform(&assemble_u(&alloc, &m).unwrap()).unwrap();
            let dist = cw.iter().zip(&d).filter(|(a, b)| a != b).count();
            if dist < best.0 {
                best = (dist, assemble_u(&alloc, &m).unwrap());
            }
        }
        assert_eq!(best.1, u);
        assert_eq!(ml_decode_bruteforce(&llr, &alloc).unwrap(), u);
    }

    #[test]
    fn parity_constrained_candidates() {
        let alloc = SubchannelAllocation::new(8, &[0, 1, 2], &[7], &[]).unwrap();
        assert_eq!(alloc.k(), 4);
        // Every candidate satisfies the parity rule, so an out-of-code
        // observation never comes back verbatim.
        let mut u_bad = assemble_u(&alloc, &[1, 0, 0, 0]).unwrap();
        u_bad[7] ^= 1;
        let d = polar_transform(&u_bad).unwrap();
        let got = ml_decode_bruteforce(&bits_to_llr(&d, 1.0), &alloc).unwrap();
        assert_ne!(got, u_bad);
        assert_eq!(
            assemble_u(&alloc, &extract_message(&alloc, &got)).unwrap(),
            got
        );
    }

    #[test]
    fn too_large() {
        let alloc = SubchannelAllocation::from_frozen(32, &[0]).unwrap();
        assert_eq!(
            ml_decode_bruteforce(&[0.0; 32], &alloc),
            Err(Error::TooLarge(31))
        );
    }
}
