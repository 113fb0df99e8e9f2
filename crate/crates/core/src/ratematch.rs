//! Circular-buffer rate matching, its soft-domain inverse, and the
//! two-segment concatenation.

use crate::config::RmMode;
use crate::error::{Error, Result};
use crate::soft::SoftSymbol;

fn check_mode(mode: RmMode, e: usize, n: usize) -> Result<()> {
    let ok = match mode {
        RmMode::Puncture | RmMode::Shorten => e <= n,
        RmMode::Repeat => e > n,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::ModeMismatch {
            mode: mode.to_string(),
            e,
            n,
        })
    }
}

/// Select `e` bits out of the length-`N` interleaved codeword `y`.
pub fn rate_match<T: Copy>(y: &[T], e: usize, mode: RmMode) -> Result<Vec<T>> {
    let n = y.len();
    check_mode(mode, e, n)?;
    Ok(match mode {
        RmMode::Puncture => y[n - e..].to_vec(),
        RmMode::Shorten => y[..e].to_vec(),
        RmMode::Repeat => (0..e).map(|i| y[i % n]).collect(),
    })
}

/// Expand `e` received soft values back to `n` positions: punctured
/// positions become neutral, shortened positions known zero, repeated
/// observations are combined.
pub fn de_rate_match<S: SoftSymbol>(
    soft: &[S],
    n: usize,
    mode: RmMode,
    saturation: f64,
) -> Result<Vec<S>> {
    let e = soft.len();
    check_mode(mode, e, n)?;
    Ok(match mode {
        RmMode::Puncture => {
            let mut out = vec![S::neutral(); n - e];
            out.extend_from_slice(soft);
            out
        }
        RmMode::Shorten => {
            let mut out = soft.to_vec();
            out.resize(n, S::known_zero(saturation));
            out
        }
        RmMode::Repeat => {
            let mut out = soft[..n].to_vec();
            for (i, &s) in soft.iter().enumerate().skip(n) {
                out[i % n] = out[i % n].combine(s, i % n)?;
            }
            out
        }
    })
}

/// Per-segment codeword length for a payload of `g` bits.
pub fn segment_length(g: usize) -> usize {
    g / 2
}

/// `e1 ∥ e2`, plus one filler zero when `g = 2E + 1`.
pub fn concatenate<T: Copy + Default>(e1: &[T], e2: &[T], g: usize) -> Result<Vec<T>> {
    let e = segment_length(g);
    for part in [e1, e2] {
        if part.len() != e {
            return Err(Error::LengthMismatch {
                expected: e,
                actual: part.len(),
            });
        }
    }
    let mut out = Vec::with_capacity(g);
    out.extend_from_slice(e1);
    out.extend_from_slice(e2);
    if g % 2 == 1 {
        out.push(T::default());
    }
    Ok(out)
}

/// Inverse of [`concatenate`]; drops the filler.
pub fn split<T: Copy>(joined: &[T], g: usize) -> Result<(Vec<T>, Vec<T>)> {
    if joined.len() != g {
        return Err(Error::LengthMismatch {
            expected: g,
            actual: joined.len(),
        });
    }
    let e = segment_length(g);
    Ok((joined[..e].to_vec(), joined[e..2 * e].to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::soft::{Ternary, DEFAULT_LLR_SATURATION};
    use proptest::prelude::*;

    const Y: [u8; 8] = [0, 1, 2, 3, 4, 5, 6, 7];

    #[test]
    fn three_modes() {
        assert_eq!(
            rate_match(&Y, 6, RmMode::Puncture).unwrap(),
            vec![2, 3, 4, 5, 6, 7]
        );
        assert_eq!(
            rate_match(&Y, 6, RmMode::Shorten).unwrap(),
            vec![0, 1, 2, 3, 4, 5]
        );
        assert_eq!(
            rate_match(&Y, 10, RmMode::Repeat).unwrap(),
            vec![0, 1, 2, 3, 4, 5, 6, 7, 0, 1]
        );
        assert!(matches!(
            rate_match(&Y, 10, RmMode::Puncture),
            Err(Error::ModeMismatch { .. })
        ));
        assert!(rate_match(&Y, 8, RmMode::Repeat).is_err());
    }

    #[test]
    fn soft_inverse() {
        let llr = [1.0, -1.0, 1.0, 1.0, -1.0, 1.0];
        let p = de_rate_match(&llr, 8, RmMode::Puncture, DEFAULT_LLR_SATURATION).unwrap();
        assert_eq!(&p[..2], &[0.0, 0.0]);
        assert_eq!(&p[2..], &llr);
        let s = de_rate_match(&llr, 8, RmMode::Shorten, 50.0).unwrap();
        assert_eq!(&s[6..], &[50.0, 50.0]);
        let mut rep = vec![1.0; 10];
        rep[0] = 1.5;
        rep[8] = 2.5;
        let r = de_rate_match(&rep, 8, RmMode::Repeat, 50.0).unwrap();
        assert_eq!(r[0], 4.0);
        assert_eq!(r[1], 2.0);
        assert_eq!(r.len(), 8);
    }

    #[test]
    fn ternary_repeat_resolution() {
        use Ternary::*;
        let mut rx = vec![Erased; 10];
        rx[8] = One;
        rx[1] = Zero;
        let r = de_rate_match(&rx, 8, RmMode::Repeat, 0.0).unwrap();
        assert_eq!((r[0], r[1], r[2]), (One, Zero, Erased));
        rx[9] = One;
        assert_eq!(
            de_rate_match(&rx, 8, RmMode::Repeat, 0.0),
            Err(Error::ConflictingRepeats(1))
        );
        let p = de_rate_match(&[Zero; 6], 8, RmMode::Puncture, 0.0).unwrap();
        assert_eq!(&p[..2], &[Erased, Erased]);
        let s = de_rate_match(&[One; 6], 8, RmMode::Shorten, 0.0).unwrap();
        assert_eq!(&s[6..], &[Zero, Zero]);
    }

    #[test]
    fn concatenation() {
        assert_eq!(
            concatenate(&[1u8, 1], &[0, 1], 4).unwrap(),
            vec![1, 1, 0, 1]
        );
        assert_eq!(
            concatenate(&[1u8, 1], &[0, 1], 5).unwrap(),
            vec![1, 1, 0, 1, 0]
        );
        assert_eq!(
            concatenate(&[1u8], &[0, 1], 4),
            Err(Error::LengthMismatch {
                expected: 2,
                actual: 1
            })
        );
        assert!(split(&[0u8; 4], 5).is_err());
        assert_eq!(
            split(&[1u8, 1, 0, 1, 0], 5).unwrap(),
            (vec![1, 1], vec![0, 1])
        );
    }

    proptest! {
        #[test]
        fn split_inverts_concatenate(g in 2usize..400, seed in any::<u64>()) {
            let e = g / 2;
            let e1: Vec<u8> = (0..e).map(|i| ((seed >> (i % 64)) & 1) as u8).collect();
            let e2: Vec<u8> = (0..e).map(|i| ((seed >> ((i + 7) % 64)) & 1) as u8).collect();
            let joined = concatenate(&e1, &e2, g).unwrap();
            prop_assert_eq!(joined.len(), g);
            if g % 2 == 1 {
                prop_assert_eq!(*joined.last().unwrap(), 0);
            }
            prop_assert_eq!(split(&joined, g).unwrap(), (e1, e2));
        }

        #[test]
        fn lengths(nlog in 5u32..=10, e in 1usize..3000) {
            let n = 1usize << nlog;
            let y: Vec<u8> = (0..n).map(|i| (i % 2) as u8).collect();
            let mode = if e > n { RmMode::Repeat } else if e % 2 == 0 { RmMode::Puncture } else { RmMode::Shorten };
            let out = rate_match(&y, e, mode).unwrap();
            prop_assert_eq!(out.len(), e);
            let soft: Vec<f64> = out.iter().map(|&b| 1.0 - 2.0 * b as f64).collect();
            prop_assert_eq!(de_rate_match(&soft, n, mode, 1e6).unwrap().len(), n);
        }
    }
}
