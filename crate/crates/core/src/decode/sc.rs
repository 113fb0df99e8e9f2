//! Successive cancellation on LLRs with min-sum updates.

use crate::soft::hard_decision;

#[inline]
pub(crate) fn f_min_sum(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -m
    } else {
        m
    }
}

#[inline]
pub(crate) fn g_update(a: f64, b: f64, beta: u8) -> f64 {
    if beta == 0 {
        b + a
    } else {
        b - a
    }
}

fn node(alpha: &[f64], frozen: &[bool], u: &mut [u8]) -> Vec<u8> {
    let n = alpha.len();
    if n == 1 {
        u[0] = if frozen[0] {
            0
        } else {
            hard_decision(alpha[0])
        };
        return vec![u[0]];
    }
    let h = n / 2;
    let (a1, a2) = alpha.split_at(h);
    let left: Vec<f64> = a1.iter().zip(a2).map(|(&x, &y)| f_min_sum(x, y)).collect();
    let (u_l, u_r) = u.split_at_mut(h);
    let beta_l = node(&left, &frozen[..h], u_l);
    let right: Vec<f64> = a1
        .iter()
        .zip(a2)
        .zip(&beta_l)
        .map(|((&x, &y), &b)| g_update(x, y, b))
        .collect();
    let beta_r = node(&right, &frozen[h..], u_r);
    beta_l
        .iter()
        .zip(&beta_r)
        .map(|(&l, &r)| l ^ r)
        .chain(beta_r.iter().copied())
        .collect()
}

/// Decode `u` from codeword-domain LLRs (positive favours 0).
pub fn sc_decode_llr(llr: &[f64], frozen: &[bool]) -> Vec<u8> {
    assert!(llr.len().is_power_of_two(), "length must be a power of two");
    assert_eq!(llr.len(), frozen.len());
    let mut u = vec![0u8; llr.len()];
    node(llr, frozen, &mut u);
    u
}
