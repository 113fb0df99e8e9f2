//! Successive cancellation over the binary erasure channel.

use crate::soft::Ternary;

/// `f`: XOR in which an erasure dominates.
fn f(a: Ternary, b: Ternary) -> Ternary {
    match (a.bit(), b.bit()) {
        (Some(x), Some(y)) => Ternary::from_bit(x ^ y),
        _ => Ternary::Erased,
    }
}

/// `g`: the second input if known, else the first one XOR the partial sum.
fn g(a: Ternary, b: Ternary, beta: u8) -> Ternary {
    match (b.bit(), a.bit()) {
        (Some(y), _) => Ternary::from_bit(y),
        (None, Some(x)) => Ternary::from_bit(x ^ beta),
        (None, None) => Ternary::Erased,
    }
}

fn node(alpha: &[Ternary], frozen: &[bool], u: &mut [u8]) -> Vec<u8> {
    let n = alpha.len();
    if n == 1 {
        u[0] = if frozen[0] {
            0
        } else {
            alpha[0].bit().unwrap_or(0)
        };
        return vec![u[0]];
    }
    let h = n / 2;
    let (a1, a2) = alpha.split_at(h);
    let left_alpha: Vec<Ternary> = a1.iter().zip(a2).map(|(&x, &y)| f(x, y)).collect();
    let (u_l, u_r) = u.split_at_mut(h);
    let beta_l = node(&left_alpha, &frozen[..h], u_l);
    let right_alpha: Vec<Ternary> = a1
        .iter()
        .zip(a2)
        .zip(&beta_l)
        .map(|((&x, &y), &b)| g(x, y, b))
        .collect();
    let beta_r = node(&right_alpha, &frozen[h..], u_r);
    beta_l
        .iter()
        .zip(&beta_r)
        .map(|(&l, &r)| l ^ r)
        .chain(beta_r.iter().copied())
        .collect()
}

/// Decode `u` from ternary channel observations of `d`. Frozen leaves and
/// unresolved information leaves decode to 0.
pub fn sc_decode_bec(y: &[Ternary], frozen: &[bool]) -> Vec<u8> {
    assert!(y.len().is_power_of_two(), "length must be a power of two");
    assert_eq!(y.len(), frozen.len());
    let mut u = vec![0u8; y.len()];
    node(y, frozen, &mut u);
    u
}
