//! Bit-channel polarization on the binary erasure channel.

/// Erasure probabilities of the `2^n` synthetic channels obtained from a
/// BEC(`delta`), in input-bit index order.
pub fn bec_polarize(delta: f64, n: u32) -> Vec<f64> {
    assert!(
        (0.0..=1.0).contains(&delta),
        "erasure probability out of range"
    );
    let mut z = vec![delta];
    for _ in 0..n {
        z = z.iter().flat_map(|&x| [2.0 * x - x * x, x * x]).collect();
    }
    z
}
