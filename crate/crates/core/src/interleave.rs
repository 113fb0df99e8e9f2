//! The three interleavers of the chain and their inverses.
//!
//! Every interleaver is a [`Permutation`] in gather form: output position
//! `k` takes input position `map[k]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Length of the stored input-interleaver pattern.
pub const K_IL_MAX: usize = 164;

/// A bijection on `0..len`, applied as a gather.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &m in &map {
            if m >= map.len() || std::mem::replace(&mut seen[m], true) {
                return Err(Error::NotAPermutation(format!(
                    "index {m} repeated or out of range for length {}",
                    map.len()
                )));
            }
        }
        Ok(Self { map })
    }

    pub fn identity(len: usize) -> Self {
        Self {
            map: (0..len).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (k, &m) in self.map.iter().enumerate() {
            inv[m] = k;
        }
        Self { map: inv }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.map.len() {
            return Err(Error::LengthMismatch {
                expected: self.map.len(),
                actual: len,
            });
        }
        Ok(())
    }

    /// `out[k] = x[map[k]]`
    pub fn apply<T: Copy>(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_len(x.len())?;
        Ok(self.map.iter().map(|&m| x[m]).collect())
    }

    /// Undo [`Permutation::apply`]: `out[map[k]] = x[k]`.
    pub fn apply_inverse<T: Copy>(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_len(x.len())?;
        let Some(&first) = x.first() else {
            return Ok(Vec::new());
        };
        let mut out = vec![first; x.len()];
        for (k, &m) in self.map.iter().enumerate() {
            out[m] = x[k];
        }
        Ok(out)
    }
}

/// The 32-entry block permutation of the sub-block interleaver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubBlockPattern([usize; 32]);

impl SubBlockPattern {
    pub fn new(p: &[usize]) -> Result<Self> {
        let arr: [usize; 32] = p
            .try_into()
            .map_err(|_| Error::PatternInvalid(format!("expected 32 entries, got {}", p.len())))?;
        Permutation::new(arr.to_vec()).map_err(|e| Error::PatternInvalid(e.to_string()))?;
        Ok(Self(arr))
    }

    pub fn identity() -> Self {
        Self(std::array::from_fn(|i| i))
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }
}

/// Input-bit interleaver for `K` bits, derived from the 164-entry pattern
/// by keeping entries `>= 164 - K` in scan order and shifting them down.
pub fn input_interleaver(k: usize, pi_il_max: &[usize]) -> Result<Permutation> {
    if k > K_IL_MAX {
        return Err(Error::KTooLarge(k));
    }
    if pi_il_max.len() != K_IL_MAX {
        return Err(Error::WrongLength {
            expected: K_IL_MAX,
            actual: pi_il_max.len(),
        });
    }
    let h = K_IL_MAX - k;
    Permutation::new(
        pi_il_max
            .iter()
            .filter(|&&p| p >= h)
            .map(|&p| p - h)
            .collect(),
    )
}

/// Sub-block interleaver `J` for length `n`: `J(j) = B·P(⌊j/B⌋) + j mod B`
/// with `B = n / 32`.
pub fn sub_block_interleaver(n: usize, p: &SubBlockPattern) -> Result<Permutation> {
    if n < 32 || !n.is_power_of_two() {
        return Err(Error::BadN(n));
    }
    let b = n / 32;
    Permutation::new((0..n).map(|j| b * p.get(j / b) + j % b).collect())
}

/// Side of the triangular channel interleaver: smallest `T` with
/// `T(T+1)/2 >= e`.
pub fn triangle_side(e: usize) -> usize {
    let mut t = (((8.0 * e as f64 + 1.0).sqrt() - 1.0) / 2.0).ceil() as usize;
    while t * (t + 1) / 2 < e {
        t += 1;
    }
    while t > 0 && (t - 1) * t / 2 >= e {
        t -= 1;
    }
    t
}

/// Triangular channel interleaver: rows are filled with `e`, columns are
/// read out skipping empty cells.
pub fn channel_interleaver(e: usize) -> Permutation {
    let t = triangle_side(e);
    let row_start = |i: usize| i * (2 * t - i + 1) / 2;
    let mut map = Vec::with_capacity(e);
    for j in 0..t {
        for i in 0..t - j {
            let idx = row_start(i) + j;
            if idx < e {
                map.push(idx);
            }
        }
    }
    Permutation { map }
}

pub fn input_interleave<T: Copy>(c: &[T], pi_il_max: &[usize]) -> Result<Vec<T>> {
    input_interleaver(c.len(), pi_il_max)?.apply(c)
}

pub fn input_deinterleave<T: Copy>(c_prime: &[T], pi_il_max: &[usize]) -> Result<Vec<T>> {
    input_interleaver(c_prime.len(), pi_il_max)?.apply_inverse(c_prime)
}

pub fn sub_block_interleave<T: Copy>(d: &[T], p: &SubBlockPattern) -> Result<Vec<T>> {
    sub_block_interleaver(d.len(), p)?.apply(d)
}

pub fn sub_block_deinterleave<T: Copy>(y: &[T], p: &SubBlockPattern) -> Result<Vec<T>> {
    sub_block_interleaver(y.len(), p)?.apply_inverse(y)
}

pub fn channel_interleave<T: Copy>(e: &[T]) -> Vec<T> {
    channel_interleaver(e.len())
        .apply(e)
        .expect("interleaver built for this length")
}

pub fn channel_deinterleave<T: Copy>(f: &[T]) -> Vec<T> {
    channel_interleaver(f.len())
        .apply_inverse(f)
        .expect("interleaver built for this length")
}
