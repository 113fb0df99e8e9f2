//! Soft symbols seen by the receiver.
//!
//! Two domains are supported: ternary erasure symbols for the binary erasure
//! channel, and real-valued log-likelihood ratios. The LLR sign convention is
//! positive for "bit 0 more likely".

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default magnitude used for LLRs of bits the decoder knows with certainty.
pub const DEFAULT_LLR_SATURATION: f64 = 1.0e6;

/// A received symbol over the binary erasure channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ternary {
    Zero,
    One,
    Erased,
}

impl Ternary {
    pub fn from_bit(bit: u8) -> Self {
        if bit == 0 {
            Ternary::Zero
        } else {
            Ternary::One
        }
    }

    pub fn bit(self) -> Option<u8> {
        match self {
            Ternary::Zero => Some(0),
            Ternary::One => Some(1),
            Ternary::Erased => None,
        }
    }

    pub fn is_erased(self) -> bool {
        self == Ternary::Erased
    }

    /// LLR image: erasure maps to 0, known bits to +/- `saturation`.
    pub fn to_llr(self, saturation: f64) -> f64 {
        match self {
            Ternary::Zero => saturation,
            Ternary::One => -saturation,
            Ternary::Erased => 0.0,
        }
    }
}

/// Operations the de-rate-matcher needs from a soft symbol domain.
pub trait SoftSymbol: Copy {
    /// Symbol carrying no information (punctured position).
    fn neutral() -> Self;

    /// Symbol for a bit known to be zero (shortened position).
    fn known_zero(saturation: f64) -> Self;

    /// Merge two observations of the same code bit.
    fn combine(self, other: Self, position: usize) -> Result<Self>;
}

impl SoftSymbol for f64 {
    fn neutral() -> Self {
        0.0
    }

    fn known_zero(saturation: f64) -> Self {
        saturation
    }

    fn combine(self, other: Self, _position: usize) -> Result<Self> {
        Ok(self + other)
    }
}

impl SoftSymbol for Ternary {
    fn neutral() -> Self {
        Ternary::Erased
    }

    fn known_zero(_saturation: f64) -> Self {
        Ternary::Zero
    }

    fn combine(self, other: Self, position: usize) -> Result<Self> {
        match (self, other) {
            (Ternary::Erased, x) | (x, Ternary::Erased) => Ok(x),
            (a, b) if a == b => Ok(a),
            _ => Err(Error::ConflictingRepeats(position)),
        }
    }
}

/// Hard decision on an LLR; ties resolve to 0.
#[inline]
pub fn hard_decision(llr: f64) -> u8 {
    (llr < 0.0) as u8
}

/// Noiseless BPSK image of a bit vector with LLR magnitude `amplitude`.
pub fn bits_to_llr(bits: &[u8], amplitude: f64) -> Vec<f64> {
    bits.iter()
        .map(|&b| if b == 0 { amplitude } else { -amplitude })
        .collect()
}
