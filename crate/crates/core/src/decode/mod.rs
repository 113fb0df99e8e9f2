//! Decoders: SC over the BEC, SC and SCL on LLRs, and an exhaustive ML
//! reference.

mod bec;
mod ml;
mod sc;
mod scl;

pub use bec::sc_decode_bec;
pub use ml::{correlation_discrepancy, ml_decode_bruteforce, ML_MAX_K};
pub use sc::sc_decode_llr;
pub use scl::{scl_decode, ListDecoder};

use serde::{Deserialize, Serialize};

use crate::config::{ChannelKind, CodeConfig};
use crate::crc::{crc_check, CrcInit, CrcPoly};
use crate::error::{Error, Result};
use crate::interleave::Permutation;

/// Handling of an assistant bit (parity check or distributed CRC bit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssistMode {
    /// The bit is set to its computed value, like a frozen bit.
    DynamicFrozen,
    /// Both values are explored; paths violating the check are dropped.
    KillFailedPaths,
    /// Both values are explored; violating paths stay in the list, flagged.
    KeepFailedPaths,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoderPolicy {
    pub list_size: usize,
    /// Parity-check bits.
    pub pc_mode: AssistMode,
    /// CRC bits that can be checked before the end of the block.
    pub dcrc_mode: AssistMode,
    /// Stop as soon as no path satisfies all checks seen so far.
    pub early_termination: bool,
}

impl DecoderPolicy {
    pub fn new(list_size: usize) -> Self {
        Self {
            list_size,
            pc_mode: AssistMode::DynamicFrozen,
            dcrc_mode: AssistMode::DynamicFrozen,
            early_termination: false,
        }
    }

    /// Conventional setting per channel: parity checks as dynamic frozen
    /// bits on the uplink; distributed CRC checks with early termination on
    /// the downlink.
    pub fn for_channel(channel: ChannelKind, list_size: usize) -> Self {
        match channel {
            ChannelKind::UciPucchPusch => Self::new(list_size),
            ChannelKind::DciPdcch | ChannelKind::PbchPayload => Self {
                dcrc_mode: AssistMode::KeepFailedPaths,
                early_termination: true,
                ..Self::new(list_size)
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.list_size == 0 {
            return Err(Error::InvalidPolicy("list size must be at least 1".into()));
        }
        if self.early_termination
            && self.pc_mode == AssistMode::DynamicFrozen
            && self.dcrc_mode == AssistMode::DynamicFrozen
        {
            return Err(Error::InvalidPolicy(
                "early termination needs a check that is not dynamically frozen".into(),
            ));
        }
        Ok(())
    }
}

/// CRC parameters of one segment as seen by the decoder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrcContext {
    pub poly: CrcPoly,
    pub init: CrcInit,
    pub rnti: Option<u16>,
    /// Bits covered by the CRC (`A'`).
    pub msg_len: usize,
    /// Input interleaver, `c'_k = c_{Π(k)}`, if used.
    pub interleaver: Option<Permutation>,
}

impl CrcContext {
    pub fn new(cfg: &CodeConfig, interleaver: Option<Permutation>) -> Self {
        Self {
            poly: cfg.crc_poly,
            init: cfg.crc_init,
            rnti: cfg.rnti,
            msg_len: cfg.a_seg,
            interleaver,
        }
    }

    pub fn check(&self, c: &[u8]) -> bool {
        crc_check(c, self.poly, self.init, self.rnti)
    }

    /// `c` from its interleaved order `c'`.
    pub fn deinterleave(&self, c_prime: &[u8]) -> Vec<u8> {
        match &self.interleaver {
            Some(p) => p.apply_inverse(c_prime).expect("interleaver length is K"),
            None => c_prime.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeResult {
    /// The decoded `c` (message and CRC, de-interleaved).
    pub message: Vec<u8>,
    /// CRC of `message` verifies (true when no CRC is attached).
    pub crc_ok: bool,
    /// The chosen path satisfied every parity and distributed-CRC check.
    pub checks_ok: bool,
    /// Leaf index at which decoding stopped early.
    pub terminated_early: Option<usize>,
    pub chosen_path_metric: f64,
    /// Candidate extensions scored over the whole block.
    pub paths_explored: usize,
    pub u_hat: Vec<u8>,
}

impl DecodeResult {
    /// Accepted as a valid codeword.
    pub fn is_valid(&self) -> bool {
        self.crc_ok && self.checks_ok && self.terminated_early.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_validation() {
        assert!(DecoderPolicy::new(8).validate().is_ok());
        assert!(DecoderPolicy::new(0).validate().is_err());
        let p = DecoderPolicy {
            early_termination: true,
            ..DecoderPolicy::new(4)
        };
        assert!(matches!(p.validate(), Err(Error::InvalidPolicy(_))));
        assert!(DecoderPolicy::for_channel(ChannelKind::DciPdcch, 8)
            .validate()
            .is_ok());
    }
}
