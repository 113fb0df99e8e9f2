//! Code parameter selection for one (channel, A, G) instance.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::crc::{CrcInit, CrcPoly};
use crate::error::{Error, Result};

pub const N_MIN_LOG2: u32 = 5;

/// Physical channel families with distinct polar parameterizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    /// Uplink control information on PUCCH or PUSCH.
    UciPucchPusch,
    /// Downlink control information on PDCCH.
    DciPdcch,
    /// Broadcast payload on PBCH.
    PbchPayload,
}

impl ChannelKind {
    pub fn n_max_log2(self) -> u32 {
        match self {
            ChannelKind::UciPucchPusch => 10,
            ChannelKind::DciPdcch | ChannelKind::PbchPayload => 9,
        }
    }

    pub fn is_uplink(self) -> bool {
        self == ChannelKind::UciPucchPusch
    }

    pub fn short_name(self) -> &'static str {
        match self {
            ChannelKind::UciPucchPusch => "uci",
            ChannelKind::DciPdcch => "pdcch",
            ChannelKind::PbchPayload => "pbch",
        }
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pucch" | "pusch" | "uci" | "uplink" | "uci_pucch_pusch" => {
                Ok(ChannelKind::UciPucchPusch)
            }
            "pdcch" | "dci" | "dci_pdcch" => Ok(ChannelKind::DciPdcch),
            "pbch" | "pbch_payload" => Ok(ChannelKind::PbchPayload),
            other => Err(Error::InvalidInput(format!("unknown channel {other:?}"))),
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RmMode {
    Puncture,
    Shorten,
    Repeat,
}

impl RmMode {
    /// Mode chosen for `k` bits into `e` transmitted bits from a length-`n`
    /// mother code.
    pub fn select(k: usize, e: usize, n: usize) -> Self {
        if e > n {
            RmMode::Repeat
        } else if 16 * k <= 7 * e {
            RmMode::Puncture
        } else {
            RmMode::Shorten
        }
    }
}

impl fmt::Display for RmMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RmMode::Puncture => "puncture",
            RmMode::Shorten => "shorten",
            RmMode::Repeat => "repeat",
        })
    }
}

/// Where PDCCH zero padding goes when `A < 12`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PadPlacement {
    #[default]
    Append,
    Prepend,
}

/// All derived parameters of one code instance. Serialized field names use
/// the conventional symbols (A, G, E, K, N, ...).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeConfig {
    pub channel: ChannelKind,
    /// Message bits.
    #[serde(rename = "A")]
    pub a: usize,
    /// Payload (transmitted) bits.
    #[serde(rename = "G")]
    pub g: usize,
    pub segmented: bool,
    /// Message bits per segment, after PDCCH padding.
    #[serde(rename = "A_prime")]
    pub a_seg: usize,
    /// Codeword bits per segment.
    #[serde(rename = "E")]
    pub e: usize,
    #[serde(rename = "L")]
    pub crc_len: usize,
    pub crc_poly: CrcPoly,
    pub crc_init: CrcInit,
    pub rnti: Option<u16>,
    #[serde(rename = "I_IL")]
    pub input_interleave: bool,
    #[serde(rename = "I_BIL")]
    pub channel_interleave: bool,
    pub n_pc: usize,
    pub n_pc_wm: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "K_prime")]
    pub k_prime: usize,
    #[serde(rename = "n")]
    pub n_log2: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub rm_mode: RmMode,
    /// `|N - E|`: untransmitted (puncture/shorten) or repeated bits.
    #[serde(rename = "U")]
    pub rm_count: usize,
    pub dci_padding: PadPlacement,
}

/// Segmentation predicate for uplink payloads.
pub fn segmentation_required(a: usize, g: usize) -> bool {
    a >= 1013 || (a >= 360 && g >= 1088)
}

/// First candidate exponent from the codeword length, with the
/// fractional-part correction that avoids an overly heavy rate match.
pub fn first_exponent(e: usize, k: usize) -> u32 {
    let log2e = (e as f64).log2();
    let ceil = log2e.ceil() as u32;
    let frac = log2e - log2e.floor();
    if frac < 0.17 && 16 * k < 9 * e {
        log2e.floor() as u32
    } else {
        ceil
    }
}

/// Exponent bounding the rate below 1/8: `⌈log2(8K)⌉`.
pub fn rate_exponent(k: usize) -> u32 {
    (8 * k).next_power_of_two().trailing_zeros()
}

fn bounds(what: &str, value: usize, lo: usize, hi: usize, channel: ChannelKind) -> Result<()> {
    if value < lo || value > hi {
        return Err(Error::BoundsViolation(format!(
            "{what} = {value} outside [{lo}, {hi}] for {channel}"
        )));
    }
    Ok(())
}

impl CodeConfig {
    /// Derive the full parameter set. `rnti` applies to PDCCH only.
    pub fn select(channel: ChannelKind, a: usize, g: usize, rnti: Option<u16>) -> Result<Self> {
        if rnti.is_some() && channel != ChannelKind::DciPdcch {
            return Err(Error::InvalidInput(format!(
                "RNTI masking applies to PDCCH only, not {channel}"
            )));
        }
        let (segmented, a_seg, e);
        let (crc_poly, crc_init, n_pc, n_pc_wm, input_interleave, channel_interleave);
        match channel {
            ChannelKind::UciPucchPusch => {
                bounds("A", a, 12, 1706, channel)?;
                segmented = segmentation_required(a, g);
                let g_max = if segmented { 16384 } else { 8192 };
                let g_min = if a >= 20 { 31 } else { 18 };
                bounds("G", g, g_min.max(a), g_max, channel)?;
                a_seg = a.div_ceil(if segmented { 2 } else { 1 });
                e = if segmented { g / 2 } else { g };
                crc_init = CrcInit::Zeros;
                input_interleave = false;
                channel_interleave = true;
                if a >= 20 {
                    crc_poly = CrcPoly::G11;
                    n_pc = 0;
                    n_pc_wm = 0;
                } else {
                    crc_poly = CrcPoly::G6;
                    n_pc = 3;
                    n_pc_wm = usize::from(e - a > 175);
                }
            }
            ChannelKind::DciPdcch => {
                bounds("A", a, 1, 140, channel)?;
                bounds("G", g, 25.max(a), 8192, channel)?;
                segmented = false;
                a_seg = a.max(12);
                e = g;
                crc_poly = CrcPoly::G24;
                crc_init = CrcInit::Ones;
                n_pc = 0;
                n_pc_wm = 0;
                input_interleave = true;
                channel_interleave = false;
            }
            ChannelKind::PbchPayload => {
                bounds("A", a, 32, 32, channel)?;
                bounds("G", g, 864, 864, channel)?;
                segmented = false;
                a_seg = a;
                e = g;
                crc_poly = CrcPoly::G24;
                crc_init = CrcInit::Zeros;
                n_pc = 0;
                n_pc_wm = 0;
                input_interleave = true;
                channel_interleave = false;
            }
        }

        let crc_len = crc_poly.degree();
        let k = a_seg + crc_len;
        let k_prime = k + n_pc;
        let n1 = first_exponent(e, k);
        let n2 = rate_exponent(k);
        let n_log2 = n1.min(n2).min(channel.n_max_log2()).max(N_MIN_LOG2);
        let n = 1usize << n_log2;
        if k_prime >= n {
            return Err(Error::RateTooHigh { k_prime, n });
        }
        let rm_mode = RmMode::select(k, e, n);
        Ok(Self {
            channel,
            a,
            g,
            segmented,
            a_seg,
            e,
            crc_len,
            crc_poly,
            crc_init,
            rnti,
            input_interleave,
            channel_interleave,
            n_pc,
            n_pc_wm,
            k,
            k_prime,
            n_log2,
            n,
            rm_mode,
            rm_count: n.abs_diff(e),
            dci_padding: PadPlacement::Append,
        })
    }

    pub fn with_dci_padding(mut self, placement: PadPlacement) -> Self {
        self.dci_padding = placement;
        self
    }

    pub fn segments(&self) -> usize {
        if self.segmented {
            2
        } else {
            1
        }
    }

    /// Short identifier such as `pdcch-A40-G200`.
    pub fn id(&self) -> String {
        format!("{}-A{}-G{}", self.channel, self.a, self.g)
    }
}
