//! The complete encoding chain and its mirrored decoding front end.

use serde::{Deserialize, Serialize};

use crate::config::{ChannelKind, CodeConfig, PadPlacement};
use crate::construct::{assemble_u, build_allocation, SubchannelAllocation};
use crate::crc::{crc_attach, rnti_mask};
use crate::data::Tables;
use crate::decode::{CrcContext, DecodeResult, DecoderPolicy, ListDecoder};
use crate::error::{Error, Result};
use crate::interleave::{
    channel_interleaver, input_interleaver, sub_block_interleaver, Permutation,
};
use crate::kernel::polar_transform;
use crate::ratematch::{concatenate, de_rate_match, rate_match, split};
use crate::soft::SoftSymbol;

/// Intermediate vectors of one segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentTrace {
    #[serde(rename = "a'")]
    pub a_prime: Vec<u8>,
    pub c: Vec<u8>,
    #[serde(rename = "c'")]
    pub c_prime: Vec<u8>,
    pub u: Vec<u8>,
    pub d: Vec<u8>,
    pub y: Vec<u8>,
    pub e: Vec<u8>,
    pub f: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodeTrace {
    pub config: CodeConfig,
    pub allocation: SubchannelAllocation,
    pub a: Vec<u8>,
    pub segments: Vec<SegmentTrace>,
    pub g: Vec<u8>,
}

/// Flat test-vector layout with the stage vectors of each segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenVector {
    pub channel: ChannelKind,
    #[serde(rename = "A")]
    pub a: usize,
    #[serde(rename = "G")]
    pub g_len: usize,
    pub rnti: Option<u16>,
    pub msg: Vec<u8>,
    pub segments: Vec<SegmentTrace>,
    pub g: Vec<u8>,
}

impl EncodeTrace {
    pub fn golden(&self) -> GoldenVector {
        GoldenVector {
            channel: self.config.channel,
            a: self.config.a,
            g_len: self.config.g,
            rnti: self.config.rnti,
            msg: self.a.clone(),
            segments: self.segments.clone(),
            g: self.g.clone(),
        }
    }
}

/// Decoded payload of all segments.
#[derive(Debug, Clone, PartialEq)]
pub struct PayloadDecode {
    /// The `A` recovered message bits.
    pub message: Vec<u8>,
    pub segments: Vec<DecodeResult>,
}

impl PayloadDecode {
    pub fn crc_ok(&self) -> bool {
        self.segments.iter().all(|s| s.crc_ok)
    }

    pub fn is_valid(&self) -> bool {
        self.segments.iter().all(DecodeResult::is_valid)
    }

    pub fn terminated_early(&self) -> bool {
        self.segments.iter().any(|s| s.terminated_early.is_some())
    }
}

/// Everything derived from `(channel, A, G, rnti)` that both ends share.
#[derive(Debug, Clone)]
pub struct PolarCodec {
    cfg: CodeConfig,
    alloc: SubchannelAllocation,
    input_il: Option<Permutation>,
    sub_block: Permutation,
    channel_il: Option<Permutation>,
}

impl PolarCodec {
    pub fn new(cfg: CodeConfig) -> Result<Self> {
        Self::with_tables(cfg, Tables::global()?)
    }

    pub fn for_params(channel: ChannelKind, a: usize, g: usize, rnti: Option<u16>) -> Result<Self> {
        Self::new(CodeConfig::select(channel, a, g, rnti)?)
    }

    pub fn with_tables(cfg: CodeConfig, tables: &Tables) -> Result<Self> {
        let sub_block = sub_block_interleaver(cfg.n, &tables.sub_block)?;
        let alloc = build_allocation(&cfg, &tables.reliability, &sub_block)?;
        Self::assemble(cfg, alloc, sub_block, tables)
    }

    /// Codec with an externally supplied allocation (same `N`, `K`).
    pub fn with_allocation(
        cfg: CodeConfig,
        alloc: SubchannelAllocation,
        tables: &Tables,
    ) -> Result<Self> {
        if alloc.n != cfg.n || alloc.k() != cfg.k {
            return Err(Error::LengthMismatch {
                expected: cfg.k,
                actual: alloc.k(),
            });
        }
        let sub_block = sub_block_interleaver(cfg.n, &tables.sub_block)?;
        Self::assemble(cfg, alloc, sub_block, tables)
    }

    fn assemble(
        cfg: CodeConfig,
        alloc: SubchannelAllocation,
        sub_block: Permutation,
        tables: &Tables,
    ) -> Result<Self> {
        let input_il = if cfg.input_interleave {
            Some(input_interleaver(cfg.k, &tables.pi_il_max)?)
        } else {
            None
        };
        let channel_il = cfg.channel_interleave.then(|| channel_interleaver(cfg.e));
        Ok(Self {
            cfg,
            alloc,
            input_il,
            sub_block,
            channel_il,
        })
    }

    pub fn config(&self) -> &CodeConfig {
        &self.cfg
    }

    pub fn allocation(&self) -> &SubchannelAllocation {
        &self.alloc
    }

    pub fn crc_context(&self) -> CrcContext {
        CrcContext::new(&self.cfg, self.input_il.clone())
    }

    /// A decoder for one segment of this code.
    pub fn decoder(&self, policy: DecoderPolicy) -> Result<ListDecoder> {
        ListDecoder::new(&self.alloc, Some(&self.crc_context()), policy)
    }

    /// Per-segment messages `a'`, including segmentation and PDCCH padding.
    pub fn segment_message(&self, msg: &[u8]) -> Result<Vec<Vec<u8>>> {
        let cfg = &self.cfg;
        if msg.len() != cfg.a {
            return Err(Error::LengthMismatch {
                expected: cfg.a,
                actual: msg.len(),
            });
        }
        if let Some(i) = msg.iter().position(|&b| b > 1) {
            return Err(Error::InvalidInput(format!(
                "message bit {i} is not 0 or 1"
            )));
        }
        if cfg.segmented {
            let half = cfg.a / 2;
            let mut first = vec![0u8; cfg.a % 2];
            first.extend_from_slice(&msg[..half]);
            return Ok(vec![first, msg[half..].to_vec()]);
        }
        let pad = cfg.a_seg - cfg.a;
        let mut a_prime = Vec::with_capacity(cfg.a_seg);
        match cfg.dci_padding {
            PadPlacement::Append => {
                a_prime.extend_from_slice(msg);
                a_prime.resize(cfg.a_seg, 0);
            }
            PadPlacement::Prepend => {
                a_prime.resize(pad, 0);
                a_prime.extend_from_slice(msg);
            }
        }
        Ok(vec![a_prime])
    }

    /// Inverse of [`PolarCodec::segment_message`].
    pub fn join_segments(&self, a_primes: &[Vec<u8>]) -> Vec<u8> {
        let cfg = &self.cfg;
        if cfg.segmented {
            let mut out = a_primes[0][cfg.a % 2..].to_vec();
            out.extend_from_slice(&a_primes[1]);
            return out;
        }
        let a = &a_primes[0];
        match cfg.dci_padding {
            PadPlacement::Append => a[..cfg.a].to_vec(),
            PadPlacement::Prepend => a[cfg.a_seg - cfg.a..].to_vec(),
        }
    }

    fn encode_segment(&self, a_prime: Vec<u8>) -> Result<SegmentTrace> {
        let cfg = &self.cfg;
        let mut c = crc_attach(&a_prime, cfg.crc_poly, cfg.crc_init);
        if let Some(r) = cfg.rnti {
            c = rnti_mask(&c, r, cfg.a_seg)?;
        }
        let c_prime = match &self.input_il {
            Some(p) => p.apply(&c)?,
            None => c.clone(),
        };
        let u = assemble_u(&self.alloc, &c_prime)?;
        let d = polar_transform(&u)?;
        let y = self.sub_block.apply(&d)?;
        let e = rate_match(&y, cfg.e, cfg.rm_mode)?;
        let f = match &self.channel_il {
            Some(p) => p.apply(&e)?,
            None => e.clone(),
        };
        Ok(SegmentTrace {
            a_prime,
            c,
            c_prime,
            u,
            d,
            y,
            e,
            f,
        })
    }

    /// Run the full chain on an `A`-bit message.
    pub fn encode(&self, msg: &[u8]) -> Result<EncodeTrace> {
        let segments = self
            .segment_message(msg)?
            .into_iter()
            .map(|a| self.encode_segment(a))
            .collect::<Result<Vec<_>>>()?;
        let g = if self.cfg.segmented {
            concatenate(&segments[0].f, &segments[1].f, self.cfg.g)?
        } else {
            segments[0].f.clone()
        };
        Ok(EncodeTrace {
            config: self.cfg.clone(),
            allocation: self.alloc.clone(),
            a: msg.to_vec(),
            segments,
            g,
        })
    }

    /// Only the transmitted payload `g`.
    pub fn encode_payload(&self, msg: &[u8]) -> Result<Vec<u8>> {
        Ok(self.encode(msg)?.g)
    }

    /// Split, de-interleave and de-rate-match received soft values into one
    /// length-`N` vector per segment, in the codeword (`d`) domain.
    pub fn prepare_decoder_input<S: SoftSymbol>(
        &self,
        g_soft: &[S],
        saturation: f64,
    ) -> Result<Vec<Vec<S>>> {
        let cfg = &self.cfg;
        if g_soft.len() != cfg.g {
            return Err(Error::LengthMismatch {
                expected: cfg.g,
                actual: g_soft.len(),
            });
        }
        let parts = if cfg.segmented {
            let (a, b) = split(g_soft, cfg.g)?;
            vec![a, b]
        } else {
            vec![g_soft.to_vec()]
        };
        parts
            .into_iter()
            .map(|f| {
                let e = match &self.channel_il {
                    Some(p) => p.apply_inverse(&f)?,
                    None => f,
                };
                let y = de_rate_match(&e, cfg.n, cfg.rm_mode, saturation)?;
                self.sub_block.apply_inverse(&y)
            })
            .collect()
    }

    /// Decode a received payload of `G` LLRs with `decoder` (built by
    /// [`PolarCodec::decoder`]).
    pub fn decode(
        &self,
        g_llr: &[f64],
        decoder: &mut ListDecoder,
        saturation: f64,
    ) -> Result<PayloadDecode> {
        let segments = self
            .prepare_decoder_input(g_llr, saturation)?
            .iter()
            .map(|llr| decoder.decode(llr))
            .collect::<Result<Vec<_>>>()?;
        let a_primes: Vec<Vec<u8>> = segments
            .iter()
            .map(|s| s.message[..self.cfg.a_seg].to_vec())
            .collect();
        Ok(PayloadDecode {
            message: self.join_segments(&a_primes),
            segments,
        })
    }
}

/// Encode `msg` for `(channel, A, G, rnti)`.
pub fn encode(
    channel: ChannelKind,
    a: usize,
    g: usize,
    msg: &[u8],
    rnti: Option<u16>,
) -> Result<EncodeTrace> {
    PolarCodec::for_params(channel, a, g, rnti)?.encode(msg)
}

/// Decoder inputs for a received payload: per segment, the length-`N`
/// soft vector with the configuration and allocation it belongs to.
pub fn prepare_decoder_input<S: SoftSymbol>(
    channel: ChannelKind,
    a: usize,
    g: usize,
    g_soft: &[S],
    rnti: Option<u16>,
    saturation: f64,
) -> Result<Vec<(Vec<S>, CodeConfig, SubchannelAllocation)>> {
    let codec = PolarCodec::for_params(channel, a, g, rnti)?;
    Ok(codec
        .prepare_decoder_input(g_soft, saturation)?
        .into_iter()
        .map(|v| (v, codec.cfg.clone(), codec.alloc.clone()))
        .collect())
}
