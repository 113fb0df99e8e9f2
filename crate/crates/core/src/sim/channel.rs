//! Channel models producing codeword LLRs (positive favours 0).

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Channel family; the sweep variable is `delta` for the BEC and Es/N0 in
/// dB otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Noiseless,
    Bec,
    Bpsk,
    Qpsk,
}

impl ModelKind {
    pub fn at(self, point: f64) -> Result<ChannelModel> {
        match self {
            ModelKind::Noiseless => Ok(ChannelModel::Noiseless),
            ModelKind::Bec => {
                if !(0.0..=1.0).contains(&point) {
                    return Err(Error::InvalidInput(format!(
                        "erasure probability {point} outside [0, 1]"
                    )));
                }
                Ok(ChannelModel::Bec { delta: point })
            }
            ModelKind::Bpsk => Ok(ChannelModel::BpskAwgn { es_n0_db: point }),
            ModelKind::Qpsk => Ok(ChannelModel::QpskAwgn { es_n0_db: point }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Noiseless => "noiseless",
            ModelKind::Bec => "bec",
            ModelKind::Bpsk => "bpsk",
            ModelKind::Qpsk => "qpsk",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "noiseless" => Ok(ModelKind::Noiseless),
            "bec" => Ok(ModelKind::Bec),
            "bpsk" | "bpsk-awgn" => Ok(ModelKind::Bpsk),
            "qpsk" | "qpsk-awgn" => Ok(ModelKind::Qpsk),
            other => Err(Error::InvalidInput(format!(
                "unknown channel model {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ChannelModel {
    Noiseless,
    Bec {
        delta: f64,
    },
    BpskAwgn {
        es_n0_db: f64,
    },
    /// Gray-mapped QPSK, i.e. two BPSK streams at amplitude `1/√2`.
    QpskAwgn {
        es_n0_db: f64,
    },
}

/// Per-dimension noise variance for unit symbol energy.
pub fn noise_variance(es_n0_db: f64) -> f64 {
    1.0 / (2.0 * 10f64.powf(es_n0_db / 10.0))
}

impl ChannelModel {
    /// LLRs for transmitted bits; `saturation` is the magnitude of a
    /// perfectly known bit.
    pub fn transmit<R: Rng + ?Sized>(&self, bits: &[u8], saturation: f64, rng: &mut R) -> Vec<f64> {
        let sign = |b: u8| if b == 0 { 1.0 } else { -1.0 };
        match *self {
            ChannelModel::Noiseless => bits.iter().map(|&b| sign(b) * saturation).collect(),
            ChannelModel::Bec { delta } => bits
                .iter()
                .map(|&b| {
                    if rng.random::<f64>() < delta {
                        0.0
                    } else {
                        sign(b) * saturation
                    }
                })
                .collect(),
            ChannelModel::BpskAwgn { es_n0_db } => awgn(bits, 1.0, noise_variance(es_n0_db), rng),
            ChannelModel::QpskAwgn { es_n0_db } => awgn(
                bits,
                std::f64::consts::FRAC_1_SQRT_2,
                noise_variance(es_n0_db),
                rng,
            ),
        }
    }
}

fn awgn<R: Rng + ?Sized>(bits: &[u8], amp: f64, sigma2: f64, rng: &mut R) -> Vec<f64> {
    let sigma = sigma2.sqrt();
    bits.iter()
        .map(|&b| {
            let x = if b == 0 { amp } else { -amp };
            let n: f64 = StandardNormal.sample(rng);
            let y = x + sigma * n;
            2.0 * amp * y / sigma2
        })
        .collect()
}
