//! Simulation records and their CSV form.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 13] = [
    "config",
    "channel",
    "A",
    "G",
    "E",
    "N",
    "snr_db",
    "frames",
    "block_errors",
    "bit_errors",
    "false_alarms",
    "early_term_rate",
    "seconds",
];

/// Outcome of one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    /// Code, channel model and decoder, e.g. `pucch-A32-G108/bpsk/L8`.
    pub config: String,
    pub channel: String,
    #[serde(rename = "A")]
    pub a: usize,
    #[serde(rename = "G")]
    pub g: usize,
    #[serde(rename = "E")]
    pub e: usize,
    #[serde(rename = "N")]
    pub n: usize,
    /// Es/N0 in dB, or the erasure probability for the BEC.
    pub snr_db: f64,
    pub frames: u64,
    pub block_errors: u64,
    pub bit_errors: u64,
    /// Frames accepted by the CRC with a wrong message.
    pub false_alarms: u64,
    pub early_term_rate: f64,
    /// Wall time, recorded only on request so that reports stay
    /// reproducible.
    pub seconds: Option<f64>,
}

impl SimReport {
    pub fn bler(&self) -> f64 {
        self.block_errors as f64 / self.frames as f64
    }

    pub fn far(&self) -> f64 {
        self.false_alarms as f64 / self.frames as f64
    }
}

/// Write reports as CSV, sorted by configuration and sweep point.
pub fn write_csv<W: Write>(reports: &[SimReport], out: W) -> Result<()> {
    let mut sorted: Vec<&SimReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.config.cmp(&b.config).then(a.snr_db.total_cmp(&b.snr_db)));
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Data(e.to_string());
    if sorted.is_empty() {
        w.write_record(CSV_HEADER).map_err(io)?;
    }
    for r in sorted {
        w.serialize(r).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Data(e.to_string()))?;
    Ok(())
}

pub fn to_csv_string(reports: &[SimReport]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(reports, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Data(e.to_string()))
}
