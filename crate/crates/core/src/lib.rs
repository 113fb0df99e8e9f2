//! 5G NR polar codes: the uplink and downlink encoding chains, SC and SCL
//! decoders, and a Monte-Carlo harness.

pub mod config;
pub mod construct;
pub mod crc;
pub mod data;
pub mod decode;
pub mod error;
pub mod interleave;
pub mod kernel;
pub mod pipeline;
pub mod ratematch;
pub mod sim;
pub mod soft;

pub use config::{ChannelKind, CodeConfig, PadPlacement, RmMode};
pub use error::{Error, Result};
