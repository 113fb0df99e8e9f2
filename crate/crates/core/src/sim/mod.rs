//! Monte-Carlo harness: block error rate and false-alarm rate estimation
//! with frame-level parallelism and per-frame random streams.

mod channel;
mod polarize;
mod report;

pub use channel::{noise_variance, ChannelModel, ModelKind};
pub use polarize::bec_polarize;
pub use report::{to_csv_string, write_csv, SimReport, CSV_HEADER};

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::config::CodeConfig;
use crate::decode::{DecoderPolicy, ListDecoder};
use crate::error::{Error, Result};
use crate::pipeline::PolarCodec;
use crate::soft::DEFAULT_LLR_SATURATION;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub frames: u64,
    pub seed: u64,
    pub policy: DecoderPolicy,
    pub saturation: f64,
    /// Fill the `seconds` column.
    pub timing: bool,
}

impl SimOptions {
    pub fn new(frames: u64, seed: u64, policy: DecoderPolicy) -> Self {
        Self {
            frames,
            seed,
            policy,
            saturation: DEFAULT_LLR_SATURATION,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    block_errors: u64,
    bit_errors: u64,
    false_alarms: u64,
    early_terms: u64,
}

impl Tally {
    fn merge(self, o: Self) -> Self {
        Self {
            block_errors: self.block_errors + o.block_errors,
            bit_errors: self.bit_errors + o.bit_errors,
            false_alarms: self.false_alarms + o.false_alarms,
            early_terms: self.early_terms + o.early_terms,
        }
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of the random stream family for one (code, sweep point).
fn point_seed(master: u64, cfg: &CodeConfig, tag: &str, point: f64) -> u64 {
    let mut h = splitmix(master);
    for word in [
        cfg.channel as u64,
        cfg.a as u64,
        cfg.g as u64,
        cfg.rnti.map_or(u64::MAX, u64::from),
        point.to_bits(),
    ]
    .into_iter()
    .chain(tag.bytes().map(u64::from))
    {
        h = splitmix(h ^ word);
    }
    h
}

fn frame_rng(point_seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed);
    rng.set_stream(frame);
    rng
}

fn check_frames(frames: u64) -> Result<()> {
    if frames == 0 {
        return Err(Error::InvalidInput("frames must be at least 1".into()));
    }
    Ok(())
}

fn label(cfg: &CodeConfig, model: &str, policy: &DecoderPolicy) -> String {
    format!("{}/{}/L{}", cfg.id(), model, policy.list_size)
}

fn report(
    cfg: &CodeConfig,
    model: &str,
    point: f64,
    opts: &SimOptions,
    t: Tally,
    started: Instant,
) -> SimReport {
    SimReport {
        config: label(cfg, model, &opts.policy),
        channel: cfg.channel.to_string(),
        a: cfg.a,
        g: cfg.g,
        e: cfg.e,
        n: cfg.n,
        snr_db: point,
        frames: opts.frames,
        block_errors: t.block_errors,
        bit_errors: t.bit_errors,
        false_alarms: t.false_alarms,
        early_term_rate: t.early_terms as f64 / opts.frames as f64,
        seconds: opts.timing.then(|| started.elapsed().as_secs_f64()),
    }
}

fn run_frames<F>(codec: &PolarCodec, opts: &SimOptions, frame: F) -> Result<Tally>
where
    F: Fn(&mut ListDecoder, u64) -> Result<Tally> + Sync,
{
    let proto = codec.decoder(opts.policy)?;
    (0..opts.frames)
        .into_par_iter()
        .map_init(|| proto.clone(), |dec, f| frame(dec, f))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}

/// Block error rate of one code at one channel point.
pub fn run_point(
    codec: &PolarCodec,
    model: ModelKind,
    point: f64,
    opts: &SimOptions,
) -> Result<SimReport> {
    check_frames(opts.frames)?;
    let channel = model.at(point)?;
    let cfg = codec.config();
    let seed = point_seed(opts.seed, cfg, model.name(), point);
    let started = Instant::now();
    let tally = run_frames(codec, opts, |dec, f| {
        let mut rng = frame_rng(seed, f);
        let msg: Vec<u8> = (0..cfg.a).map(|_| rng.random_range(0..2u8)).collect();
        let g = codec.encode_payload(&msg)?;
        let llr = channel.transmit(&g, opts.saturation, &mut rng);
        let out = codec.decode(&llr, dec, opts.saturation)?;
        let bit_errors = out.message.iter().zip(&msg).filter(|(a, b)| a != b).count() as u64;
        let wrong = bit_errors > 0;
        Ok(Tally {
            block_errors: u64::from(wrong || !out.is_valid()),
            bit_errors,
            false_alarms: u64::from(wrong && out.is_valid()),
            early_terms: u64::from(out.terminated_early()),
        })
    })?;
    Ok(report(cfg, model.name(), point, opts, tally, started))
}

/// Sweep every configuration over every channel point.
pub fn run_bler(
    configs: &[CodeConfig],
    model: ModelKind,
    points: &[f64],
    opts: &SimOptions,
) -> Result<Vec<SimReport>> {
    check_frames(opts.frames)?;
    let mut out = Vec::with_capacity(configs.len() * points.len());
    for cfg in configs {
        let codec = PolarCodec::new(cfg.clone())?;
        for &p in points {
            out.push(run_point(&codec, model, p, opts)?);
        }
    }
    Ok(out)
}

/// False-alarm rate: decode pure noise and count frames the decoder
/// accepts as valid.
pub fn run_far(cfg: &CodeConfig, opts: &SimOptions) -> Result<SimReport> {
    check_frames(opts.frames)?;
    let codec = PolarCodec::new(cfg.clone())?;
    let seed = point_seed(opts.seed, cfg, "noise", f64::NEG_INFINITY);
    let started = Instant::now();
    let tally = run_frames(&codec, opts, |dec, f| {
        let mut rng = frame_rng(seed, f);
        let llr: Vec<f64> = (0..cfg.g)
            .map(|_| {
                let n: f64 = StandardNormal.sample(&mut rng);
                2.0 * n
            })
            .collect();
        let out = codec.decode(&llr, dec, opts.saturation)?;
        Ok(Tally {
            block_errors: 0,
            bit_errors: 0,
            false_alarms: u64::from(out.is_valid()),
            early_terms: u64::from(out.terminated_early()),
        })
    })?;
    Ok(report(
        cfg,
        "noise",
        f64::NEG_INFINITY,
        opts,
        tally,
        started,
    ))
}
