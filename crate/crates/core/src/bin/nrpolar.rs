use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use nrpolar::decode::DecoderPolicy;
use nrpolar::pipeline::PolarCodec;
use nrpolar::sim::{bec_polarize, run_bler, write_csv, ModelKind, SimOptions};
use nrpolar::soft::DEFAULT_LLR_SATURATION;
use nrpolar::{ChannelKind, CodeConfig, Error};

#[derive(Parser)]
#[command(name = "nrpolar", version, about = "5G NR polar codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the derived code configuration as JSON.
    Info(CodeArgs),
    /// Encode a message and print the transmitted bits.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        msg: MsgArg,
    },
    /// Decode received LLRs (positive favours 0) or hard bits.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        /// Comma or whitespace separated LLRs, one per transmitted bit.
        #[arg(
            long,
            conflicts_with = "bits",
            required_unless_present = "bits",
            allow_hyphen_values = true
        )]
        llr: Option<String>,
        /// Hard-decision bits, binary or 0x-prefixed hex.
        #[arg(long)]
        bits: Option<String>,
        #[arg(long, default_value_t = 8)]
        list: usize,
    },
    /// Print every intermediate vector of the encoding chain as JSON.
    Vectors {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        msg: MsgArg,
        /// Flat golden-vector layout instead of the full trace.
        #[arg(long)]
        golden: bool,
    },
    /// Monte-Carlo block error rate sweep, written as CSV.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        /// Sweep as start:step:stop, or a comma separated list.
        #[arg(long, value_parser = parse_sweep, allow_hyphen_values = true)]
        snr: Sweep,
        #[arg(long, default_value_t = 1000)]
        frames: u64,
        #[arg(long, default_value_t = 8)]
        list: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// noiseless, bec, bpsk or qpsk.
        #[arg(long, default_value = "bpsk")]
        model: ModelKind,
        /// Record wall time in the seconds column.
        #[arg(long)]
        timing: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Erasure probabilities of the synthetic channels of a BEC, as CSV.
    Polarize {
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CodeArgs {
    /// pucch, pusch, pdcch or pbch.
    #[arg(long)]
    channel: ChannelKind,
    /// Payload length.
    #[arg(long = "A")]
    a: usize,
    /// Transmitted length.
    #[arg(long = "G")]
    g: usize,
    /// 16-bit RNTI scrambling the CRC (PDCCH only).
    #[arg(long, value_parser = parse_u16)]
    rnti: Option<u16>,
}

impl CodeArgs {
    fn config(&self) -> Result<CodeConfig, Error> {
        CodeConfig::select(self.channel, self.a, self.g, self.rnti)
    }
}

#[derive(Args)]
struct MsgArg {
    /// Binary string, or 0x-prefixed hex right-aligned to A bits.
    #[arg(long)]
    msg: String,
}

#[derive(Clone)]
struct Sweep(Vec<f64>);

fn parse_u16(s: &str) -> Result<u16, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u16::from_str_radix(h, 16),
        None => s.parse(),
    };
    r.map_err(|e| e.to_string())
}

fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let parts: Vec<&str> = s.split(':').collect();
    let points = match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if step <= 0.0 || stop < start {
                return Err("need step > 0 and stop >= start".into());
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            (0..count)
                .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
                .collect()
        }
        [list] => list.split(',').map(num).collect::<Result<_, _>>()?,
        _ => return Err("expected start:step:stop or a list".into()),
    };
    Ok(Sweep(points))
}

/// Bits from a binary string or a `0x` hex string. Hex input is read most
/// significant bit first and must have exactly `ceil(len / 4)` digits with
/// the surplus leading bits zero.
fn parse_bits(s: &str, len: Option<usize>) -> Result<Vec<u8>, Error> {
    let bad = |m: String| Error::InvalidInput(m);
    let s = s.trim();
    let bits: Vec<u8> = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => {
            let mut v = Vec::with_capacity(hex.len() * 4);
            for c in hex.chars() {
                let d = c
                    .to_digit(16)
                    .ok_or_else(|| bad(format!("invalid hex digit {c:?}")))?;
                v.extend((0..4).rev().map(|b| ((d >> b) & 1) as u8));
            }
            match len {
                Some(l) if v.len() >= l && v.len() - l < 4 => {
                    let extra = v.len() - l;
                    if v[..extra].iter().any(|&b| b != 0) {
                        return Err(bad(format!("hex value exceeds {l} bits")));
                    }
                    v.split_off(extra)
                }
                Some(l) => return Err(bad(format!("expected {} hex digits", l.div_ceil(4)))),
                None => v,
            }
        }
        None => s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '_')
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(bad(format!("invalid bit {c:?}"))),
            })
            .collect::<Result<_, _>>()?,
    };
    if let Some(l) = len {
        if bits.len() != l {
            return Err(Error::LengthMismatch {
                expected: l,
                actual: bits.len(),
            });
        }
    }
    Ok(bits)
}

fn bit_string(bits: &[u8]) -> String {
    bits.iter()
        .map(|&b| if b == 0 { '0' } else { '1' })
        .collect()
}

fn sink(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json<T: Serialize>(value: &T, pretty: bool) -> Result<(), Error> {
    let s = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .map_err(|e| Error::Data(e.to_string()))?;
    print_line(&s)
}

fn print_line(s: &str) -> Result<(), Error> {
    writeln!(io::stdout().lock(), "{s}").map_err(|e| Error::Data(e.to_string()))
}

#[derive(Serialize)]
struct DecodeOutput {
    message: String,
    crc_ok: bool,
    valid: bool,
    terminated_early: bool,
}

fn run(cli: Cli) -> Result<(), Error> {
    let io_err = |e: io::Error| Error::Data(e.to_string());
    match cli.command {
        Command::Info(code) => print_json(&code.config()?, true),
        Command::Encode { code, msg } => {
            let codec = PolarCodec::new(code.config()?)?;
            let g = codec.encode_payload(&parse_bits(&msg.msg, Some(code.a))?)?;
            print_line(&bit_string(&g))
        }
        Command::Vectors { code, msg, golden } => {
            let codec = PolarCodec::new(code.config()?)?;
            let trace = codec.encode(&parse_bits(&msg.msg, Some(code.a))?)?;
            if golden {
                print_json(&trace.golden(), false)
            } else {
                print_json(&trace, false)
            }
        }
        Command::Decode {
            code,
            llr,
            bits,
            list,
        } => {
            let cfg = code.config()?;
            let llr: Vec<f64> = match (llr, bits) {
                (Some(text), _) => text
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.parse::<f64>()
                            .map_err(|e| Error::InvalidInput(format!("{t:?}: {e}")))
                    })
                    .collect::<Result<_, _>>()?,
                (None, Some(b)) => nrpolar::soft::bits_to_llr(
                    &parse_bits(&b, Some(cfg.g))?,
                    DEFAULT_LLR_SATURATION,
                ),
                (None, None) => unreachable!("enforced by the argument parser"),
            };
            let codec = PolarCodec::new(cfg.clone())?;
            let mut dec = codec.decoder(DecoderPolicy::for_channel(cfg.channel, list))?;
            let out = codec.decode(&llr, &mut dec, DEFAULT_LLR_SATURATION)?;
            print_json(
                &DecodeOutput {
                    message: bit_string(&out.message),
                    crc_ok: out.crc_ok(),
                    valid: out.is_valid(),
                    terminated_early: out.terminated_early(),
                },
                true,
            )
        }
        Command::Simulate {
            code,
            snr,
            frames,
            list,
            seed,
            model,
            timing,
            output,
        } => {
            let cfg = code.config()?;
            let mut opts =
                SimOptions::new(frames, seed, DecoderPolicy::for_channel(cfg.channel, list));
            opts.timing = timing;
            let reports = run_bler(&[cfg], model, &snr.0, &opts)?;
            let mut out = sink(&output).map_err(io_err)?;
            write_csv(&reports, &mut out)?;
            out.flush().map_err(io_err)
        }
        Command::Polarize { delta, n, output } => {
            if !(0.0..=1.0).contains(&delta) || n > 24 {
                return Err(Error::InvalidInput(
                    "need 0 <= delta <= 1 and n <= 24".into(),
                ));
            }
            let z = bec_polarize(delta, n);
            let mut sorted: Vec<f64> = z.iter().map(|x| 1.0 - x).collect();
            sorted.sort_by(|a, b| b.total_cmp(a));
            let mut w = csv::Writer::from_writer(sink(&output).map_err(io_err)?);
            let csv_err = |e: csv::Error| Error::Data(e.to_string());
            w.write_record(["index", "erasure", "capacity", "sorted_capacity"])
                .map_err(csv_err)?;
            for (i, (&e, s)) in z.iter().zip(&sorted).enumerate() {
                w.write_record([
                    i.to_string(),
                    e.to_string(),
                    (1.0 - e).to_string(),
                    s.to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.flush().map_err(io_err)
        }
    }
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    message: String,
}

fn fail(kind: &str, message: String, code: u8) -> ExitCode {
    let report = ErrorReport {
        error: kind,
        message,
    };
    eprintln!("{}", serde_json::to_string(&report).unwrap_or_default());
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.to_string().trim_end().to_owned(), 2),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.kind(), e.to_string(), 1),
    }
}
