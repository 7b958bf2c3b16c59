use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ppmlab::bits::BitString;
use ppmlab::coder;
use ppmlab::error::Error;
use ppmlab::format;
use ppmlab::harness::{self, Algo};
use ppmlab::lz78::{self, PointerCode};
use ppmlab::model::{ContextModel, Mode};
use ppmlab::sequence;

#[derive(Parser)]
#[command(name = "ppmlab", version, about = "Context-model compression lab: \
generate the enumeration sequence S, compress it with PPM or LZ78, and run \
the verification suites.")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    PpmStar,
    PpmK,
    Lz78,
}

#[derive(Clone, Copy, ValueEnum)]
enum PointerArg {
    Fixed,
    Gamma,
}

impl From<PointerArg> for PointerCode {
    fn from(p: PointerArg) -> Self {
        match p {
            PointerArg::Fixed => PointerCode::Fixed,
            PointerArg::Gamma => PointerCode::Gamma,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Write S_1 ... S_n_max and print the zone boundary table.
    Gen {
        #[arg(long)]
        n_max: u32,
        /// Output file; ASCII bits unless --packed.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        packed: bool,
    },
    /// Compress a bit file; writes a code file and prints a stats line.
    Compress {
        #[arg(long, value_enum)]
        algo: AlgoArg,
        /// Context length bound; required for ppm-k.
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_enum, default_value = "fixed")]
        pointer_code: PointerArg,
        /// Report the ideal code length only; no code file is written.
        #[arg(long)]
        ideal_length_only: bool,
        /// Print the final model (PPM algorithms only).
        #[arg(long)]
        dump_model: bool,
        /// Machine-readable model dump.
        #[arg(long)]
        machine: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        input: PathBuf,
    },
    /// Decode a code file back to bits.
    Decompress {
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the packed sequence format instead of ASCII.
        #[arg(long)]
        packed: bool,
        input: PathBuf,
    },
    /// CSV of output bits and ratios over prefixes of S.
    RatioCurve {
        /// Algorithms to run; defaults to ppm-star, ppm-k and lz78.
        #[arg(long, value_enum)]
        algo: Vec<AlgoArg>,
        /// Bounds for ppm-k; defaults to 1..=5.
        #[arg(long)]
        k: Vec<u32>,
        #[arg(long, default_value_t = 14)]
        n_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named verification suite (or "all").
    Verify { suite: String },
    /// Per-bit emission-chain dump for a PPM run.
    Trace {
        #[arg(long, value_enum, default_value = "ppm-star")]
        algo: AlgoArg,
        #[arg(long)]
        k: Option<u32>,
        input: PathBuf,
    },
    /// Print the model state after reading a bit file.
    DumpModel {
        #[arg(long, value_enum, default_value = "ppm-star")]
        algo: AlgoArg,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        machine: bool,
        /// Cap on dumped context length.
        #[arg(long)]
        max_len: Option<u32>,
        input: PathBuf,
    },
}

fn ppm_mode(algo: AlgoArg, k: Option<u32>) -> Result<Mode, Error> {
    match algo {
        AlgoArg::PpmStar => Ok(Mode::Star),
        AlgoArg::PpmK => k.map(Mode::Bounded).ok_or_else(|| {
            Error::Domain("ppm-k requires --k".into())
        }),
        AlgoArg::Lz78 => Err(Error::Domain(
            "this operation needs a PPM algorithm (ppm-star or ppm-k)".into(),
        )),
    }
}

fn read_bits(path: &Path) -> Result<BitString, Error> {
    format::decode_sequence(&fs::read(path)?)
}

fn write_bits(path: Option<&Path>, bits: &BitString, packed: bool) -> Result<(), Error> {
    let bytes = if packed {
        format::encode_sequence_packed(bits)
    } else {
        bits.to_ascii().into_bytes()
    };
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => println!("{}", bits.to_ascii()),
    }
    Ok(())
}

fn stats_line(input_bits: usize, output_bits: u64) -> String {
    let ratio = if input_bits == 0 {
        0.0
    } else {
        output_bits as f64 / input_bits as f64
    };
    format!("input_bits={input_bits} output_bits={output_bits} ratio={ratio:.6}")
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.cmd {
        Cmd::Gen { n_max, out, packed } => {
            let mut bits = BitString::new();
            println!("zone\tstart\tlength");
            for n in 1..=n_max {
                bits.extend(&sequence::segment(n)?);
                println!("{n}\t{}\t{}", sequence::zone_start(n), (n as u64) << n);
            }
            write_bits(Some(&out), &bits, packed)?;
            eprintln!("wrote {} bits to {}", bits.len(), out.display());
            Ok(true)
        }
        Cmd::Compress {
            algo,
            k,
            pointer_code,
            ideal_length_only,
            dump_model,
            machine,
            out,
            input,
        } => {
            let bits = read_bits(&input)?;
            let default_out = || {
                let mut p = input.clone();
                p.set_extension("code");
                p
            };
            match algo {
                AlgoArg::Lz78 => {
                    let code = lz78::encode_lz(&bits, pointer_code.into());
                    let out = out.unwrap_or_else(default_out);
                    fs::write(&out, format::encode_lz_file(&code))?;
                    println!(
                        "{} phrases={}",
                        stats_line(bits.len(), code.bits.len() as u64),
                        code.phrase_count
                    );
                }
                _ => {
                    let mode = ppm_mode(algo, k)?;
                    if ideal_length_only {
                        let ideal = coder::encode_ideal(mode, &bits);
                        println!("{} (ideal)", stats_line(bits.len(), ideal.ceil() as u64));
                    } else {
                        let (code, stats) = coder::encode(mode, &bits);
                        let out = out.unwrap_or_else(default_out);
                        fs::write(&out, format::encode_ppm_file(mode, &code))?;
                        println!(
                            "{} ideal_bits={:.3}",
                            stats_line(bits.len(), stats.exact_bits),
                            stats.ideal_bits
                        );
                    }
                    if dump_model {
                        let mut model = ContextModel::new(mode);
                        for &b in bits.as_slice() {
                            model.update(b);
                        }
                        let snap = model.snapshot(None);
                        print!(
                            "{}",
                            if machine {
                                snap.render_machine()
                            } else {
                                snap.render_plain()
                            }
                        );
                    }
                }
            }
            Ok(true)
        }
        Cmd::Decompress { out, packed, input } => {
            let bytes = fs::read(&input)?;
            let bits = if bytes.starts_with(format::PPM_MAGIC) {
                let (mode, code) = format::decode_ppm_file(&bytes)?;
                coder::decode(mode, &code)?
            } else if bytes.starts_with(format::LZ_MAGIC) {
                lz78::decode_lz(&format::decode_lz_file(&bytes)?)?
            } else {
                return Err(Error::Corrupt(
                    "unrecognized code file (no PPM or LZ78 magic)".into(),
                ));
            };
            write_bits(out.as_deref(), &bits, packed)?;
            Ok(true)
        }
        Cmd::RatioCurve { algo, k, n_max, out } => {
            let ks = if k.is_empty() { (1..=5).collect() } else { k };
            let algos_req = if algo.is_empty() {
                vec![AlgoArg::PpmStar, AlgoArg::PpmK, AlgoArg::Lz78]
            } else {
                algo
            };
            let mut algos = Vec::new();
            for a in algos_req {
                match a {
                    AlgoArg::PpmStar => algos.push(Algo::PpmStar),
                    AlgoArg::Lz78 => algos.push(Algo::Lz78),
                    AlgoArg::PpmK => algos.extend(ks.iter().map(|&k| Algo::PpmK(k))),
                }
            }
            let points = harness::sample_points(n_max);
            let csv = harness::ratio_csv(&harness::ratio_curve(&algos, &points));
            match out {
                Some(p) => fs::write(p, csv)?,
                None => print!("{csv}"),
            }
            Ok(true)
        }
        Cmd::Verify { suite } => {
            let names: Vec<&str> = if suite == "all" {
                harness::SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut all_ok = true;
            for name in names {
                let report = harness::run_suite(name)?;
                println!("== suite {} ==", report.name);
                for line in &report.lines {
                    println!("{line}");
                }
                println!("suite {}: {}", report.name, if report.passed { "PASS" } else { "FAIL" });
                all_ok &= report.passed;
            }
            Ok(all_ok)
        }
        Cmd::Trace { algo, k, input } => {
            let mode = ppm_mode(algo, k)?;
            let bits = read_bits(&input)?;
            let (_, stats, chains) = coder::encode_with_trace(mode, &bits);
            for (i, chain) in chains.iter().enumerate() {
                let rendered: Vec<String> = chain
                    .iter()
                    .map(|e| {
                        let ctx = match &e.context {
                            None => "\u{22a5}".to_string(),
                            Some(c) if c.is_empty() => "\u{3bb}".to_string(),
                            Some(c) => c.to_ascii(),
                        };
                        format!("({ctx}, {}, {})", e.event, e.prob)
                    })
                    .collect();
                println!("{i}\t{}\t{}", bits.get(i), rendered.join(" "));
            }
            println!(
                "total: {} source bits, {} code bits, {:.3} ideal",
                bits.len(),
                stats.exact_bits,
                stats.ideal_bits
            );
            Ok(true)
        }
        Cmd::DumpModel {
            algo,
            k,
            machine,
            max_len,
            input,
        } => {
            let mode = ppm_mode(algo, k)?;
            let bits = read_bits(&input)?;
            let mut model = ContextModel::new(mode);
            for &b in bits.as_slice() {
                model.update(b);
            }
            let snap = model.snapshot(max_len);
            print!(
                "{}",
                if machine {
                    snap.render_machine()
                } else {
                    snap.render_plain()
                }
            );
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::Domain(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
