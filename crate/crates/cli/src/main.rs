//! `adm`: encode and decode files with an arithmetic distribution matcher and
//! run the divergence and rate experiments.

mod bitio;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adm_core::analysis::{
    entropy, enumerate_codebook, format_sig, monte_carlo_report, optimal_codebook_bruteforce, rational_to_f64, run_sweep,
    write_csv, Codebook, ExperimentSpec, SweepMode, SweepRow,
};
use adm_core::codec::Frame;
use adm_core::{encode, BackendId, BitSequence, Error, MatcherConfig, Prob};
use clap::{Args, Parser, Subcommand, ValueEnum};

use bitio::{read_bits, write_bits, BitFormat};

#[derive(Parser)]
#[command(name = "adm", version, about = "Arithmetic distribution matching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode source bits into framed codewords, one frame per block.
    Encode(EncodeArgs),
    /// Decode framed codewords back into source bits.
    Decode(DecodeArgs),
    /// Divergence and rate over block lengths, as CSV.
    Sweep(SweepArgs),
    /// Print the complete codebook for one block length.
    Enumerate(BookArgs),
    /// Print the minimum-divergence code found by exhaustive search.
    Optimal(BookArgs),
    /// Monte Carlo estimate for one block length, as CSV.
    Mc(McArgs),
}

#[derive(Args)]
struct Distributions {
    /// Probability of a zero source bit, as an exact decimal or a fraction.
    #[arg(long, default_value = "0.5")]
    p_src: Prob,
    /// Probability of a zero code bit.
    #[arg(long, default_value = "0.3")]
    p_code: Prob,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Fixed,
}

impl From<BackendArg> for BackendId {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Exact => BackendId::Exact,
            BackendArg::Fixed => BackendId::default_fixed(),
        }
    }
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    dist: Distributions,
    /// Source block length.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "fixed")]
    backend: BackendArg,
    /// Input file, `-` for standard input.
    #[arg(long = "in", default_value = "-")]
    input: PathBuf,
    /// Output file, `-` for standard output.
    #[arg(long, default_value = "-")]
    out: PathBuf,
    /// How the input bits are stored.
    #[arg(long, value_enum, default_value = "packed")]
    format: BitFormat,
    /// Use only the first this many bits of a packed input.
    #[arg(long)]
    bits: Option<usize>,
    /// Do not print a line per block.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long = "in", default_value = "-")]
    input: PathBuf,
    #[arg(long, default_value = "-")]
    out: PathBuf,
    /// How to store the decoded bits.
    #[arg(long, value_enum, default_value = "packed")]
    format: BitFormat,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    dist: Distributions,
    /// Block lengths for exhaustive enumeration, e.g. `1-12` or `1,2,8`.
    #[arg(long, default_value = "1-12")]
    exact_ns: String,
    /// Block lengths for Monte Carlo estimation.
    #[arg(long, default_value = "10,100,1000,10000")]
    mc_ns: String,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Backend for the Monte Carlo rows.
    #[arg(long, value_enum, default_value = "fixed")]
    backend: BackendArg,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Args)]
struct BookArgs {
    #[command(flatten)]
    dist: Distributions,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    dist: Distributions,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "fixed")]
    backend: BackendArg,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

/// Failure of a subcommand, tagged with its exit code.
#[derive(Debug)]
enum Failure {
    Io(io::Error),
    Codec(Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Codec(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Codec(e) => match e {
                Error::MalformedFrame(_) => 3,
                Error::Truncated { .. } => 4,
                Error::Invariant(_) | Error::Underflow(_) => 5,
                _ => 2,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Io(e) => write!(f, "i/o error: {e}"),
            Failure::Codec(e) => write!(f, "{e}"),
        }
    }
}

fn read_input(path: &Path) -> io::Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::Read::read_to_end(&mut io::stdin().lock(), &mut buf)?;
        Ok(buf)
    } else {
        fs::read(path)
    }
}

fn write_output(path: &Path, bytes: &[u8]) -> io::Result<()> {
    if path.as_os_str() == "-" {
        let mut out = io::stdout().lock();
        out.write_all(bytes)?;
        out.flush()
    } else {
        fs::write(path, bytes)
    }
}

fn cmd_encode(args: EncodeArgs) -> Result<(), Failure> {
    let cfg = MatcherConfig::new(args.dist.p_src, args.dist.p_code, args.n, args.backend.into())?;
    let bytes = read_input(&args.input)?;
    let bits = read_bits(&bytes, args.format, args.bits)?;
    let blocks: Vec<BitSequence> = match (cfg.n, bits.len()) {
        (0, 0) => vec![BitSequence::new()],
        (0, _) => return Err(Error::InvalidArgument("n = 0 needs an empty input".into()).into()),
        (n, len) if len % n != 0 => {
            return Err(Error::InvalidArgument(format!("input has {len} bits, not a multiple of n = {n}")).into())
        }
        (n, len) => (0..len / n).map(|i| bits.slice(i * n, (i + 1) * n)).collect(),
    };
    let mut out = Vec::new();
    let mut total = 0usize;
    for (i, block) in blocks.iter().enumerate() {
        let payload = encode(block, &cfg)?;
        if !args.quiet {
            eprintln!("block {i}: n = {}, l(c) = {}", block.len(), payload.len());
        }
        total += payload.len();
        out.extend(Frame { config: cfg, payload }.to_bytes()?);
    }
    eprintln!(
        "encoded {} block(s), {} source bits, {total} code bits, {:.4} source bits per code bit",
        blocks.len(),
        bits.len(),
        if total > 0 { bits.len() as f64 / total as f64 } else { 0.0 }
    );
    write_output(&args.out, &out)?;
    Ok(())
}

fn cmd_decode(args: DecodeArgs) -> Result<(), Failure> {
    let bytes = read_input(&args.input)?;
    let mut source = BitSequence::new();
    for frame in Frame::parse_all(&bytes)? {
        let r = frame.decode()?;
        source.extend_from(&r.source_word);
    }
    write_output(&args.out, &write_bits(&source, args.format))?;
    Ok(())
}

fn parse_ns(spec: &str) -> Result<Vec<usize>, Error> {
    let bad = || Error::InvalidArgument(format!("bad block length list {spec:?}"));
    let mut ns = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                ns.extend(a..=b);
            }
            None => ns.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(ns)
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let spec = ExperimentSpec {
        p_src: args.dist.p_src,
        p_code: args.dist.p_code,
        exact_ns: parse_ns(&args.exact_ns)?,
        mc_ns: parse_ns(&args.mc_ns)?,
        trials: args.trials,
        seed: args.seed,
        backend: args.backend.into(),
    };
    let rows = run_sweep(&spec)?;
    let mut out = Vec::new();
    write_csv(&rows, &mut out)?;
    write_output(&args.out, &out)?;
    Ok(())
}

fn write_codebook(book: &Codebook, out: &Path) -> Result<(), Failure> {
    let mut text = String::from("source,codeword,length,p_y,p_z\n");
    for e in &book.entries {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            e.source,
            e.codeword,
            e.codeword.len(),
            format_sig(rational_to_f64(&e.p_y)),
            format_sig(rational_to_f64(&e.p_z)),
        ));
    }
    write_output(out, text.as_bytes())?;
    let r = book.report();
    eprintln!(
        "D = {} bits, E[l] = {}, coverage = {}, rate = {}",
        format_sig(r.kl_bits),
        format_sig(r.expected_length),
        format_sig(book.coverage()),
        format_sig(r.rate)
    );
    Ok(())
}

fn cmd_enumerate(args: BookArgs) -> Result<(), Failure> {
    let book = enumerate_codebook(&MatcherConfig::exact(args.dist.p_src, args.dist.p_code, args.n))?;
    write_codebook(&book, &args.out)
}

fn cmd_optimal(args: BookArgs) -> Result<(), Failure> {
    let (book, _) = optimal_codebook_bruteforce(args.n, args.dist.p_src, args.dist.p_code)?;
    write_codebook(&book, &args.out)
}

fn cmd_mc(args: McArgs) -> Result<(), Failure> {
    let cfg = MatcherConfig::new(args.dist.p_src, args.dist.p_code, args.n, args.backend.into())?;
    let report = monte_carlo_report(&cfg, args.trials, args.seed)?;
    let row = SweepRow { mode: SweepMode::Mc, report, entropy_target: entropy(cfg.p_code) };
    let mut out = Vec::new();
    write_csv(&[row], &mut out)?;
    write_output(&args.out, &out)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Optimal(a) => cmd_optimal(a),
        Command::Mc(a) => cmd_mc(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("adm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_length_lists() {
        assert_eq!(parse_ns("1-3,8").unwrap(), [1, 2, 3, 8]);
        assert_eq!(parse_ns("").unwrap(), Vec::<usize>::new());
        assert!(parse_ns("3-1").is_err());
        assert!(parse_ns("x").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Failure::from(Error::MalformedFrame("x".into())).exit_code(), 3);
        let t = Error::Truncated { consumed: 1, decoded: 0, expected: 2 };
        assert_eq!(Failure::from(t).exit_code(), 4);
        assert_eq!(Failure::from(Error::Invariant("x".into())).exit_code(), 5);
        assert_eq!(Failure::from(Error::InvalidProbability("x".into())).exit_code(), 2);
        assert_eq!(Failure::from(io::Error::other("x")).exit_code(), 1);
    }

    #[test]
    fn encodes_text_input() {
        let cfg = MatcherConfig::parse("0.5", "0.3", 2, BackendId::default_fixed()).unwrap();
        let bits = read_bits(b"00\n", BitFormat::Text, None).unwrap();
        assert_eq!(encode(&bits, &cfg).unwrap().to_string(), "001");
    }
}
