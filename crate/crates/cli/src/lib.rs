//! Command-line front end for the `privamp` library.
//!
//! Exit codes: 0 success, 1 length mismatch, 2 usage or parse error,
//! 3 validation or verification failures, 4 adapter probe failure.

pub mod target;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use privamp::testvectors::{self, FileKind};
use privamp::toeplitz::SecurityModel;
use privamp::validator::{
    analyze_failed_test, BitFormat, ImplementationAdapter, InputMethod, Mode, Validator,
    ValidatorOptions, INPUT, SEED,
};
use privamp::{BitString, Error, ExtractorConfig, ExtractorKind, RandomnessExtractor};

pub const EXIT_LENGTH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURES: i32 = 3;
pub const EXIT_PROBE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "privamp",
    version,
    about = "Privacy amplification extractors and conformance testing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply an extractor to one input and seed.
    Extract(ExtractArgs),
    /// Compute the largest secure output length.
    Params(ParamsArgs),
    /// Compare an external implementation with the reference extractor.
    Validate(ValidateArgs),
    /// Generate or verify CAVP-style test-vector files.
    #[command(subcommand)]
    Vectors(VectorsCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Toeplitz,
    ModifiedToeplitz,
    Trevisan,
}

impl From<KindArg> for ExtractorKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Toeplitz => Self::Toeplitz,
            KindArg::ModifiedToeplitz => Self::ModifiedToeplitz,
            KindArg::Trevisan => Self::Trevisan,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Binary,
    Hex,
}

impl From<FormatArg> for BitFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Binary => Self::Binary,
            FormatArg::Hex => Self::Hex,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ExtractorArgs {
    #[arg(long = "type", value_enum)]
    pub kind: KindArg,
    /// Input length in bits.
    #[arg(short = 'n', long)]
    pub input_length: usize,
    /// Output length in bits.
    #[arg(short = 'm', long)]
    pub output_length: usize,
    /// Trevisan only: one-bit extractor seed length, a power of two.
    #[arg(short = 't', long)]
    pub one_bit_seed_length: Option<usize>,
}

impl ExtractorArgs {
    pub fn config(&self) -> ExtractorConfig {
        ExtractorConfig {
            kind: self.kind.into(),
            input_length: self.input_length,
            output_length: self.output_length,
            one_bit_seed_length: self.one_bit_seed_length,
        }
    }
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub extractor: ExtractorArgs,
    /// Input as hex.
    #[arg(
        long,
        conflicts_with = "input_file",
        required_unless_present = "input_file"
    )]
    pub input: Option<String>,
    /// File holding the input as hex.
    #[arg(long)]
    pub input_file: Option<PathBuf>,
    /// Seed as hex.
    #[arg(
        long,
        conflicts_with = "seed_file",
        required_unless_present = "seed_file"
    )]
    pub seed: Option<String>,
    /// File holding the seed as hex.
    #[arg(long)]
    pub seed_file: Option<PathBuf>,
    /// Write the output hex here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Quantum,
    Classical,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    #[arg(long = "type", value_enum, default_value = "toeplitz")]
    pub kind: KindArg,
    #[arg(short = 'n', long)]
    pub input_length: usize,
    /// Min-entropy per input bit, in (0, 1].
    #[arg(long)]
    pub entropy: f64,
    /// Security parameter, in (0, 1).
    #[arg(long)]
    pub error: f64,
    #[arg(long, value_enum, default_value = "quantum")]
    pub model: ModelArg,
    /// Trevisan only: one-bit extractor seed length.
    #[arg(short = 't', long, default_value_t = 1024)]
    pub one_bit_seed_length: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Stdio,
    Files,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub extractor: ExtractorArgs,
    /// Command template using $SEED$, $INPUT$ (and $OUTPUT$ in files mode).
    #[arg(long)]
    pub command: String,
    #[arg(long, value_enum, default_value = "stdio")]
    pub input_method: MethodArg,
    #[arg(long, value_enum, default_value = "binary")]
    pub seed_format: FormatArg,
    #[arg(long, value_enum, default_value = "binary")]
    pub input_format: FormatArg,
    #[arg(long, value_enum, default_value = "binary")]
    pub output_format: FormatArg,
    /// Run every input-seed pair instead of random samples.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = 10_000, conflicts_with = "exhaustive")]
    pub samples: usize,
    #[arg(long)]
    pub rng_seed: Option<u64>,
    /// Per-case timeout in seconds.
    #[arg(long, default_value_t = 30.0)]
    pub timeout: f64,
    #[arg(long, env = "PRIVAMP_WORKERS")]
    pub workers: Option<usize>,
    /// Label used in the report.
    #[arg(long, default_value = "implementation")]
    pub label: String,
}

#[derive(Debug, Subcommand)]
pub enum VectorsCommand {
    /// Write a request or response file.
    Gen(GenArgs),
    /// Recompute every case of a response file.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FileKindArg {
    Req,
    Rsp,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub extractor: ExtractorArgs,
    #[arg(long, default_value_t = 8)]
    pub count: usize,
    #[arg(long = "kind", value_enum, default_value = "rsp")]
    pub file_kind: FileKindArg,
    /// Fixes the cases and the timestamp line.
    #[arg(long)]
    pub rng_seed: Option<u64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
}

/// Failure carrying the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::HexLength { .. }
            | Error::NonZeroPadding { .. }
            | Error::LengthMismatch { .. } => EXIT_LENGTH,
            Error::ProbeFailed { .. } => EXIT_PROBE,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Extract(a) => cmd_extract(a),
        Command::Params(a) => cmd_params(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Vectors(VectorsCommand::Gen(a)) => cmd_vectors_gen(a),
        Command::Vectors(VectorsCommand::Verify(a)) => cmd_vectors_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn read_hex_arg(
    value: Option<String>,
    path: Option<PathBuf>,
    what: &str,
) -> Result<String, Failure> {
    match (value, path) {
        (Some(v), _) => Ok(v),
        (None, Some(p)) => {
            fs::read_to_string(&p).map_err(|e| usage(format!("{what} file {}: {e}", p.display())))
        }
        (None, None) => Err(usage(format!("no {what} given"))),
    }
}

fn decode(hex: &str, len: usize, what: &str) -> Result<BitString, Failure> {
    BitString::from_hex(hex.trim(), len).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{what}: {}", f.message);
        f
    })
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| usage(e.to_string()))
        }
    }
}

pub fn cmd_extract(args: ExtractArgs) -> Result<i32, Failure> {
    let ext = args.extractor.config().build()?;
    let x = decode(
        &read_hex_arg(args.input, args.input_file, "input")?,
        ext.input_length(),
        "input",
    )?;
    let y = decode(
        &read_hex_arg(args.seed, args.seed_file, "seed")?,
        ext.seed_length(),
        "seed",
    )?;
    let out = ext.extract(&x, &y)?;
    write_output(args.output.as_ref(), &format!("{}\n", out.to_hex()))?;
    Ok(0)
}

pub fn cmd_params(args: ParamsArgs) -> Result<i32, Failure> {
    let model = match args.model {
        ModelArg::Quantum => SecurityModel::Quantum,
        ModelArg::Classical => SecurityModel::Classical,
    };
    match args.kind {
        KindArg::Toeplitz | KindArg::ModifiedToeplitz => {
            let m = privamp::calculate_length(model, args.input_length, args.entropy, args.error)?;
            println!("{m}");
        }
        KindArg::Trevisan => {
            let p = privamp::calculate_length_trevisan(
                args.input_length,
                args.entropy,
                args.error,
                args.one_bit_seed_length,
            )?;
            println!("{}", p.output_length);
            println!("one-bit seed length t = {}", p.one_bit_seed_length);
            println!("field degree l = {}", p.field_degree);
            println!("seed length d = {}", p.seed_length);
            println!("design degree c = {}", p.design_degree);
            println!("required min-entropy = {:.3}", p.required_entropy);
        }
    }
    Ok(0)
}

pub fn cmd_validate(args: ValidateArgs) -> Result<i32, Failure> {
    if !(args.timeout > 0.0 && args.timeout.is_finite()) {
        return Err(usage("timeout must be positive"));
    }
    let reference = args.extractor.config().build()?;
    let method = match args.input_method {
        MethodArg::Stdio => InputMethod::Stdio,
        MethodArg::Files => InputMethod::Files,
    };
    let adapter = ImplementationAdapter::new(
        method,
        &args.command,
        &[
            (SEED, args.seed_format.into()),
            (INPUT, args.input_format.into()),
        ],
        args.output_format.into(),
    )?
    .with_timeout(Duration::from_secs_f64(args.timeout));
    let mut options = ValidatorOptions::default();
    if let Some(w) = args.workers.filter(|&w| w > 0) {
        options.workers = w;
    }
    let mut validator = Validator::with_options(reference, options);
    validator.add_implementation(args.label.as_str(), adapter)?;
    let mode = if args.exhaustive {
        Mode::Exhaustive
    } else {
        Mode::Random {
            sample_size: args.samples,
        }
    };
    let report = validator.validate_implementation(&args.label, mode, args.rng_seed)?;
    println!("{report}");
    if report.passed() {
        return Ok(0);
    }
    let diagnosis = analyze_failed_test(&report)?;
    println!("{}", diagnosis.summary);
    for case in report.failed.iter().take(5) {
        let got = match (&case.got, &case.error) {
            (Some(g), _) => g.to_hex(),
            (None, Some(e)) => e.to_string(),
            (None, None) => String::new(),
        };
        println!(
            "case {}: INPUT = {} SEED = {} expected {} got {}",
            case.index,
            case.input.to_hex(),
            case.seed.to_hex(),
            case.expected.to_hex(),
            got
        );
    }
    Ok(EXIT_FAILURES)
}

/// `ctime`-style local time, as in CAVP file headers.
pub fn current_timestamp() -> String {
    chrono::Local::now()
        .format("%a %b %e %H:%M:%S %Y")
        .to_string()
}

pub fn cmd_vectors_gen(args: GenArgs) -> Result<i32, Failure> {
    let ext = args.extractor.config().build()?;
    let kind = match args.file_kind {
        FileKindArg::Req => FileKind::Request,
        FileKindArg::Rsp => FileKind::Response,
    };
    let mut file = testvectors::generate_test_vectors(&ext, args.count, args.rng_seed, kind)?;
    if args.rng_seed.is_none() {
        file.set_timestamp(&current_timestamp());
    }
    write_output(args.output.as_ref(), &file.render())?;
    Ok(0)
}

pub fn cmd_vectors_verify(args: VerifyArgs) -> Result<i32, Failure> {
    let text = fs::read_to_string(&args.file)
        .map_err(|e| usage(format!("{}: {e}", args.file.display())))?;
    let file = testvectors::parse_vector_file(&text).map_err(|e| usage(e.to_string()))?;
    let ext = file.config.build()?;
    let report =
        testvectors::verify_response_file(&ext, &file).map_err(|e| usage(e.to_string()))?;
    let failed = report.failed_counts();
    println!(
        "{}: {} of {} cases passed",
        args.file.display(),
        report.results.len() - failed.len(),
        report.results.len()
    );
    if failed.is_empty() {
        return Ok(0);
    }
    let list: Vec<String> = failed.iter().map(|c| c.to_string()).collect();
    println!("failing COUNT: {}", list.join(", "));
    Ok(EXIT_FAILURES)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        Cli::command().debug_assert();
        target::ReferenceCli::command().debug_assert();
        target::MutantCli::command().debug_assert();
    }

    #[test]
    fn library_errors_map_to_exit_codes() {
        let code = |e: Error| Failure::from(e).code;
        assert_eq!(
            code(Error::HexLength {
                expected: 2,
                found: 1,
                bits: 8
            }),
            EXIT_LENGTH
        );
        assert_eq!(code(Error::NonZeroPadding { bits: 7 }), EXIT_LENGTH);
        assert_eq!(
            code(Error::ProbeFailed {
                label: "a".into(),
                reason: "b".into()
            }),
            EXIT_PROBE
        );
        assert_eq!(code(Error::InvalidParameters("x".into())), EXIT_USAGE);
        assert_eq!(code(Error::NoFeasibleOutput), EXIT_USAGE);
    }

    #[test]
    fn timestamp_is_ctime_shaped() {
        let ts = current_timestamp();
        assert_eq!(ts.len(), 24, "{ts}");
        assert_eq!(ts.matches(':').count(), 2);
    }
}
