//! The bundled target binaries: `pa-reference` wraps the library extractor,
//! `pa-mutant` the same extractor with a deliberate bug. Both follow the
//! adapter contract, so the validator can run against them hermetically.
//!
//! ```text
//! pa-reference --type modified-toeplitz -n 128 -m 64 SEED INPUT
//! pa-mutant --mutant drop-last-bit --type toeplitz -n 8 -m 4 --format hex SEED_FILE INPUT_FILE OUTPUT_FILE
//! ```
//!
//! With two positionals the values are given inline and the result goes to
//! stdout; with a third, all three are file paths.

use std::fs;
use std::path::PathBuf;

use clap::Parser;
use privamp::fixtures::{Mutant, MutantExtractor};
use privamp::validator::BitFormat;
use privamp::RandomnessExtractor;

use crate::{ExtractorArgs, FormatArg};

#[derive(Debug, Parser)]
pub struct TargetArgs {
    #[command(flatten)]
    pub extractor: ExtractorArgs,
    #[arg(long, value_enum, default_value = "binary")]
    pub format: FormatArg,
    pub seed: String,
    pub input: String,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "pa-reference", about = "Reference extractor in adapter form")]
pub struct ReferenceCli {
    #[command(flatten)]
    pub target: TargetArgs,
}

#[derive(Debug, Parser)]
#[command(
    name = "pa-mutant",
    about = "Deliberately broken extractor in adapter form"
)]
pub struct MutantCli {
    /// drop-last-bit, seed-reversal, stuck-bit:INDEX:VALUE or
    /// matrix-entry:ROW:COL:SEED_INDEX.
    #[arg(long)]
    pub mutant: Mutant,
    #[command(flatten)]
    pub target: TargetArgs,
}

/// Runs one extraction; returns the process exit code.
pub fn run_target(args: TargetArgs, mutant: Option<Mutant>) -> i32 {
    match try_run(args, mutant) {
        Ok(()) => 0,
        Err(message) => {
            eprintln!("error: {message}");
            1
        }
    }
}

fn try_run(args: TargetArgs, mutant: Option<Mutant>) -> Result<(), String> {
    let cfg = args.extractor.config();
    let ext: Box<dyn RandomnessExtractor> = match mutant {
        Some(m) => Box::new(MutantExtractor::new(cfg, m).map_err(|e| e.to_string())?),
        None => Box::new(cfg.build().map_err(|e| e.to_string())?),
    };
    let format = BitFormat::from(args.format);
    let from_files = args.output.is_some();
    let load = |value: &str| -> Result<String, String> {
        if from_files {
            fs::read_to_string(value).map_err(|e| format!("{value}: {e}"))
        } else {
            Ok(value.to_string())
        }
    };
    let y = format
        .decode(load(&args.seed)?.trim(), ext.seed_length())
        .map_err(|e| format!("seed: {e}"))?;
    let x = format
        .decode(load(&args.input)?.trim(), ext.input_length())
        .map_err(|e| format!("input: {e}"))?;
    let out = format.encode(&ext.extract(&x, &y).map_err(|e| e.to_string())?);
    match args.output {
        Some(path) => fs::write(&path, out).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            println!("{out}");
            Ok(())
        }
    }
}
