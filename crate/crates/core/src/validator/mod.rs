//! Conformance testing of extractor implementations against the reference.
//!
//! ```no_run
//! use privamp::validator::{BitFormat, ImplementationAdapter, InputMethod, Mode, Validator};
//! use privamp::ExtractorConfig;
//!
//! let reference = ExtractorConfig::modified_toeplitz(1 << 10, 1 << 9).build()?;
//! let mut val = Validator::new(reference);
//! let adapter = ImplementationAdapter::new(
//!     InputMethod::Stdio,
//!     "./modified_toeplitz $SEED$ $INPUT$",
//!     &[("$SEED$", BitFormat::Binary), ("$INPUT$", BitFormat::Binary)],
//!     BitFormat::Binary,
//! )?;
//! val.add_implementation("fft", adapter)?;
//! let reports = val.validate(Mode::Random { sample_size: 10_000 }, Some(1))?;
//! # Ok::<(), privamp::Error>(())
//! ```

mod adapter;
mod analysis;

use std::fmt;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

pub use adapter::{
    BitFormat, CaseError, Implementation, ImplementationAdapter, InputMethod, DEFAULT_TIMEOUT,
    INPUT, OUTPUT, SEED,
};
pub use analysis::{analyze_failed_test, FailureDiagnosis};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::extractor::{Extractor, RandomnessExtractor};

/// Default limit on `n + d` for exhaustive validation.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 24;
/// Failed cases stored verbatim per report; further failures are only counted.
pub const DEFAULT_FAILURE_CAP: usize = 10_000;
/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "PRIVAMP_WORKERS";

const CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every input-seed pair, `2^n · 2^d` cases.
    Exhaustive,
    /// `sample_size` uniformly random pairs.
    Random { sample_size: usize },
}

impl Mode {
    pub fn kind(self) -> ModeKind {
        match self {
            Self::Exhaustive => ModeKind::Exhaustive,
            Self::Random { .. } => ModeKind::Random,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeKind {
    Exhaustive,
    Random,
}

impl fmt::Display for ModeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exhaustive => "exhaustive",
            Self::Random => "random",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailedCase {
    /// Case index: `x·2^d + y` in exhaustive mode, the draw number otherwise.
    pub index: u64,
    pub input: BitString,
    pub seed: BitString,
    pub expected: BitString,
    /// `None` when the implementation produced no usable output.
    pub got: Option<BitString>,
    pub error: Option<CaseError>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub label: String,
    pub mode: ModeKind,
    pub rng_seed: Option<u64>,
    pub input_length: usize,
    pub seed_length: usize,
    pub output_length: usize,
    pub total: u64,
    /// All failures, including those beyond the storage cap.
    pub failed_count: u64,
    /// Stored failures in case-index order (at most the failure cap).
    pub failed: Vec<FailedCase>,
    /// Failures where the implementation crashed, timed out, could not be
    /// launched or printed garbage.
    pub adapter_errors: u64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failed_count == 0
    }

    pub fn failure_fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.failed_count as f64 / self.total as f64
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {} cases, {} failed ({:.2}%)",
            self.label,
            self.total,
            self.mode,
            self.failed_count,
            100.0 * self.failure_fraction()
        )?;
        if self.adapter_errors > 0 {
            write!(f, ", {} adapter errors", self.adapter_errors)?;
        }
        if let Some(seed) = self.rng_seed {
            write!(f, ", rng seed {seed}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ValidatorOptions {
    pub exhaustive_cap: usize,
    pub failure_cap: usize,
    /// Concurrent cases; defaults to `$PRIVAMP_WORKERS` or the CPU count.
    pub workers: usize,
}

impl Default for ValidatorOptions {
    fn default() -> Self {
        let workers = std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .filter(|&w: &usize| w > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        Self {
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
            failure_cap: DEFAULT_FAILURE_CAP,
            workers,
        }
    }
}

/// Compares registered implementations with a reference extractor.
pub struct Validator {
    reference: Extractor,
    implementations: Vec<(String, Box<dyn Implementation>)>,
    options: ValidatorOptions,
}

impl Validator {
    pub fn new(reference: Extractor) -> Self {
        Self::with_options(reference, ValidatorOptions::default())
    }

    pub fn with_options(reference: Extractor, options: ValidatorOptions) -> Self {
        Self {
            reference,
            implementations: Vec::new(),
            options,
        }
    }

    pub fn reference(&self) -> &Extractor {
        &self.reference
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.implementations.iter().map(|(l, _)| l.as_str())
    }

    /// Registers an implementation after one probe run on the all-zero input
    /// and seed, which must return a parseable output of the right length.
    pub fn add_implementation(
        &mut self,
        label: impl Into<String>,
        implementation: impl Implementation + 'static,
    ) -> Result<()> {
        let label = label.into();
        if self.implementations.iter().any(|(l, _)| *l == label) {
            return Err(Error::DuplicateLabel(label));
        }
        let x = BitString::zeros(self.reference.input_length());
        let y = BitString::zeros(self.reference.seed_length());
        let m = self.reference.output_length();
        match implementation.run(&x, &y, m) {
            Ok(out) if out.len() == m => {}
            Ok(out) => {
                return Err(Error::ProbeFailed {
                    label,
                    reason: format!("output has {} bits, expected {m}", out.len()),
                })
            }
            Err(e) => {
                return Err(Error::ProbeFailed {
                    label,
                    reason: e.to_string(),
                })
            }
        }
        self.implementations.push((label, Box::new(implementation)));
        Ok(())
    }

    /// Validates every registered implementation, in registration order.
    /// Random mode draws from `rng_seed`, or from a fresh seed that is
    /// recorded in the report.
    pub fn validate(&self, mode: Mode, rng_seed: Option<u64>) -> Result<Vec<ValidationReport>> {
        let seed = self.resolve_seed(mode, rng_seed);
        self.implementations
            .iter()
            .map(|(label, imp)| self.run(label, imp.as_ref(), mode, seed))
            .collect()
    }

    pub fn validate_implementation(
        &self,
        label: &str,
        mode: Mode,
        rng_seed: Option<u64>,
    ) -> Result<ValidationReport> {
        let (label, imp) = self
            .implementations
            .iter()
            .find(|(l, _)| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        self.run(label, imp.as_ref(), mode, self.resolve_seed(mode, rng_seed))
    }

    /// The input-seed pair for case `index`.
    pub fn case(&self, mode: Mode, rng_seed: u64, index: u64) -> (BitString, BitString) {
        let n = self.reference.input_length();
        let d = self.reference.seed_length();
        match mode {
            Mode::Exhaustive => (
                index_bits(index >> d, n),
                index_bits(index & ((1u64 << d) - 1), d),
            ),
            Mode::Random { .. } => {
                let mut rng = ChaCha20Rng::seed_from_u64(rng_seed);
                rng.set_stream(index);
                let x = BitString::random(&mut rng, n);
                let y = BitString::random(&mut rng, d);
                (x, y)
            }
        }
    }

    fn resolve_seed(&self, mode: Mode, rng_seed: Option<u64>) -> Option<u64> {
        match mode {
            Mode::Exhaustive => None,
            Mode::Random { .. } => Some(rng_seed.unwrap_or_else(|| rand::thread_rng().next_u64())),
        }
    }

    fn case_count(&self, mode: Mode) -> Result<u64> {
        match mode {
            Mode::Exhaustive => {
                let bits = self.reference.input_length() + self.reference.seed_length();
                if bits > self.options.exhaustive_cap || bits >= 64 {
                    return Err(Error::ExhaustiveTooLarge {
                        bits,
                        cap: self.options.exhaustive_cap,
                    });
                }
                Ok(1u64 << bits)
            }
            Mode::Random { sample_size: 0 } => Err(Error::InvalidSampleSize),
            Mode::Random { sample_size } => Ok(sample_size as u64),
        }
    }

    fn run(
        &self,
        label: &str,
        imp: &dyn Implementation,
        mode: Mode,
        rng_seed: Option<u64>,
    ) -> Result<ValidationReport> {
        let total = self.case_count(mode)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.options.workers)
            .build()
            .map_err(|e| Error::InvalidParameters(format!("worker pool: {e}")))?;
        let m = self.reference.output_length();
        let mut report = ValidationReport {
            label: label.to_string(),
            mode: mode.kind(),
            rng_seed,
            input_length: self.reference.input_length(),
            seed_length: self.reference.seed_length(),
            output_length: m,
            total,
            failed_count: 0,
            failed: Vec::new(),
            adapter_errors: 0,
        };
        let mut start = 0;
        while start < total {
            let end = (start + CHUNK).min(total);
            let outcomes: Vec<Option<FailedCase>> = pool.install(|| {
                (start..end)
                    .into_par_iter()
                    .map(|index| self.check_case(imp, mode, rng_seed.unwrap_or(0), index, m))
                    .collect::<Result<_>>()
            })?;
            for failure in outcomes.into_iter().flatten() {
                report.failed_count += 1;
                report.adapter_errors += failure.error.is_some() as u64;
                if report.failed.len() < self.options.failure_cap {
                    report.failed.push(failure);
                }
            }
            start = end;
        }
        Ok(report)
    }

    fn check_case(
        &self,
        imp: &dyn Implementation,
        mode: Mode,
        rng_seed: u64,
        index: u64,
        m: usize,
    ) -> Result<Option<FailedCase>> {
        let (x, y) = self.case(mode, rng_seed, index);
        let expected = self.reference.extract(&x, &y)?;
        let (got, error) = match imp.run(&x, &y, m) {
            Ok(out) if out == expected => return Ok(None),
            Ok(out) => (Some(out), None),
            Err(e) => (None, Some(e)),
        };
        Ok(Some(FailedCase {
            index,
            input: x,
            seed: y,
            expected,
            got,
            error,
        }))
    }
}

fn index_bits(value: u64, len: usize) -> BitString {
    BitString::from_bits((0..len).map(|i| (value >> (len - 1 - i)) & 1 == 1))
}
