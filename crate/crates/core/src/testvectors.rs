//! CAVP-style request (`.req`) and response (`.rsp`) files.
//!
//! ```text
//! # CAVS
//! # ModifiedToeplitzHashing
//! # Input Length : 128
//! # Compression ratio: 1/2
//! # Generated on Thu Jan  1 00:00:00 1970
//!
//! [EXTRACT]
//!
//! COUNT = 0
//! INPUT = e3fc097a6dcc77fc781a7ed3533528c8
//! SEED = 05f47ea39db462da99e3e29b06721ae6
//! OUTPUT = ab264a34f8ebc27c
//! ```
//!
//! The extractor configuration is read back from the header: the name line,
//! `Input Length`, `Compression ratio` (output over input length, reduced)
//! and any extractor-specific `Key : value` lines.

use std::fmt::Write;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::extractor::{Extractor, ExtractorConfig, ExtractorKind, RandomnessExtractor};

/// Timestamp written by [`generate_test_vectors`]; replace it with
/// [`TestVectorFile::set_timestamp`] for a real date.
pub const DETERMINISTIC_TIMESTAMP: &str = "Thu Jan  1 00:00:00 1970";
pub const DEFAULT_SECTION: &str = "EXTRACT";

const GENERATED_PREFIX: &str = "Generated on ";
const INPUT_LENGTH_KEY: &str = "Input Length";
const RATIO_KEY: &str = "Compression ratio";
const ONE_BIT_SEED_KEY: &str = "One-bit seed length";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    /// Inputs and seeds only.
    Request,
    /// Inputs, seeds and outputs.
    Response,
}

impl FileKind {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Request => "req",
            Self::Response => "rsp",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub count: usize,
    pub input: BitString,
    pub seed: BitString,
    pub output: Option<BitString>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestVectorFile {
    /// Header comment lines without the leading `"# "`.
    pub header: Vec<String>,
    pub section: String,
    pub config: ExtractorConfig,
    pub cases: Vec<Case>,
}

impl TestVectorFile {
    /// `Response` iff the file has cases and all of them carry an output.
    pub fn kind(&self) -> FileKind {
        if !self.cases.is_empty() && self.cases.iter().all(|c| c.output.is_some()) {
            FileKind::Response
        } else {
            FileKind::Request
        }
    }

    pub fn timestamp(&self) -> Option<&str> {
        self.header
            .iter()
            .find_map(|h| h.strip_prefix(GENERATED_PREFIX))
    }

    /// Replaces the `Generated on` line, or appends one.
    pub fn set_timestamp(&mut self, timestamp: &str) {
        let line = format!("{GENERATED_PREFIX}{timestamp}");
        match self
            .header
            .iter_mut()
            .find(|h| h.starts_with(GENERATED_PREFIX))
        {
            Some(h) => *h = line,
            None => self.header.push(line),
        }
    }

    /// The same file without outputs.
    pub fn to_request(&self) -> Self {
        let mut req = self.clone();
        for c in &mut req.cases {
            c.output = None;
        }
        req
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for h in &self.header {
            let _ = writeln!(out, "# {h}");
        }
        let _ = write!(out, "\n[{}]\n", self.section);
        for c in &self.cases {
            let _ = write!(
                out,
                "\nCOUNT = {}\nINPUT = {}\nSEED = {}\n",
                c.count,
                c.input.to_hex(),
                c.seed.to_hex()
            );
            if let Some(o) = &c.output {
                let _ = writeln!(out, "OUTPUT = {}", o.to_hex());
            }
        }
        out
    }
}

/// Header lines describing `cfg`, without the timestamp.
pub fn header_for(cfg: &ExtractorConfig) -> Vec<String> {
    let (n, m) = (cfg.input_length, cfg.output_length);
    let g = gcd(n, m).max(1);
    let mut header = vec![
        "CAVS".to_string(),
        cfg.kind.header_name().to_string(),
        format!("{INPUT_LENGTH_KEY} : {n}"),
        format!("{RATIO_KEY}: {}/{}", m / g, n / g),
    ];
    if let Some(t) = cfg.one_bit_seed_length {
        header.push(format!("{ONE_BIT_SEED_KEY} : {t}"));
    }
    header
}

/// `count` cases with uniformly random inputs and seeds. Response files
/// carry the outputs of `ext`. The same `rng_seed` always gives the same
/// file; `None` draws a fresh seed.
pub fn generate_test_vectors(
    ext: &Extractor,
    count: usize,
    rng_seed: Option<u64>,
    kind: FileKind,
) -> Result<TestVectorFile> {
    if count == 0 {
        return Err(Error::InvalidParameters(
            "test-vector count must be at least 1".into(),
        ));
    }
    let mut rng =
        ChaCha20Rng::seed_from_u64(rng_seed.unwrap_or_else(|| rand::thread_rng().next_u64()));
    let (n, d) = (ext.input_length(), ext.seed_length());
    let cases = (0..count)
        .map(|i| {
            let input = BitString::random(&mut rng, n);
            let seed = BitString::random(&mut rng, d);
            let output = match kind {
                FileKind::Request => None,
                FileKind::Response => Some(ext.extract(&input, &seed)?),
            };
            Ok(Case {
                count: i,
                input,
                seed,
                output,
            })
        })
        .collect::<Result<_>>()?;
    let config = ext.config();
    let mut header = header_for(&config);
    header.push(format!("{GENERATED_PREFIX}{DETERMINISTIC_TIMESTAMP}"));
    Ok(TestVectorFile {
        header,
        section: DEFAULT_SECTION.to_string(),
        config,
        cases,
    })
}

struct PendingCase {
    count: usize,
    line: usize,
    input: Option<BitString>,
    seed: Option<BitString>,
    output: Option<BitString>,
}

pub fn parse_vector_file(text: &str) -> Result<TestVectorFile> {
    let mut header = Vec::new();
    let mut section: Option<String> = None;
    let mut config: Option<ExtractorConfig> = None;
    let mut seed_length = 0;
    let mut cases = Vec::new();
    let mut pending: Option<PendingCase> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if section.is_none() {
                header.push(comment.strip_prefix(' ').unwrap_or(comment).to_string());
            }
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            if section.is_some() {
                return Err(parse_err("only one section is supported".into()));
            }
            let cfg = config_from_header(&header).map_err(parse_err)?;
            seed_length = cfg
                .build()
                .map_err(|e| parse_err(e.to_string()))?
                .seed_length();
            config = Some(cfg);
            section = Some(name.to_string());
            continue;
        }
        let Some(cfg) = config else {
            return Err(parse_err(format!("field before section header: {line:?}")));
        };
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| parse_err(format!("expected NAME = value, found {line:?}")))?;
        let hex_field = |len: usize| parse_hex(value, len, line_no);
        match key {
            "COUNT" => {
                let count: usize = value
                    .parse()
                    .map_err(|_| parse_err(format!("invalid COUNT {value:?}")))?;
                if count != cases.len() + pending.is_some() as usize {
                    return Err(parse_err(format!(
                        "COUNT {count} out of sequence, expected {}",
                        cases.len() + pending.is_some() as usize
                    )));
                }
                if let Some(p) = pending.take() {
                    cases.push(finish(p)?);
                }
                pending = Some(PendingCase {
                    count,
                    line: line_no,
                    input: None,
                    seed: None,
                    output: None,
                });
            }
            "INPUT" | "SEED" | "OUTPUT" => {
                let p = pending
                    .as_mut()
                    .ok_or_else(|| parse_err(format!("{key} before COUNT")))?;
                let (slot, len) = match key {
                    "INPUT" => (&mut p.input, cfg.input_length),
                    "SEED" => (&mut p.seed, seed_length),
                    _ => (&mut p.output, cfg.output_length),
                };
                if slot.is_some() {
                    return Err(parse_err(format!("duplicate {key}")));
                }
                *slot = Some(hex_field(len)?);
            }
            other => return Err(parse_err(format!("unknown field {other:?}"))),
        }
    }
    if let Some(p) = pending.take() {
        cases.push(finish(p)?);
    }
    let (Some(section), Some(config)) = (section, config) else {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: "missing section header".into(),
        });
    };
    Ok(TestVectorFile {
        header,
        section,
        config,
        cases,
    })
}

fn finish(p: PendingCase) -> Result<Case> {
    let missing = |what: &str| Error::Parse {
        line: p.line,
        message: format!("COUNT {} has no {what}", p.count),
    };
    Ok(Case {
        count: p.count,
        input: p.input.ok_or_else(|| missing("INPUT"))?,
        seed: p.seed.ok_or_else(|| missing("SEED"))?,
        output: p.output,
    })
}

fn parse_hex(value: &str, len: usize, line: usize) -> Result<BitString> {
    BitString::from_hex(value, len).map_err(|e| match e {
        Error::HexLength { .. } | Error::NonZeroPadding { .. } => Error::LengthInconsistency {
            line,
            message: e.to_string(),
        },
        _ => Error::Parse {
            line,
            message: e.to_string(),
        },
    })
}

fn config_from_header(header: &[String]) -> std::result::Result<ExtractorConfig, String> {
    let kind = header
        .iter()
        .find_map(|h| ExtractorKind::from_header_name(h.trim()))
        .ok_or("header names no known extractor")?;
    let mut n = None;
    let mut ratio = None;
    let mut t = None;
    for h in header.iter().filter(|h| !h.starts_with(GENERATED_PREFIX)) {
        let Some((key, value)) = h.split_once(':') else {
            continue;
        };
        let value = value.trim();
        let number = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| format!("invalid {}: {v:?}", key.trim()))
        };
        match key.trim() {
            INPUT_LENGTH_KEY => n = Some(number(value)?),
            RATIO_KEY => {
                let (p, q) = value
                    .split_once('/')
                    .ok_or(format!("invalid ratio {value:?}"))?;
                ratio = Some((number(p.trim())?, number(q.trim())?));
            }
            ONE_BIT_SEED_KEY => t = Some(number(value)?),
            _ => {}
        }
    }
    let n = n.ok_or("header has no Input Length")?;
    let (p, q) = ratio.ok_or("header has no Compression ratio")?;
    if q == 0 || (n * p) % q != 0 {
        return Err(format!(
            "compression ratio {p}/{q} does not divide input length {n}"
        ));
    }
    let m = n * p / q;
    Ok(match kind {
        ExtractorKind::Toeplitz => ExtractorConfig::toeplitz(n, m),
        ExtractorKind::ModifiedToeplitz => ExtractorConfig::modified_toeplitz(n, m),
        ExtractorKind::Trevisan => {
            ExtractorConfig::trevisan(n, m, t.ok_or("Trevisan header has no One-bit seed length")?)
        }
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseResult {
    pub count: usize,
    pub passed: bool,
    pub expected: BitString,
    pub found: BitString,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub results: Vec<CaseResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failed_counts(&self) -> Vec<usize> {
        self.results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.count)
            .collect()
    }
}

/// Recomputes every case of a response file with `ext`.
pub fn verify_response_file(ext: &Extractor, file: &TestVectorFile) -> Result<VerificationReport> {
    let results = file
        .cases
        .iter()
        .map(|c| {
            let found = c
                .output
                .clone()
                .ok_or(Error::MissingOutputs { count: c.count })?;
            let expected = ext.extract(&c.input, &c.seed)?;
            Ok(CaseResult {
                count: c.count,
                passed: expected == found,
                expected,
                found,
            })
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport { results })
}
