//! Common interface of the seeded extractors and a configuration enum used
//! by the validator, the test-vector files and the CLI.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::toeplitz::{ModifiedToeplitzExtractor, ToeplitzExtractor};
use crate::trevisan::TrevisanExtractor;

/// A seeded extractor `{0,1}^n × {0,1}^d → {0,1}^m`.
pub trait RandomnessExtractor: Send + Sync {
    /// Name used in test-vector headers.
    fn name(&self) -> &'static str;
    fn input_length(&self) -> usize;
    fn seed_length(&self) -> usize;
    fn output_length(&self) -> usize;
    fn extract(&self, x: &BitString, y: &BitString) -> Result<BitString>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtractorKind {
    Toeplitz,
    ModifiedToeplitz,
    Trevisan,
}

impl ExtractorKind {
    pub const ALL: [ExtractorKind; 3] = [Self::Toeplitz, Self::ModifiedToeplitz, Self::Trevisan];

    /// Command-line spelling.
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Toeplitz => "toeplitz",
            Self::ModifiedToeplitz => "modified-toeplitz",
            Self::Trevisan => "trevisan",
        }
    }

    /// Name written in test-vector headers.
    pub fn header_name(self) -> &'static str {
        match self {
            Self::Toeplitz => "ToeplitzHashing",
            Self::ModifiedToeplitz => "ModifiedToeplitzHashing",
            Self::Trevisan => "TrevisanExtractor",
        }
    }

    pub fn from_header_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.header_name() == name)
    }
}

impl fmt::Display for ExtractorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExtractorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown extractor type {s:?}")))
    }
}

/// Everything needed to rebuild an extractor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExtractorConfig {
    pub kind: ExtractorKind,
    pub input_length: usize,
    pub output_length: usize,
    /// Trevisan only: one-bit extractor seed length `t` (= design set size).
    pub one_bit_seed_length: Option<usize>,
}

impl ExtractorConfig {
    pub fn toeplitz(n: usize, m: usize) -> Self {
        Self {
            kind: ExtractorKind::Toeplitz,
            input_length: n,
            output_length: m,
            one_bit_seed_length: None,
        }
    }

    pub fn modified_toeplitz(n: usize, m: usize) -> Self {
        Self {
            kind: ExtractorKind::ModifiedToeplitz,
            ..Self::toeplitz(n, m)
        }
    }

    pub fn trevisan(n: usize, m: usize, one_bit_seed_length: usize) -> Self {
        Self {
            kind: ExtractorKind::Trevisan,
            input_length: n,
            output_length: m,
            one_bit_seed_length: Some(one_bit_seed_length),
        }
    }

    pub fn build(&self) -> Result<Extractor> {
        Ok(match self.kind {
            ExtractorKind::Toeplitz => Extractor::Toeplitz(ToeplitzExtractor::new(
                self.input_length,
                self.output_length,
            )?),
            ExtractorKind::ModifiedToeplitz => Extractor::ModifiedToeplitz(
                ModifiedToeplitzExtractor::new(self.input_length, self.output_length)?,
            ),
            ExtractorKind::Trevisan => {
                let t = self.one_bit_seed_length.ok_or_else(|| {
                    Error::InvalidParameters(
                        "Trevisan extractor needs a one-bit seed length".into(),
                    )
                })?;
                Extractor::Trevisan(TrevisanExtractor::new(
                    self.input_length,
                    self.output_length,
                    t,
                )?)
            }
        })
    }
}

/// Any of the implemented extractors.
#[derive(Clone, Debug, PartialEq)]
pub enum Extractor {
    Toeplitz(ToeplitzExtractor),
    ModifiedToeplitz(ModifiedToeplitzExtractor),
    Trevisan(TrevisanExtractor),
}

impl Extractor {
    pub fn kind(&self) -> ExtractorKind {
        match self {
            Self::Toeplitz(_) => ExtractorKind::Toeplitz,
            Self::ModifiedToeplitz(_) => ExtractorKind::ModifiedToeplitz,
            Self::Trevisan(_) => ExtractorKind::Trevisan,
        }
    }

    pub fn config(&self) -> ExtractorConfig {
        ExtractorConfig {
            kind: self.kind(),
            input_length: self.input_length(),
            output_length: self.output_length(),
            one_bit_seed_length: match self {
                Self::Trevisan(t) => Some(t.one_bit().seed_length()),
                _ => None,
            },
        }
    }

    fn inner(&self) -> &dyn RandomnessExtractor {
        match self {
            Self::Toeplitz(e) => e,
            Self::ModifiedToeplitz(e) => e,
            Self::Trevisan(e) => e,
        }
    }
}

impl RandomnessExtractor for Extractor {
    fn name(&self) -> &'static str {
        self.inner().name()
    }

    fn input_length(&self) -> usize {
        self.inner().input_length()
    }

    fn seed_length(&self) -> usize {
        self.inner().seed_length()
    }

    fn output_length(&self) -> usize {
        self.inner().output_length()
    }

    fn extract(&self, x: &BitString, y: &BitString) -> Result<BitString> {
        self.inner().extract(x, y)
    }
}
