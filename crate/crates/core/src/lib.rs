//! Seeded randomness extractors for privacy amplification.
//!
//! * [`toeplitz`]: standard and modified Toeplitz hashing, with a row-wise
//!   matrix path and an FFT circulant path, plus the leftover-hash output
//!   length.
//! * [`trevisan`]: Trevisan's construction from a finite-field weak design
//!   and a polynomial one-bit extractor.
//! * [`validator`]: conformance testing of third-party implementations,
//!   in-process or through external commands.
//! * [`testvectors`]: CAVP-style `.req` / `.rsp` files.
//!
//! All bit strings are [`BitString`]s: index 0 is the leftmost bit and hex
//! encodings are MSB first, left-padded to whole bytes.

pub mod bits;
pub mod error;
pub mod extractor;
pub mod field;
pub mod fixtures;
pub mod gf2poly;
pub mod testvectors;
pub mod toeplitz;
pub mod trevisan;
pub mod validator;

pub use bits::{gf2_matvec, BitString, Gf2Matrix};
pub use error::{Error, Result};
pub use extractor::{Extractor, ExtractorConfig, ExtractorKind, RandomnessExtractor};
pub use toeplitz::{calculate_length, ModifiedToeplitzExtractor, SecurityModel, ToeplitzExtractor};
pub use trevisan::{calculate_length_trevisan, TrevisanExtractor};
