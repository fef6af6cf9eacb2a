//! Deliberately broken extractors for exercising the validator.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::extractor::{Extractor, ExtractorConfig, ExtractorKind, RandomnessExtractor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutant {
    /// Treats the last input bit as 0.
    DropLastInputBit,
    /// Reads the seed back to front.
    SeedReversal,
    /// Forces one output bit to a constant.
    StuckOutputBit { index: usize, value: bool },
    /// Toeplitz variants only: matrix entry `(row, col)` is taken from seed
    /// bit `seed_index` instead of the one the reference uses.
    MatrixEntry {
        row: usize,
        col: usize,
        seed_index: usize,
    },
}

impl Mutant {
    /// A uniformly chosen single-entry mutant that differs from the
    /// reference matrix convention.
    pub fn random_matrix_entry<R: Rng + ?Sized>(
        cfg: &ExtractorConfig,
        rng: &mut R,
    ) -> Result<Self> {
        let (cols, q) = toeplitz_shape(cfg)?;
        let row = rng.gen_range(0..cfg.output_length);
        let col = rng.gen_range(0..cols);
        let correct = (row + q - col % q) % q;
        let mut seed_index = rng.gen_range(0..q - 1);
        if seed_index >= correct {
            seed_index += 1;
        }
        Ok(Self::MatrixEntry {
            row,
            col,
            seed_index,
        })
    }
}

impl fmt::Display for Mutant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::DropLastInputBit => f.write_str("drop-last-bit"),
            Self::SeedReversal => f.write_str("seed-reversal"),
            Self::StuckOutputBit { index, value } => write!(f, "stuck-bit:{index}:{}", value as u8),
            Self::MatrixEntry {
                row,
                col,
                seed_index,
            } => write!(f, "matrix-entry:{row}:{col}:{seed_index}"),
        }
    }
}

impl FromStr for Mutant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameters(format!("unknown mutant {s:?}"));
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default();
        let nums: Vec<usize> = parts
            .map(|p| p.parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (name, nums.as_slice()) {
            ("drop-last-bit", []) => Ok(Self::DropLastInputBit),
            ("seed-reversal", []) => Ok(Self::SeedReversal),
            ("stuck-bit", &[index, value @ (0 | 1)]) => Ok(Self::StuckOutputBit {
                index,
                value: value == 1,
            }),
            ("matrix-entry", &[row, col, seed_index]) => Ok(Self::MatrixEntry {
                row,
                col,
                seed_index,
            }),
            _ => Err(bad()),
        }
    }
}

/// Column count of the Toeplitz block and the seed length it wraps around.
fn toeplitz_shape(cfg: &ExtractorConfig) -> Result<(usize, usize)> {
    let (n, m) = (cfg.input_length, cfg.output_length);
    match cfg.kind {
        ExtractorKind::Toeplitz => Ok((n, n + m - 1)),
        ExtractorKind::ModifiedToeplitz => Ok((n - m, n - 1)),
        ExtractorKind::Trevisan => Err(Error::InvalidParameters(
            "matrix-entry mutants need a Toeplitz extractor".into(),
        )),
    }
}

/// The reference extractor with one [`Mutant`] applied.
#[derive(Clone, Debug)]
pub struct MutantExtractor {
    reference: Extractor,
    mutant: Mutant,
}

impl MutantExtractor {
    pub fn new(cfg: ExtractorConfig, mutant: Mutant) -> Result<Self> {
        let reference = cfg.build()?;
        match mutant {
            Mutant::StuckOutputBit { index, .. } if index >= cfg.output_length => {
                return Err(Error::InvalidParameters(format!(
                    "stuck bit {index} outside a {}-bit output",
                    cfg.output_length
                )))
            }
            Mutant::MatrixEntry {
                row,
                col,
                seed_index,
            } => {
                let (cols, q) = toeplitz_shape(&cfg)?;
                if row >= cfg.output_length || col >= cols || seed_index >= q {
                    return Err(Error::InvalidParameters(format!(
                        "matrix entry ({row}, {col}) <- y[{seed_index}] out of range"
                    )));
                }
            }
            _ => {}
        }
        Ok(Self { reference, mutant })
    }

    pub fn mutant(&self) -> Mutant {
        self.mutant
    }
}

impl RandomnessExtractor for MutantExtractor {
    fn name(&self) -> &'static str {
        self.reference.name()
    }

    fn input_length(&self) -> usize {
        self.reference.input_length()
    }

    fn seed_length(&self) -> usize {
        self.reference.seed_length()
    }

    fn output_length(&self) -> usize {
        self.reference.output_length()
    }

    fn extract(&self, x: &BitString, y: &BitString) -> Result<BitString> {
        match self.mutant {
            Mutant::DropLastInputBit => {
                let mut x = x.clone();
                if !x.is_empty() {
                    x.set(x.len() - 1, false);
                }
                self.reference.extract(&x, y)
            }
            Mutant::SeedReversal => self.reference.extract(x, &y.reversed()),
            Mutant::StuckOutputBit { index, value } => {
                let mut out = self.reference.extract(x, y)?;
                out.set(index, value);
                Ok(out)
            }
            Mutant::MatrixEntry {
                row,
                col,
                seed_index,
            } => {
                let mut out = self.reference.extract(x, y)?;
                let (_, q) = toeplitz_shape(&self.reference.config())?;
                let correct = (row + q - col % q) % q;
                if x.get(col) && y.get(correct) != y.get(seed_index) {
                    out.flip(row);
                }
                Ok(out)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::gf2_matvec;
    use crate::toeplitz::{ModifiedToeplitzExtractor, ToeplitzExtractor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn names_round_trip() {
        for m in [
            Mutant::DropLastInputBit,
            Mutant::SeedReversal,
            Mutant::StuckOutputBit {
                index: 3,
                value: true,
            },
            Mutant::MatrixEntry {
                row: 1,
                col: 2,
                seed_index: 0,
            },
        ] {
            assert_eq!(m.to_string().parse::<Mutant>().unwrap(), m);
        }
        for bad in [
            "",
            "drop",
            "stuck-bit:1:2",
            "matrix-entry:1:2",
            "seed-reversal:1",
        ] {
            assert!(bad.parse::<Mutant>().is_err(), "{bad}");
        }
    }

    #[test]
    fn matrix_entry_matches_explicit_matrix_edit() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (n, m) = (7, 3);
        let tz = ToeplitzExtractor::new(n, m).unwrap();
        let cfg = ExtractorConfig::toeplitz(n, m);
        for _ in 0..50 {
            let mutant = Mutant::random_matrix_entry(&cfg, &mut rng).unwrap();
            let Mutant::MatrixEntry {
                row,
                col,
                seed_index,
            } = mutant
            else {
                unreachable!()
            };
            let ext = MutantExtractor::new(cfg, mutant).unwrap();
            let x = BitString::random(&mut rng, n);
            let y = BitString::random(&mut rng, n + m - 1);
            let mut mat = tz.to_matrix(&y).unwrap();
            mat.set(row, col, y.get(seed_index));
            assert_eq!(ext.extract(&x, &y).unwrap(), gf2_matvec(&mat, &x).unwrap());
        }
    }

    #[test]
    fn matrix_entry_modified_variant() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let (n, m) = (9, 4);
        let mt = ModifiedToeplitzExtractor::new(n, m).unwrap();
        let cfg = ExtractorConfig::modified_toeplitz(n, m);
        for _ in 0..50 {
            let mutant = Mutant::random_matrix_entry(&cfg, &mut rng).unwrap();
            let Mutant::MatrixEntry {
                row,
                col,
                seed_index,
            } = mutant
            else {
                unreachable!()
            };
            assert!(col < n - m);
            let ext = MutantExtractor::new(cfg, mutant).unwrap();
            let x = BitString::random(&mut rng, n);
            let y = BitString::random(&mut rng, n - 1);
            let mut mat = mt.to_matrix(&y).unwrap();
            mat.set(row, col, y.get(seed_index));
            assert_eq!(ext.extract(&x, &y).unwrap(), gf2_matvec(&mat, &x).unwrap());
        }
    }

    #[test]
    fn invalid_mutants_rejected() {
        let cfg = ExtractorConfig::toeplitz(3, 2);
        for m in [
            Mutant::StuckOutputBit {
                index: 2,
                value: false,
            },
            Mutant::MatrixEntry {
                row: 2,
                col: 0,
                seed_index: 0,
            },
            Mutant::MatrixEntry {
                row: 0,
                col: 3,
                seed_index: 0,
            },
            Mutant::MatrixEntry {
                row: 0,
                col: 0,
                seed_index: 4,
            },
        ] {
            assert!(MutantExtractor::new(cfg, m).is_err(), "{m}");
        }
        let trev = ExtractorConfig::trevisan(16, 2, 2);
        assert!(MutantExtractor::new(
            trev,
            Mutant::MatrixEntry {
                row: 0,
                col: 0,
                seed_index: 0
            }
        )
        .is_err());
        assert!(MutantExtractor::new(trev, Mutant::DropLastInputBit).is_ok());
    }

    #[test]
    fn drop_last_bit_differs_exactly_when_bit_set() {
        let cfg = ExtractorConfig::modified_toeplitz(16, 8);
        let reference = cfg.build().unwrap();
        let ext = MutantExtractor::new(cfg, Mutant::DropLastInputBit).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let x = BitString::random(&mut rng, 16);
            let y = BitString::random(&mut rng, 15);
            let differs = ext.extract(&x, &y).unwrap() != reference.extract(&x, &y).unwrap();
            assert_eq!(differs, x.get(15));
        }
    }
}
