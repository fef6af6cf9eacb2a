//! Polynomial (Reed-Solomon then Hadamard) one-bit extractor over GF(2^l).
//!
//! The `2l`-bit seed splits into `α` (first `l` bits) and `β` (last `l`
//! bits). The input is cut into `s = ceil(n / l)` chunks of `l` bits, the
//! last one zero-padded on the right. Chunk `j` (leftmost first) is the
//! coefficient of degree `s - 1 - j`, so evaluation is Horner's rule over the
//! chunks in input order. The output bit is `parity(p_x(α) AND β)`.
//!
//! An `l`-bit block maps to a field element by reading it MSB first: bit 0
//! of the block is the coefficient of `X^(l-1)`.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::gf2poly::{least_irreducible, Gf2Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialOneBitExtractor {
    input_length: usize,
    field_degree: usize,
    modulus: Gf2Poly,
}

impl PolynomialOneBitExtractor {
    /// One-bit extractor with a `seed_length`-bit seed; `seed_length` must
    /// be even and positive, the field is GF(2^(seed_length/2)).
    pub fn new(input_length: usize, seed_length: usize) -> Result<Self> {
        if seed_length == 0 || !seed_length.is_multiple_of(2) {
            return Err(Error::InvalidParameters(format!(
                "one-bit extractor seed length must be even and positive, got {seed_length}"
            )));
        }
        if input_length == 0 {
            return Err(Error::InvalidParameters(
                "input length must be positive".into(),
            ));
        }
        let field_degree = seed_length / 2;
        Ok(Self {
            input_length,
            field_degree,
            modulus: least_irreducible(field_degree),
        })
    }

    pub fn input_length(&self) -> usize {
        self.input_length
    }

    pub fn seed_length(&self) -> usize {
        2 * self.field_degree
    }

    /// `l`, the extension degree of the field.
    pub fn field_degree(&self) -> usize {
        self.field_degree
    }

    /// Number of input chunks (polynomial coefficients).
    pub fn num_chunks(&self) -> usize {
        self.input_length.div_ceil(self.field_degree)
    }

    pub fn modulus(&self) -> &Gf2Poly {
        &self.modulus
    }

    pub fn extract_bit(&self, x: &BitString, y: &BitString) -> Result<bool> {
        if x.len() != self.input_length {
            return Err(Error::LengthMismatch {
                what: "input",
                expected: self.input_length,
                found: x.len(),
            });
        }
        if y.len() != self.seed_length() {
            return Err(Error::LengthMismatch {
                what: "seed",
                expected: self.seed_length(),
                found: y.len(),
            });
        }
        let l = self.field_degree;
        let alpha = block_to_poly(&y.slice(0, l));
        let beta = block_to_poly(&y.slice(l, 2 * l));
        let mut acc = Gf2Poly::zero();
        for j in 0..self.num_chunks() {
            let start = j * l;
            let end = (start + l).min(self.input_length);
            let mut chunk = x.slice(start, end);
            if chunk.len() < l {
                chunk.extend(&BitString::zeros(l - chunk.len()));
            }
            acc = acc
                .mul_mod(&alpha, &self.modulus)
                .add(&block_to_poly(&chunk));
        }
        let parity = acc
            .words()
            .iter()
            .zip(beta.words())
            .fold(0u64, |p, (a, b)| p ^ (a & b))
            .count_ones();
        Ok(parity % 2 == 1)
    }
}

/// MSB-first block to polynomial: bit `i` of an `l`-bit block is the
/// coefficient of `X^(l-1-i)`.
fn block_to_poly(block: &BitString) -> Gf2Poly {
    let l = block.len();
    let mut p = Gf2Poly::zero();
    for (i, bit) in block.iter().enumerate() {
        if bit {
            p.set_coeff(l - 1 - i, true);
        }
    }
    p
}
