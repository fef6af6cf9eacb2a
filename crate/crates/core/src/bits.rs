//! Bit strings and dense GF(2) linear algebra.
//!
//! A [`BitString`] has an exact bit length that is not rounded to bytes.
//! Index 0 is the leftmost bit: the most significant bit when the string is
//! written as hex or as a `0`/`1` string. Bits are packed MSB-first into
//! `u64` words and the unused tail of the last word is always zero.

use std::fmt;
use std::ops::BitXor;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// An ordered sequence of bits with an explicit length.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

impl BitString {
    /// All-zero string of `len` bits.
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    /// All-one string of `len` bits.
    pub fn ones(len: usize) -> Self {
        let mut b = Self {
            words: vec![u64::MAX; words_for(len)],
            len,
        };
        b.clear_tail();
        b
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut b = Self::default();
        for bit in bits {
            b.push(bit);
        }
        b
    }

    /// Uniformly random string of `len` bits.
    pub fn random<R: rand::RngCore + ?Sized>(rng: &mut R, len: usize) -> Self {
        let mut b = Self {
            words: (0..words_for(len)).map(|_| rng.next_u64()).collect(),
            len,
        };
        b.clear_tail();
        b
    }

    /// The low `len` bits of `value`, most significant first.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64, "from_u64 supports at most 64 bits");
        Self::from_bits((0..len).map(|i| (value >> (len - 1 - i)) & 1 == 1))
    }

    /// Inverse of [`BitString::from_u64`]; the string must be at most 64 bits.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= 64, "to_u64 supports at most 64 bits");
        self.iter().fold(0, |acc, b| (acc << 1) | b as u64)
    }

    /// Parses an ASCII string of `0` and `1` characters.
    pub fn from_binary_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut b = Self::default();
        for (pos, c) in s.chars().enumerate() {
            match c {
                '0' => b.push(false),
                '1' => b.push(true),
                other => {
                    return Err(Error::InvalidBinaryDigit {
                        position: pos,
                        found: other,
                    })
                }
            }
        }
        Ok(b)
    }

    pub fn to_binary_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    /// Lowercase hex, MSB first. Strings whose length is not a multiple of 8
    /// are left-padded with zero bits up to the next byte boundary.
    pub fn to_hex(&self) -> String {
        let nbytes = self.len.div_ceil(8);
        let pad = nbytes * 8 - self.len;
        let mut out = String::with_capacity(nbytes * 2);
        let mut byte = 0u8;
        let mut filled = pad;
        for bit in self.iter() {
            byte = (byte << 1) | bit as u8;
            filled += 1;
            if filled == 8 {
                out.push_str(&format!("{byte:02x}"));
                byte = 0;
                filled = 0;
            }
        }
        out
    }

    /// Inverse of [`BitString::to_hex`] for a string of `len` bits.
    pub fn from_hex(s: &str, len: usize) -> Result<Self> {
        let s = s.trim();
        let expected = len.div_ceil(8) * 2;
        if s.len() != expected {
            return Err(Error::HexLength {
                expected,
                found: s.len(),
                bits: len,
            });
        }
        let mut raw = Vec::with_capacity(s.len() * 4);
        for (pos, c) in s.chars().enumerate() {
            let v = c.to_digit(16).ok_or(Error::InvalidHexDigit {
                position: pos,
                found: c,
            })?;
            for k in (0..4).rev() {
                raw.push((v >> k) & 1 == 1);
            }
        }
        let pad = raw.len() - len;
        if raw[..pad].iter().any(|&b| b) {
            return Err(Error::NonZeroPadding { bits: len });
        }
        Ok(Self::from_bits(raw[pad..].iter().copied()))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / WORD] >> (WORD - 1 - i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (WORD - 1 - i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let v = self.get(i);
        self.set(i, !v);
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, bit);
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = bool> + ExactSizeIterator + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Parity of the Hamming weight.
    pub fn parity(&self) -> bool {
        self.words.iter().fold(0u64, |a, w| a ^ w).count_ones() & 1 == 1
    }

    /// GF(2) inner product: parity of `self AND other`.
    pub fn dot(&self, other: &BitString) -> bool {
        assert_eq!(self.len, other.len, "dot product of unequal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u64, |a, (x, y)| a ^ (x & y))
            .count_ones()
            & 1
            == 1
    }

    /// Bits `[start, end)` as a new string.
    pub fn slice(&self, start: usize, end: usize) -> BitString {
        assert!(
            start <= end && end <= self.len,
            "slice {start}..{end} out of range"
        );
        let len = end - start;
        let mut out = BitString::zeros(len);
        let shift = start % WORD;
        let first = start / WORD;
        for (k, w) in out.words.iter_mut().enumerate() {
            let hi = self.words.get(first + k).copied().unwrap_or(0);
            *w = if shift == 0 {
                hi
            } else {
                let lo = self.words.get(first + k + 1).copied().unwrap_or(0);
                (hi << shift) | (lo >> (WORD - shift))
            };
        }
        out.clear_tail();
        out
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn extend(&mut self, other: &BitString) {
        if self.len.is_multiple_of(WORD) {
            self.words.extend_from_slice(&other.words);
            self.len += other.len;
            return;
        }
        for b in other.iter() {
            self.push(b);
        }
    }

    /// Bits in reverse order.
    pub fn reversed(&self) -> BitString {
        BitString::from_bits(self.iter().rev())
    }

    /// Bits at the given positions, in the order given.
    pub fn select(&self, positions: &[usize]) -> BitString {
        BitString::from_bits(positions.iter().map(|&p| self.get(p)))
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX << (WORD - rem);
            }
        }
    }
}

impl BitXor for &BitString {
    type Output = BitString;

    fn bitxor(self, rhs: &BitString) -> BitString {
        assert_eq!(self.len, rhs.len, "xor of unequal lengths");
        BitString {
            words: self
                .words
                .iter()
                .zip(&rhs.words)
                .map(|(a, b)| a ^ b)
                .collect(),
            len: self.len,
        }
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 128 {
            write!(f, "BitString({:?})", self.to_binary_string())
        } else {
            write!(
                f,
                "BitString(len={}, hex={}..)",
                self.len,
                &self.to_hex()[..16]
            )
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_binary_string())
    }
}

/// Dense row-major matrix over GF(2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: Vec<BitString>,
    cols: usize,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![BitString::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut out = Vec::with_capacity(rows);
        for i in 0..rows {
            out.push(BitString::from_bits((0..cols).map(|j| f(i, j))));
        }
        Self { rows: out, cols }
    }

    pub fn from_rows(rows: Vec<BitString>) -> Result<Self> {
        let cols = rows.first().map_or(0, BitString::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self { rows, cols })
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value)
    }

    pub fn row(&self, i: usize) -> &BitString {
        &self.rows[i]
    }

    /// Horizontal concatenation `(self ∥ other)`.
    pub fn hconcat(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.num_rows() != other.num_rows() {
            return Err(Error::DimensionMismatch {
                expected: self.num_rows(),
                found: other.num_rows(),
            });
        }
        Ok(Gf2Matrix {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.concat(b))
                .collect(),
            cols: self.cols + other.cols,
        })
    }
}

/// Matrix-vector product over GF(2): `z_i = XOR_j (M_ij AND x_j)`.
pub fn gf2_matvec(matrix: &Gf2Matrix, x: &BitString) -> Result<BitString> {
    if matrix.num_cols() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: matrix.num_cols(),
            found: x.len(),
        });
    }
    Ok(BitString::from_bits(matrix.rows.iter().map(|r| r.dot(x))))
}
