//! Polynomials over GF(2) of arbitrary degree.
//!
//! Coefficient of `x^k` lives in bit `k % 64` of word `k / 64`. Values are
//! kept normalized (no high zero words), so the zero polynomial has no words.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl std::fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = (0..=self.degree().unwrap_or(0))
            .rev()
            .filter(|&k| self.coeff(k))
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// Carry-less 64x64 -> 128 bit product.
#[inline]
fn clmul(a: u64, b: u64) -> u128 {
    let b = b as u128;
    let mut r = 0u128;
    for i in 0..64 {
        let mask = 0u128.wrapping_sub(((a >> i) & 1) as u128);
        r ^= (b << i) & mask;
    }
    r
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    pub fn from_u64(v: u64) -> Self {
        Self::from_words(vec![v])
    }

    pub fn from_words(mut words: Vec<u64>) -> Self {
        while words.last() == Some(&0) {
            words.pop();
        }
        Self { words }
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut p = Self::zero();
        p.set_coeff(k, true);
        p
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Value as an integer when the degree is below 64.
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.words
            .get(k / 64)
            .is_some_and(|w| (w >> (k % 64)) & 1 == 1)
    }

    pub fn set_coeff(&mut self, k: usize, value: bool) {
        if self.words.len() <= k / 64 {
            if !value {
                return;
            }
            self.words.resize(k / 64 + 1, 0);
        }
        if value {
            self.words[k / 64] |= 1 << (k % 64);
        } else {
            self.words[k / 64] &= !(1 << (k % 64));
            self.normalize();
        }
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        Self::from_words(words)
    }

    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0u64; self.words.len() + other.words.len()];
        for (i, &a) in self.words.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.words.iter().enumerate() {
                let p = clmul(a, b);
                out[i + j] ^= p as u64;
                out[i + j + 1] ^= (p >> 64) as u64;
            }
        }
        Self::from_words(out)
    }

    pub fn square(&self) -> Gf2Poly {
        let mut out = vec![0u64; self.words.len() * 2];
        for (i, &w) in self.words.iter().enumerate() {
            let p = clmul(w, w);
            out[2 * i] = p as u64;
            out[2 * i + 1] = (p >> 64) as u64;
        }
        Self::from_words(out)
    }

    /// XOR `other * x^shift` into `self`.
    fn xor_shifted(&mut self, other: &Gf2Poly, shift: usize) {
        let ws = shift / 64;
        let bs = shift % 64;
        let needed = other.words.len() + ws + 1;
        if self.words.len() < needed {
            self.words.resize(needed, 0);
        }
        for (k, &w) in other.words.iter().enumerate() {
            self.words[k + ws] ^= w << bs;
            if bs != 0 {
                self.words[k + ws + 1] ^= w >> (64 - bs);
            }
        }
        self.normalize();
    }

    /// Remainder of division by a nonzero `modulus`.
    pub fn rem(&self, modulus: &Gf2Poly) -> Gf2Poly {
        let md = modulus.degree().expect("division by the zero polynomial");
        let mut r = self.clone();
        while let Some(d) = r.degree() {
            if d < md {
                break;
            }
            r.xor_shifted(modulus, d - md);
        }
        r
    }

    pub fn mul_mod(&self, other: &Gf2Poly, modulus: &Gf2Poly) -> Gf2Poly {
        self.mul(other).rem(modulus)
    }

    pub fn gcd(&self, other: &Gf2Poly) -> Gf2Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let Some(deg) = self.degree() else {
            return false;
        };
        if deg == 0 {
            return false;
        }
        if deg == 1 {
            return true;
        }
        if !self.coeff(0) {
            return false;
        }
        let x = Gf2Poly::monomial(1);
        let mut power = x.clone();
        for _ in 1..=deg / 2 {
            power = power.square().rem(self);
            if self.gcd(&power.add(&x)).degree() != Some(0) {
                return false;
            }
        }
        true
    }
}

/// The irreducible polynomial of the given degree with the smallest integer
/// encoding. Results are cached per degree.
pub fn least_irreducible(degree: usize) -> Gf2Poly {
    assert!(degree >= 1, "degree must be positive");
    static CACHE: OnceLock<Mutex<HashMap<usize, Gf2Poly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&degree) {
        return p.clone();
    }
    let found = if degree == 1 {
        // x < x + 1
        Gf2Poly::monomial(1)
    } else {
        search_least_irreducible(degree)
    };
    cache.lock().unwrap().insert(degree, found.clone());
    found
}

fn search_least_irreducible(degree: usize) -> Gf2Poly {
    // Low part enumerates odd integers (constant term 1); an even number of
    // terms is divisible by x + 1 and skipped.
    let mut low: u64 = 1;
    loop {
        let mut candidate = Gf2Poly::from_u64(low);
        candidate.set_coeff(degree, true);
        if (low.count_ones() + 1) % 2 == 1 && candidate.is_irreducible() {
            return candidate;
        }
        low += 2;
        assert!(low < (1u64 << 62), "no irreducible polynomial found");
    }
}
