//! Brute-force oracles written directly from the definitions, sharing no
//! code with the library beyond `BitString` accessors.

#![allow(dead_code)]

use privamp::BitString;

pub fn bits_of(value: u64, len: usize) -> BitString {
    BitString::from_bits((0..len).map(|i| (value >> (len - 1 - i)) & 1 == 1))
}

pub fn to_vec(b: &BitString) -> Vec<u8> {
    (0..b.len()).map(|i| b.get(i) as u8).collect()
}

pub fn from_vec(v: &[u8]) -> BitString {
    BitString::from_bits(v.iter().map(|&b| b == 1))
}

/// `rows x cols` matrix with entry `(i, j) = y[(i - j) mod |y|]`.
pub fn toeplitz_matrix(y: &[u8], rows: usize, cols: usize) -> Vec<Vec<u8>> {
    let q = y.len() as i64;
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| y[(i as i64 - j as i64).rem_euclid(q) as usize])
                .collect()
        })
        .collect()
}

pub fn mat_vec(mat: &[Vec<u8>], x: &[u8]) -> Vec<u8> {
    mat.iter()
        .map(|row| row.iter().zip(x).fold(0, |acc, (a, b)| acc ^ (a & b)))
        .collect()
}

pub fn toeplitz(x: &[u8], y: &[u8], m: usize) -> Vec<u8> {
    mat_vec(&toeplitz_matrix(y, m, x.len()), x)
}

pub fn modified_toeplitz(x: &[u8], y: &[u8], m: usize) -> Vec<u8> {
    let n = x.len();
    let head = mat_vec(&toeplitz_matrix(y, m, n - m), &x[..n - m]);
    head.iter().zip(&x[n - m..]).map(|(a, b)| a ^ b).collect()
}

/// Carry-less product.
pub fn clmul(a: u64, b: u64) -> u64 {
    (0..64)
        .filter(|i| (b >> i) & 1 == 1)
        .fold(0, |acc, i| acc ^ (a << i))
}

pub fn poly_mod(mut a: u64, m: u64) -> u64 {
    let dm = 63 - m.leading_zeros();
    while a != 0 && 63 - a.leading_zeros() >= dm {
        a ^= m << (63 - a.leading_zeros() - dm);
    }
    a
}

/// Least irreducible binary polynomial of `degree` by integer encoding.
pub fn least_irreducible(degree: u32) -> u64 {
    (1u64 << degree..1u64 << (degree + 1))
        .find(|&p| (2u64..1 << (degree / 2 + 1)).all(|q| poly_mod(p, q) != 0))
        .unwrap()
}

pub fn gf_mul(a: u64, b: u64, modulus: u64) -> u64 {
    poly_mod(clmul(a, b), modulus)
}

/// The polynomial one-bit extractor: `x` in `l`-bit chunks (zero padded at
/// the end) as coefficients, leading chunk of highest degree, evaluated at
/// `α` and combined with `β` by an inner product.
pub fn one_bit(x: &[u8], seed: &[u8]) -> u8 {
    let l = seed.len() / 2;
    let modulus = least_irreducible(l as u32);
    let word = |s: &[u8]| s.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
    let alpha = word(&seed[..l]);
    let beta = word(&seed[l..]);
    let mut padded = x.to_vec();
    padded.resize(x.len().div_ceil(l) * l, 0);
    let acc = padded
        .chunks(l)
        .fold(0u64, |acc, c| gf_mul(acc, alpha, modulus) ^ word(c));
    ((acc & beta).count_ones() & 1) as u8
}

/// Sets `{a·t + p_i(a)}` over GF(t), `t` a power of two, with the base-`t`
/// digits of `i` as ascending coefficients of `p_i`.
pub fn design_sets(m: usize, t: usize) -> Vec<Vec<usize>> {
    let e = t.trailing_zeros();
    let modulus = least_irreducible(e);
    let mut c = 0;
    while t.pow(c + 1) < m {
        c += 1;
    }
    (0..m)
        .map(|i| {
            let coeffs: Vec<u64> = (0..=c).map(|k| ((i / t.pow(k)) % t) as u64).collect();
            let mut set: Vec<usize> = (0..t as u64)
                .map(|a| {
                    let v = coeffs
                        .iter()
                        .rev()
                        .fold(0u64, |acc, &co| gf_mul(acc, a, modulus) ^ co);
                    a as usize * t + v as usize
                })
                .collect();
            set.sort_unstable();
            set
        })
        .collect()
}

pub fn trevisan(x: &[u8], y: &[u8], m: usize, t: usize) -> Vec<u8> {
    design_sets(m, t)
        .iter()
        .map(|s| {
            let seed: Vec<u8> = s.iter().map(|&p| y[p]).collect();
            one_bit(x, &seed)
        })
        .collect()
}
