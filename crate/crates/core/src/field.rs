//! Arithmetic in small finite fields GF(p^k).
//!
//! Elements are identified with integers in `[0, q)`: the base-`p` digits of
//! the integer are the coefficients of the polynomial representative, least
//! significant digit = constant term. For prime fields this is the usual
//! residue; for GF(2^k) it is the bit pattern of the polynomial. Extension
//! fields reduce modulo the monic irreducible polynomial of degree `k` with
//! the smallest such encoding.
//!
//! Addition in GF(p^k) is digit-wise addition mod `p` and multiplication is
//! polynomial multiplication modulo the reduction polynomial. Neither is an
//! integer shift or a bitwise OR unless the structure actually is that.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf2poly::{least_irreducible, Gf2Poly};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 24;

/// Factor `q` as `p^k` if it is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..)
        .take_while(|d| d * d <= q)
        .find(|d| q.is_multiple_of(*d))
        .unwrap_or(q);
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    p: u64,
    k: u32,
    order: u64,
    /// Low coefficients of the monic reduction polynomial (length `k`),
    /// empty for prime fields.
    modulus: Vec<u64>,
}

/// A finite field of prime-power order. Cheap to clone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field(Arc<Inner>);

impl Field {
    pub fn new(order: u64) -> Result<Field> {
        let (p, k) = prime_power(order).ok_or(Error::NotPrimePower(order))?;
        if order > MAX_ORDER {
            return Err(Error::FieldTooLarge(order));
        }
        let modulus = match (p, k) {
            (_, 1) => Vec::new(),
            (2, _) => {
                let m = least_irreducible(k as usize).to_u64().unwrap();
                (0..k).map(|i| (m >> i) & 1).collect()
            }
            _ => least_monic_irreducible(p, k),
        };
        Ok(Field(Arc::new(Inner {
            p,
            k,
            order,
            modulus,
        })))
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    /// Reduction polynomial as its integer encoding (including the leading
    /// `x^k` term); `None` for prime fields.
    pub fn modulus_encoding(&self) -> Option<u64> {
        if self.0.k == 1 {
            return None;
        }
        let p = self.0.p;
        let low = self.0.modulus.iter().rev().fold(0, |acc, &c| acc * p + c);
        Some(self.0.order + low)
    }

    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value >= self.0.order {
            return Err(Error::InvalidParameters(format!(
                "{value} is not a canonical element of GF({})",
                self.0.order
            )));
        }
        Ok(FieldElement {
            field: self.clone(),
            value,
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: 0,
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let Inner { p, k, .. } = *self.0;
        if k == 1 {
            return (a + b) % p;
        }
        if p == 2 {
            return a ^ b;
        }
        from_digits(
            &to_digits(a, p, k)
                .iter()
                .zip(to_digits(b, p, k))
                .map(|(x, y)| (x + y) % p)
                .collect::<Vec<_>>(),
            p,
        )
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let Inner { p, k, .. } = *self.0;
        if k == 1 {
            return ((a as u128 * b as u128) % p as u128) as u64;
        }
        if p == 2 {
            let m = Gf2Poly::from_u64(self.modulus_encoding().unwrap());
            return Gf2Poly::from_u64(a)
                .mul_mod(&Gf2Poly::from_u64(b), &m)
                .to_u64()
                .unwrap();
        }
        let prod = poly_mul(&to_digits(a, p, k), &to_digits(b, p, k), p);
        from_digits(&poly_rem_monic(prod, &self.0.modulus, p), p)
    }

    /// Horner evaluation; `coeffs[i]` is the coefficient of `x^i`.
    pub fn eval_poly(&self, coeffs: &[u64], point: u64) -> u64 {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, point), c))
    }
}

/// An element of a specific [`Field`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: u64,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
}

fn same_field(a: &FieldElement, b: &FieldElement) -> Result<()> {
    if a.field == b.field {
        Ok(())
    } else {
        Err(Error::FieldMismatch)
    }
}

pub fn field_add(a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    same_field(a, b)?;
    Ok(FieldElement {
        value: a.field.add(a.value, b.value),
        field: a.field.clone(),
    })
}

pub fn field_mul(a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    same_field(a, b)?;
    Ok(FieldElement {
        value: a.field.mul(a.value, b.value),
        field: a.field.clone(),
    })
}

/// Evaluates `Σ coeffs[i] · point^i`. Coefficients are in ascending degree
/// order: `coeffs[0]` is the constant term.
pub fn field_eval_poly(coeffs: &[FieldElement], point: &FieldElement) -> Result<FieldElement> {
    let mut acc = point.field.zero();
    for c in coeffs.iter().rev() {
        acc = field_add(&field_mul(&acc, point)?, c)?;
    }
    Ok(acc)
}

fn to_digits(mut v: u64, p: u64, k: u32) -> Vec<u64> {
    (0..k)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn from_digits(digits: &[u64], p: u64) -> u64 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Remainder modulo the monic polynomial `x^k + Σ low[i] x^i`.
fn poly_rem_monic(mut a: Vec<u64>, low: &[u64], p: u64) -> Vec<u64> {
    let k = low.len();
    while a.len() > k {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let base = a.len() - k;
            for (i, &c) in low.iter().enumerate() {
                a[base + i] = (a[base + i] + (p - lead) * c % p) % p;
            }
        }
    }
    a.resize(k, 0);
    a
}

fn least_monic_irreducible(p: u64, k: u32) -> Vec<u64> {
    let q = p.pow(k);
    (0..q)
        .map(|low| to_digits(low, p, k))
        .find(|low| monic_irreducible(low, p))
        .expect("an irreducible polynomial exists for every degree")
}

/// Trial division of the monic polynomial `x^k + low` by every monic
/// polynomial of degree 1..=k/2.
fn monic_irreducible(low: &[u64], p: u64) -> bool {
    let k = low.len();
    let mut full = low.to_vec();
    full.push(1);
    for d in 1..=k / 2 {
        for dl in 0..p.pow(d as u32) {
            let divisor = to_digits(dl, p, d as u32);
            if poly_rem_monic(full.clone(), &divisor, p)
                .iter()
                .all(|&c| c == 0)
            {
                return false;
            }
        }
    }
    true
}
