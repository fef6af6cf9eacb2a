//! Toeplitz and modified Toeplitz hashing.
//!
//! # Seed layout
//!
//! Both extractors place the seed `y` (length `q`) on the diagonals of the
//! hashing matrix through the circulant embedding:
//!
//! ```text
//! T[i][j] = y[(i - j) mod q]
//! ```
//!
//! so the first column is `y[0..rows]` and the first row continues with
//! `y[q-1], y[q-2], ...`. For standard Toeplitz hashing `q = n + m - 1` and
//! `T` is `m x n`. For modified Toeplitz hashing `q = n - 1`, `T'` is
//! `m x (n - m)` and acts on the first `n - m` input bits; the last `m` input
//! bits pass through the identity block and are XORed into the result.
//! This layout reproduces the bundled ModifiedToeplitzHashing response file
//! bit for bit (see `tests/golden.rs`).
//!
//! The product `T·x` is the first `rows` coefficients of the cyclic
//! convolution of `y` with `x` zero-padded to length `q`, which is what the
//! FFT path computes.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::bits::{BitString, Gf2Matrix};
use crate::error::{Error, Result};
use crate::extractor::RandomnessExtractor;
use crate::gf2poly::Gf2Poly;

/// Largest allowed deviation of a floating-point convolution coefficient
/// from the nearest integer.
pub const FFT_RESIDUAL_TOLERANCE: f64 = 0.25;

/// Above this many matrix entries `extract` switches to the FFT path.
const FAST_PATH_THRESHOLD: usize = 1 << 16;

/// Which side-information model the output length is computed for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecurityModel {
    Quantum,
    Classical,
}

/// Convolution backend for the FFT path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convolution {
    /// Complex `f64` FFT, rounded to integers. When the rounding residual
    /// reaches [`FFT_RESIDUAL_TOLERANCE`] the call either falls back to
    /// [`Convolution::Exact`] or fails with [`Error::PrecisionLoss`].
    Float { fallback: bool },
    /// Carry-less schoolbook polynomial product folded modulo `t^q - 1`.
    Exact,
}

/// Largest output length for which two-universal hashing of an
/// `input_length`-bit string with `relative_source_entropy · input_length`
/// bits of min-entropy is `error_bound`-secure:
/// `floor(k + 2 - 2·log2(1/ε))`, clamped to `[0, input_length]`.
///
/// Both security models use the same bound. The logarithm is nudged up by
/// one ulp whenever it is not exact, so floating-point rounding can only
/// make the result smaller.
pub fn calculate_length(
    model: SecurityModel,
    input_length: usize,
    relative_source_entropy: f64,
    error_bound: f64,
) -> Result<usize> {
    let _ = model;
    check_entropy_and_error(input_length, relative_source_entropy, error_bound)?;
    let k = relative_source_entropy * input_length as f64;
    let penalty = 2.0 * log2_inverse_upper(error_bound);
    let bound = (k + 2.0 - penalty).floor();
    Ok(if bound <= 0.0 {
        0
    } else {
        (bound as usize).min(input_length)
    })
}

pub(crate) fn check_entropy_and_error(
    input_length: usize,
    relative_source_entropy: f64,
    error_bound: f64,
) -> Result<()> {
    if input_length == 0 {
        return Err(Error::InvalidRange {
            name: "input_length",
            value: 0.0,
            range: "[1, inf)",
        });
    }
    if !(relative_source_entropy > 0.0 && relative_source_entropy <= 1.0) {
        return Err(Error::InvalidRange {
            name: "relative_source_entropy",
            value: relative_source_entropy,
            range: "(0, 1]",
        });
    }
    if !(error_bound > 0.0 && error_bound < 1.0) {
        return Err(Error::InvalidRange {
            name: "error_bound",
            value: error_bound,
            range: "(0, 1)",
        });
    }
    Ok(())
}

/// An upper bound on `log2(1/x)`; exact when `x` is a power of two.
pub(crate) fn log2_inverse_upper(x: f64) -> f64 {
    let l = -x.log2();
    if l.fract() == 0.0 && 2f64.powf(-l) == x {
        l
    } else {
        l.next_up()
    }
}

/// Standard Toeplitz hashing `T(y)·x` with an `m x n` matrix and an
/// `(n + m - 1)`-bit seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ToeplitzExtractor {
    input_length: usize,
    output_length: usize,
}

impl ToeplitzExtractor {
    pub fn new(input_length: usize, output_length: usize) -> Result<Self> {
        if output_length == 0 || output_length > input_length {
            return Err(Error::InvalidParameters(format!(
                "Toeplitz hashing needs 1 <= m <= n, got n = {input_length}, m = {output_length}"
            )));
        }
        Ok(Self {
            input_length,
            output_length,
        })
    }

    fn check(&self, x: &BitString, y: &BitString) -> Result<()> {
        check_lengths(x, self.input_length, y, self.seed_length())
    }

    /// The hashing matrix `T(y)`.
    pub fn to_matrix(&self, y: &BitString) -> Result<Gf2Matrix> {
        check_len("seed", y, self.seed_length())?;
        Ok(circulant_block(y, self.output_length, self.input_length))
    }

    /// Row-by-row product with the hashing matrix.
    pub fn extract_naive(&self, x: &BitString, y: &BitString) -> Result<BitString> {
        self.check(x, y)?;
        Ok(toeplitz_rows_product(y, self.output_length, x))
    }

    /// FFT path with the default float backend and exact fallback.
    pub fn extract_fft(&self, x: &BitString, y: &BitString) -> Result<BitString> {
        self.extract_fft_with(x, y, Convolution::Float { fallback: true })
    }

    pub fn extract_fft_with(
        &self,
        x: &BitString,
        y: &BitString,
        backend: Convolution,
    ) -> Result<BitString> {
        self.check(x, y)?;
        cyclic_product(y, x, self.output_length, backend)
    }
}

impl RandomnessExtractor for ToeplitzExtractor {
    fn name(&self) -> &'static str {
        "ToeplitzHashing"
    }

    fn input_length(&self) -> usize {
        self.input_length
    }

    fn seed_length(&self) -> usize {
        self.input_length + self.output_length - 1
    }

    fn output_length(&self) -> usize {
        self.output_length
    }

    fn extract(&self, x: &BitString, y: &BitString) -> Result<BitString> {
        if self.input_length * self.output_length > FAST_PATH_THRESHOLD {
            self.extract_fft(x, y)
        } else {
            self.extract_naive(x, y)
        }
    }
}

/// Modified Toeplitz hashing `(T'(y) ∥ I_m)·x` with an `(n - 1)`-bit seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModifiedToeplitzExtractor {
    input_length: usize,
    output_length: usize,
}

impl ModifiedToeplitzExtractor {
    /// Requires `1 <= m < n`; `m = n` would leave `T'` without columns.
    pub fn new(input_length: usize, output_length: usize) -> Result<Self> {
        if output_length == 0 || output_length >= input_length {
            return Err(Error::InvalidParameters(format!(
                "modified Toeplitz hashing needs 1 <= m < n, got n = {input_length}, m = {output_length}"
            )));
        }
        Ok(Self {
            input_length,
            output_length,
        })
    }

    fn check(&self, x: &BitString, y: &BitString) -> Result<()> {
        check_lengths(x, self.input_length, y, self.seed_length())
    }

    fn split(&self, x: &BitString) -> (BitString, BitString) {
        let cut = self.input_length - self.output_length;
        (x.slice(0, cut), x.slice(cut, self.input_length))
    }

    /// The full hashing matrix `(T'(y) ∥ I_m)`.
    pub fn to_matrix(&self, y: &BitString) -> Result<Gf2Matrix> {
        check_len("seed", y, self.seed_length())?;
        let m = self.output_length;
        circulant_block(y, m, self.input_length - m).hconcat(&Gf2Matrix::identity(m))
    }

    pub fn extract_naive(&self, x: &BitString, y: &BitString) -> Result<BitString> {
        self.check(x, y)?;
        let (head, tail) = self.split(x);
        Ok(&toeplitz_rows_product(y, self.output_length, &head) ^ &tail)
    }

    pub fn extract_fft(&self, x: &BitString, y: &BitString) -> Result<BitString> {
        self.extract_fft_with(x, y, Convolution::Float { fallback: true })
    }

    pub fn extract_fft_with(
        &self,
        x: &BitString,
        y: &BitString,
        backend: Convolution,
    ) -> Result<BitString> {
        self.check(x, y)?;
        let (head, tail) = self.split(x);
        Ok(&cyclic_product(y, &head, self.output_length, backend)? ^ &tail)
    }
}

impl RandomnessExtractor for ModifiedToeplitzExtractor {
    fn name(&self) -> &'static str {
        "ModifiedToeplitzHashing"
    }

    fn input_length(&self) -> usize {
        self.input_length
    }

    fn seed_length(&self) -> usize {
        self.input_length - 1
    }

    fn output_length(&self) -> usize {
        self.output_length
    }

    fn extract(&self, x: &BitString, y: &BitString) -> Result<BitString> {
        let cols = self.input_length - self.output_length;
        if cols * self.output_length > FAST_PATH_THRESHOLD {
            self.extract_fft(x, y)
        } else {
            self.extract_naive(x, y)
        }
    }
}

fn check_len(what: &'static str, b: &BitString, expected: usize) -> Result<()> {
    if b.len() != expected {
        return Err(Error::LengthMismatch {
            what,
            expected,
            found: b.len(),
        });
    }
    Ok(())
}

fn check_lengths(x: &BitString, n: usize, y: &BitString, d: usize) -> Result<()> {
    check_len("input", x, n)?;
    check_len("seed", y, d)
}

/// The `rows x cols` block with entries `y[(i - j) mod q]`, `q = rows + cols - 1`.
fn circulant_block(y: &BitString, rows: usize, cols: usize) -> Gf2Matrix {
    let q = y.len();
    debug_assert_eq!(q, rows + cols - 1);
    Gf2Matrix::from_fn(rows, cols, |i, j| y.get((i + q - j) % q))
}

/// `T·x` computed row by row without materializing `T`: row `i` is a window
/// of the doubled reversed-rotated seed `u ∥ u` with `u[k] = y[(-k) mod q]`.
fn toeplitz_rows_product(y: &BitString, rows: usize, x: &BitString) -> BitString {
    let q = y.len();
    let cols = x.len();
    let u = BitString::from_bits((0..q).map(|k| y.get((q - k) % q)));
    let uu = u.concat(&u);
    BitString::from_bits((0..rows).map(|i| uu.slice(q - i, q - i + cols).dot(x)))
}

/// First `rows` coefficients of the cyclic convolution `y ⊛ x̂` (length
/// `q = |y|`, `x̂` = `x` zero-padded), reduced mod 2.
fn cyclic_product(
    y: &BitString,
    x: &BitString,
    rows: usize,
    backend: Convolution,
) -> Result<BitString> {
    match backend {
        Convolution::Exact => Ok(exact_cyclic_product(y, x, rows)),
        Convolution::Float { fallback } => match float_cyclic_product(y, x, rows) {
            Ok(z) => Ok(z),
            Err(Error::PrecisionLoss { .. }) if fallback => Ok(exact_cyclic_product(y, x, rows)),
            Err(e) => Err(e),
        },
    }
}

fn float_cyclic_product(y: &BitString, x: &BitString, rows: usize) -> Result<BitString> {
    let q = y.len();
    let to_complex = |b: &BitString| -> Vec<Complex<f64>> {
        let mut v: Vec<Complex<f64>> = b
            .iter()
            .map(|bit| Complex::new(bit as u8 as f64, 0.0))
            .collect();
        v.resize(q, Complex::new(0.0, 0.0));
        v
    };
    let mut fy = to_complex(y);
    let mut fx = to_complex(x);
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(q);
    let inverse = planner.plan_fft_inverse(q);
    forward.process(&mut fy);
    forward.process(&mut fx);
    for (a, b) in fy.iter_mut().zip(&fx) {
        *a *= b;
    }
    inverse.process(&mut fy);
    let scale = 1.0 / q as f64;
    let mut worst = 0.0f64;
    let mut out = BitString::zeros(rows);
    for (i, c) in fy.iter().take(rows).enumerate() {
        let v = c.re * scale;
        let rounded = v.round();
        worst = worst.max((v - rounded).abs()).max((c.im * scale).abs());
        if (rounded as i64) & 1 == 1 {
            out.set(i, true);
        }
    }
    if worst >= FFT_RESIDUAL_TOLERANCE {
        return Err(Error::PrecisionLoss { residual: worst });
    }
    Ok(out)
}

fn exact_cyclic_product(y: &BitString, x: &BitString, rows: usize) -> BitString {
    let q = y.len();
    let to_poly = |b: &BitString| {
        let mut p = Gf2Poly::zero();
        for (k, bit) in b.iter().enumerate() {
            if bit {
                p.set_coeff(k, true);
            }
        }
        p
    };
    let prod = to_poly(y).mul(&to_poly(x));
    // fold t^(q + i) onto t^i
    BitString::from_bits((0..rows).map(|i| prod.coeff(i) ^ prod.coeff(i + q)))
}
