//! Trevisan's extractor: a weak design selects `m` slices of the seed and a
//! one-bit extractor is run once per slice on the same input.
//!
//! Output bit `i` is `one_bit(x, y restricted to S_i)`, with the positions
//! of `S_i` read in ascending order; bits are emitted for `i = 0..m` left to
//! right.

mod design;
mod one_bit;

use rayon::prelude::*;

pub use design::{
    generate_design, generate_design_with_cap, minimal_degree, verify_design,
    verify_design_with_cap, DesignReport, FiniteFieldPolynomialDesign, WeakDesign, DEFAULT_OVERLAP,
    DEFAULT_VERIFY_CAP,
};
pub use one_bit::PolynomialOneBitExtractor;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::extractor::RandomnessExtractor;
use crate::toeplitz::{check_entropy_and_error, log2_inverse_upper};

/// Output bits computed sequentially below this count.
const PARALLEL_THRESHOLD: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct TrevisanExtractor {
    design: WeakDesign,
    one_bit: PolynomialOneBitExtractor,
}

impl TrevisanExtractor {
    /// Finite-field polynomial design with `m` sets of size
    /// `one_bit_seed_length` composed with the polynomial one-bit extractor.
    /// `one_bit_seed_length` must be a power of two (it is both the design's
    /// prime-power set size and twice the one-bit field degree).
    pub fn new(
        input_length: usize,
        output_length: usize,
        one_bit_seed_length: usize,
    ) -> Result<Self> {
        let t = one_bit_seed_length as u64;
        if !t.is_power_of_two() || t < 2 {
            return Err(Error::InvalidParameters(format!(
                "one-bit seed length {one_bit_seed_length} must be an even prime power, i.e. a power of two >= 2"
            )));
        }
        let design = generate_design(output_length, t)?.into_design();
        let one_bit = PolynomialOneBitExtractor::new(input_length, one_bit_seed_length)?;
        Self::from_parts(design, one_bit)
    }

    pub fn from_parts(design: WeakDesign, one_bit: PolynomialOneBitExtractor) -> Result<Self> {
        if design.set_size() != one_bit.seed_length() {
            return Err(Error::InvalidParameters(format!(
                "design set size {} differs from one-bit seed length {}",
                design.set_size(),
                one_bit.seed_length()
            )));
        }
        if design.num_sets() == 0 {
            return Err(Error::InvalidParameters(
                "output length must be positive".into(),
            ));
        }
        Ok(Self { design, one_bit })
    }

    pub fn design(&self) -> &WeakDesign {
        &self.design
    }

    pub fn one_bit(&self) -> &PolynomialOneBitExtractor {
        &self.one_bit
    }

    /// The seed slice fed to the one-bit extractor for output bit `i`.
    pub fn seed_slice(&self, y: &BitString, i: usize) -> BitString {
        y.select(self.design.set(i))
    }

    fn bit(&self, x: &BitString, y: &BitString, i: usize) -> Result<bool> {
        self.one_bit.extract_bit(x, &self.seed_slice(y, i))
    }
}

impl RandomnessExtractor for TrevisanExtractor {
    fn name(&self) -> &'static str {
        "TrevisanExtractor"
    }

    fn input_length(&self) -> usize {
        self.one_bit.input_length()
    }

    fn seed_length(&self) -> usize {
        self.design.universe()
    }

    fn output_length(&self) -> usize {
        self.design.num_sets()
    }

    fn extract(&self, x: &BitString, y: &BitString) -> Result<BitString> {
        if x.len() != self.input_length() {
            return Err(Error::LengthMismatch {
                what: "input",
                expected: self.input_length(),
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
        let m = self.output_length();
        let bits: Vec<bool> = if m >= PARALLEL_THRESHOLD {
            (0..m)
                .into_par_iter()
                .map(|i| self.bit(x, y, i))
                .collect::<Result<_>>()?
        } else {
            (0..m).map(|i| self.bit(x, y, i)).collect::<Result<_>>()?
        };
        Ok(BitString::from_bits(bits))
    }
}

/// Parameters chosen by [`calculate_length_trevisan`].
#[derive(Clone, Debug, PartialEq)]
pub struct TrevisanParams {
    pub output_length: usize,
    pub one_bit_seed_length: usize,
    /// Extension degree `l` of the one-bit extractor's field.
    pub field_degree: usize,
    /// Number of input chunks `s = ceil(n / l)`.
    pub num_chunks: usize,
    /// Seed length `d = t²`.
    pub seed_length: usize,
    /// Polynomial degree bound `c` of the weak design.
    pub design_degree: u32,
    pub overlap: f64,
    /// Quantum-proof error per output bit, `ε / m`.
    pub per_bit_error: f64,
    /// Classical error the one-bit extractor must reach so that its quantum
    /// lift `(1 + √2)·√ε_c` equals the per-bit error.
    pub one_bit_classical_error: f64,
    /// Min-entropy the one-bit extractor needs: `l + 2·log2(1/ε_c) + log2(s)`.
    pub one_bit_entropy: f64,
    /// Total min-entropy required: one-bit requirement plus `r·m`.
    pub required_entropy: f64,
}

/// Largest `m` for which Trevisan's extractor with the finite-field design
/// and the polynomial one-bit extractor is quantum-proof `(k, ε)`-strong.
///
/// For a candidate `m` the per-bit quantum error is `ε₁ = ε / m`. The
/// one-bit extractor is classical-proof, so it must reach classical error
/// `ε_c = (ε₁ / (1 + √2))²`. It then needs `k₁ = l + 2·log2(1/ε_c) +
/// log2(s)` bits of min-entropy and a field with `l >= log2(s) +
/// 2·log2(1/ε_c)`. The composition consumes `r·m` further bits (`r = 2e`),
/// so `m` is feasible when `k >= k₁ + r·m`, the field condition holds and
/// `m <= t^t`. Feasibility only gets harder as `m` grows, which makes the
/// result non-decreasing in `k` and in `ε`.
pub fn calculate_length_trevisan(
    input_length: usize,
    relative_source_entropy: f64,
    error_bound: f64,
    one_bit_seed_length: usize,
) -> Result<TrevisanParams> {
    check_entropy_and_error(input_length, relative_source_entropy, error_bound)?;
    let t = one_bit_seed_length;
    if !t.is_power_of_two() || t < 2 {
        return Err(Error::InvalidParameters(format!(
            "one-bit seed length {t} must be a power of two >= 2"
        )));
    }
    let k = relative_source_entropy * input_length as f64;
    let l = t / 2;
    let s = input_length.div_ceil(l);

    let evaluate = |m: usize| -> Option<TrevisanParams> {
        let design_degree = minimal_degree(m, t as u64)?;
        let per_bit_error = error_bound / m as f64;
        let lifted = per_bit_error / (1.0 + std::f64::consts::SQRT_2);
        let one_bit_classical_error = lifted * lifted;
        let log_term = 2.0 * log2_inverse_upper(one_bit_classical_error);
        let log_s = (s as f64).log2();
        let one_bit_entropy = l as f64 + log_term + log_s;
        let required_entropy = one_bit_entropy + DEFAULT_OVERLAP * m as f64;
        let feasible = k >= required_entropy && l as f64 >= log_s + log_term;
        feasible.then_some(TrevisanParams {
            output_length: m,
            one_bit_seed_length: t,
            field_degree: l,
            num_chunks: s,
            seed_length: t * t,
            design_degree,
            overlap: DEFAULT_OVERLAP,
            per_bit_error,
            one_bit_classical_error,
            one_bit_entropy,
            required_entropy,
        })
    };

    let mut best = evaluate(1).ok_or(Error::NoFeasibleOutput)?;
    // r·m <= k bounds the search
    let mut hi = (k / DEFAULT_OVERLAP).floor() as usize + 1;
    let mut lo = 1;
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        match evaluate(mid) {
            Some(p) => {
                lo = mid;
                best = p;
            }
            None => hi = mid,
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn composition_examples() {
        let ext = TrevisanExtractor::new(8, 2, 2).unwrap();
        assert_eq!(ext.seed_length(), 4);
        assert_eq!(ext.output_length(), 2);
        assert_eq!(
            ext.extract(&BitString::zeros(8), &BitString::ones(4))
                .unwrap(),
            BitString::zeros(2)
        );

        let single = TrevisanExtractor::new(8, 1, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x = BitString::from_bits((0..8).map(|_| rng.gen::<bool>()));
            let y = BitString::from_bits((0..16).map(|_| rng.gen::<bool>()));
            let y0 = y.select(single.design().set(0));
            assert_eq!(
                single.extract(&x, &y).unwrap().get(0),
                single.one_bit().extract_bit(&x, &y0).unwrap()
            );
        }
    }

    #[test]
    fn rejects_incompatible_parts() {
        assert!(TrevisanExtractor::new(8, 2, 3).is_err());
        assert!(TrevisanExtractor::new(8, 2, 6).is_err());
        assert!(matches!(
            TrevisanExtractor::new(8, 5, 2),
            Err(Error::TooManySets { .. })
        ));
        let design = generate_design(2, 4).unwrap().into_design();
        let one_bit = PolynomialOneBitExtractor::new(8, 2).unwrap();
        assert!(TrevisanExtractor::from_parts(design, one_bit).is_err());
        let ext = TrevisanExtractor::new(8, 2, 2).unwrap();
        assert!(matches!(
            ext.extract(&BitString::zeros(7), &BitString::zeros(4)),
            Err(Error::LengthMismatch { what: "input", .. })
        ));
    }

    #[test]
    fn parallel_assembly_is_in_index_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ext = TrevisanExtractor::new(64, 100, 16).unwrap();
        let x = BitString::from_bits((0..64).map(|_| rng.gen::<bool>()));
        let y = BitString::from_bits((0..256).map(|_| rng.gen::<bool>()));
        let got = ext.extract(&x, &y).unwrap();
        for i in 0..100 {
            assert_eq!(got.get(i), ext.bit(&x, &y, i).unwrap());
        }
    }

    #[test]
    fn length_infeasible_for_tiny_entropy() {
        assert!(matches!(
            calculate_length_trevisan(64, 0.1, 1e-6, 1024),
            Err(Error::NoFeasibleOutput)
        ));
        assert!(matches!(
            calculate_length_trevisan(1 << 20, 0.5, 1e-6, 8),
            Err(Error::NoFeasibleOutput)
        ));
        assert!(calculate_length_trevisan(100, 0.5, 1e-6, 6).is_err());
        assert!(calculate_length_trevisan(100, 0.5, 2.0, 8).is_err());
    }

    #[test]
    fn length_for_reference_configuration() {
        let p = calculate_length_trevisan(1 << 20, 0.5, 1e-6, 1024).unwrap();
        assert_eq!(p.field_degree, 512);
        assert_eq!(p.seed_length, 1 << 20);
        assert!(p.required_entropy <= 0.5 * (1 << 20) as f64);
        assert!(p.output_length > 1000);
        // one more bit would be infeasible
        let k = 0.5 * (1 << 20) as f64;
        let next = p.output_length + 1;
        let eps_c = (1e-6 / next as f64 / (1.0 + 2f64.sqrt())).powi(2);
        let need = 512.0
            + 2.0 * (1.0 / eps_c).log2()
            + (p.num_chunks as f64).log2()
            + DEFAULT_OVERLAP * next as f64;
        assert!(need > k - 1e-6);
    }

    #[test]
    fn length_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let n = rng.gen_range(1_000..1_000_000);
            let eps = 10f64.powf(-rng.gen_range(1.0..12.0));
            let t = 1usize << rng.gen_range(7..11);
            let m = |h: f64, e: f64| {
                calculate_length_trevisan(n, h, e, t).map_or(0, |p| p.output_length)
            };
            let h = rng.gen_range(0.3..1.0);
            assert!(
                m(h, (2.0 * eps).min(0.99)) >= m(h, eps),
                "n={n} eps={eps} t={t}"
            );
            assert!(m(0.9, eps) >= m(0.5, eps));
        }
    }
}
