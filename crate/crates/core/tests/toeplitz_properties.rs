mod common;

use privamp::toeplitz::Convolution;
use privamp::{
    calculate_length, BitString, ModifiedToeplitzExtractor, SecurityModel, ToeplitzExtractor,
};
use proptest::prelude::*;

#[test]
fn all_paths_agree_exhaustively_on_small_sizes() {
    for n in 1..=5usize {
        for m in 1..=n.min(3) {
            let tz = ToeplitzExtractor::new(n, m).unwrap();
            let d = n + m - 1;
            for xv in 0..1u64 << n {
                for yv in 0..1u64 << d {
                    let (x, y) = (common::bits_of(xv, n), common::bits_of(yv, d));
                    let naive = tz.extract_naive(&x, &y).unwrap();
                    assert_eq!(tz.extract_fft(&x, &y).unwrap(), naive);
                    assert_eq!(
                        tz.extract_fft_with(&x, &y, Convolution::Exact).unwrap(),
                        naive
                    );
                    let oracle = common::toeplitz(&common::to_vec(&x), &common::to_vec(&y), m);
                    assert_eq!(
                        common::from_vec(&oracle),
                        naive,
                        "n={n} m={m} x={xv} y={yv}"
                    );
                }
            }
            if m == n {
                continue;
            }
            let mt = ModifiedToeplitzExtractor::new(n, m).unwrap();
            for xv in 0..1u64 << n {
                for yv in 0..1u64 << (n - 1) {
                    let (x, y) = (common::bits_of(xv, n), common::bits_of(yv, n - 1));
                    let naive = mt.extract_naive(&x, &y).unwrap();
                    assert_eq!(mt.extract_fft(&x, &y).unwrap(), naive);
                    assert_eq!(
                        mt.extract_fft_with(&x, &y, Convolution::Exact).unwrap(),
                        naive
                    );
                    let oracle =
                        common::modified_toeplitz(&common::to_vec(&x), &common::to_vec(&y), m);
                    assert_eq!(common::from_vec(&oracle), naive);
                }
            }
        }
    }
}

/// Number of seeds on which `x1` and `x2` collide, for every distinct pair.
fn max_collisions(n: usize, d: usize, f: impl Fn(&BitString, &BitString) -> BitString) -> u64 {
    let mut worst = 0;
    for a in 0..1u64 << n {
        for b in 0..a {
            let (x1, x2) = (common::bits_of(a, n), common::bits_of(b, n));
            let c = (0..1u64 << d)
                .filter(|&yv| {
                    let y = common::bits_of(yv, d);
                    f(&x1, &y) == f(&x2, &y)
                })
                .count() as u64;
            worst = worst.max(c);
        }
    }
    worst
}

#[test]
fn two_universal_at_small_sizes() {
    for (n, m) in [(4, 2), (5, 2), (4, 3), (6, 3)] {
        let tz = ToeplitzExtractor::new(n, m).unwrap();
        let d = n + m - 1;
        assert!(max_collisions(n, d, |x, y| tz.extract_naive(x, y).unwrap()) << m <= 1 << d);
        let mt = ModifiedToeplitzExtractor::new(n, m).unwrap();
        assert!(
            max_collisions(n, n - 1, |x, y| mt.extract_naive(x, y).unwrap()) << m <= 1 << (n - 1)
        );
    }
}

#[test]
fn length_reference_values() {
    assert_eq!(
        calculate_length(SecurityModel::Quantum, 8 << 20, 0.5, 1e-6).unwrap(),
        4194266
    );
    assert_eq!(
        calculate_length(SecurityModel::Classical, 8 << 20, 0.5, 1e-6).unwrap(),
        4194266
    );
    assert_eq!(
        calculate_length(SecurityModel::Quantum, 10, 1.0, 0.5).unwrap(),
        10
    );
    assert_eq!(
        calculate_length(SecurityModel::Quantum, 4, 1.0, 1e-6).unwrap(),
        0
    );
}

fn bits(len: usize) -> impl Strategy<Value = BitString> {
    proptest::collection::vec(any::<bool>(), len).prop_map(BitString::from_bits)
}

fn sized() -> impl Strategy<Value = (usize, usize)> {
    (2usize..600).prop_flat_map(|n| (Just(n), 1..n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn toeplitz_paths_agree((n, m) in sized(), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let tz = ToeplitzExtractor::new(n, m).unwrap();
        let x = BitString::random(&mut rng, n);
        let y = BitString::random(&mut rng, n + m - 1);
        let naive = tz.extract_naive(&x, &y).unwrap();
        prop_assert_eq!(tz.extract_fft(&x, &y).unwrap(), naive.clone());
        prop_assert_eq!(common::from_vec(&common::toeplitz(&common::to_vec(&x), &common::to_vec(&y), m)), naive);
    }

    #[test]
    fn modified_paths_agree((n, m) in sized(), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mt = ModifiedToeplitzExtractor::new(n, m).unwrap();
        let x = BitString::random(&mut rng, n);
        let y = BitString::random(&mut rng, n - 1);
        let naive = mt.extract_naive(&x, &y).unwrap();
        prop_assert_eq!(mt.extract_fft(&x, &y).unwrap(), naive.clone());
        prop_assert_eq!(
            common::from_vec(&common::modified_toeplitz(&common::to_vec(&x), &common::to_vec(&y), m)),
            naive
        );
    }

    #[test]
    fn linear_in_the_input(x1 in bits(40), x2 in bits(40), y in bits(59)) {
        let tz = ToeplitzExtractor::new(40, 20).unwrap();
        let sum = &tz.extract_fft(&x1, &y).unwrap() ^ &tz.extract_fft(&x2, &y).unwrap();
        prop_assert_eq!(tz.extract_fft(&(&x1 ^ &x2), &y).unwrap(), sum);
    }

    #[test]
    fn length_is_monotone(n in 1usize..1_000_000, r1 in 0.01f64..1.0, r2 in 0.01f64..1.0, e in 1e-12f64..0.9) {
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let a = calculate_length(SecurityModel::Quantum, n, lo, e).unwrap();
        let b = calculate_length(SecurityModel::Quantum, n, hi, e).unwrap();
        prop_assert!(a <= b && b <= n);
    }
}
