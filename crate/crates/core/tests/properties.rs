mod common;

use proptest::prelude::*;

use entcert::bell::{cglmp3, evaluate, mabk3, SpectralGap};
use entcert::bounds::gme_lower;
use entcert::fidelity::{fhat, setting_bound_shopm, FidelityOptions, SettingTensor, ShopmOptions};
use entcert::harness::{correlation_json, parse_correlation};
use entcert::purity::a1_from_spectrum;
use entcert::quantum::{correlation_from_state, Correlation, DimensionVector, MeasurementSet};
use entcert::random::{random_density, random_measurement_set, seeded};

fn random_correlation(seed: u64, dims: Vec<usize>, inputs: Vec<usize>) -> Correlation {
    let mut rng = seeded(seed);
    let dims = DimensionVector::new(dims).unwrap();
    let m = random_measurement_set(&dims, &inputs, &mut rng);
    let rho = random_density(&dims, 2, &mut rng);
    correlation_from_state(&rho, &m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluate_is_linear(s1 in any::<u64>(), s2 in any::<u64>(), w in 0.0f64..=1.0) {
        let f = cglmp3();
        let a = random_correlation(s1, vec![3, 3], vec![2, 2]);
        let b = random_correlation(s2, vec![3, 3], vec![2, 2]);
        let mixed = evaluate(&f, &a.mix(&b, w).unwrap()).unwrap();
        let split = w * evaluate(&f, &a).unwrap() + (1.0 - w) * evaluate(&f, &b).unwrap();
        prop_assert!((mixed - split).abs() < 1e-12);
    }

    #[test]
    fn quantum_values_respect_quantum_bound(seed in any::<u64>()) {
        let c = random_correlation(seed, vec![3, 3], vec![2, 2]);
        prop_assert!(evaluate(&cglmp3(), &c).unwrap() <= cglmp3().quantum_bound().value + 1e-9);
        let c = random_correlation(seed, vec![2, 2, 2], vec![2, 2, 2]);
        prop_assert!(evaluate(&mabk3(), &c).unwrap() <= 2.0 + 1e-9);
    }

    #[test]
    fn deterministic_strategies_respect_classical_bound(strategy in proptest::collection::vec(0usize..3, 4)) {
        let dims = DimensionVector::new(vec![3, 3]).unwrap();
        let s = vec![strategy[..2].to_vec(), strategy[2..].to_vec()];
        let c = Correlation::deterministic(dims, vec![3, 3], &s).unwrap();
        prop_assert!(evaluate(&cglmp3(), &c).unwrap() <= 2.0 + 1e-12);
    }

    #[test]
    fn gme_at_unit_purity(f in 0.0f64..1.0) {
        prop_assert!((gme_lower(1.0, f).unwrap() - (1.0 - f * f)).abs() < 1e-9);
    }

    #[test]
    fn gme_monotone(a in 0.05f64..1.0, da in 0.0f64..0.2, f in 0.0f64..1.0, df in 0.0f64..0.2) {
        let a2 = (a + da).min(1.0);
        let f2 = (f + df).min(1.0);
        let g = gme_lower(a, f).unwrap();
        prop_assert!(gme_lower(a2, f).unwrap() >= g - 1e-9, "not non-decreasing in a1");
        prop_assert!(gme_lower(a, f2).unwrap() <= g + 1e-9, "not non-increasing in fhat");
    }

    #[test]
    fn spectral_a1_monotone(i1 in 0.0f64..2.0, di in 0.0f64..1.0) {
        let gap = SpectralGap { lambda1: 3.0, lambda2: 1.0 };
        let lo = a1_from_spectrum(i1, gap).unwrap().a1;
        let hi = a1_from_spectrum((i1 + di).min(3.0), gap).unwrap().a1;
        prop_assert!(hi >= lo);
    }

    #[test]
    fn shopm_beats_feasible_products(seed in any::<u64>(), d1 in 2usize..5, d2 in 2usize..5, d3 in 2usize..5) {
        use rand::Rng;
        let mut rng = seeded(seed);
        let entries: Vec<f64> = (0..d1 * d2 * d3).map(|_| rng.random::<f64>()).collect();
        let t = SettingTensor::new(vec![d1, d2, d3], entries).unwrap();
        let r = setting_bound_shopm(&t, &ShopmOptions { seed, ..Default::default() });
        prop_assert!(r.value <= t.frobenius() + 1e-12);
        for _ in 0..20 {
            let us: Vec<Vec<f64>> = [d1, d2, d3]
                .iter()
                .map(|&d| {
                    let v: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
                    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    v.into_iter().map(|x| x / n).collect()
                })
                .collect();
            prop_assert!(r.value >= t.multilinear(&us) - 1e-12);
        }
    }

    #[test]
    fn correlation_file_round_trip(seed in any::<u64>()) {
        let c = random_correlation(seed, vec![2, 3], vec![2, 3]);
        let text = correlation_json(&c);
        let back = parse_correlation(text.as_bytes(), 1e-9).unwrap().value;
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(correlation_json(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// A table with one more setting for the last party can only lower F̂.
    #[test]
    fn extra_setting_never_raises_fhat(seed in any::<u64>(), tripartite in any::<bool>()) {
        let mut rng = seeded(seed);
        let (dims, inputs) = if tripartite { (vec![2, 2, 2], vec![2, 2, 2]) } else { (vec![3, 3], vec![2, 2]) };
        let dims = DimensionVector::new(dims).unwrap();
        let small = random_measurement_set(&dims, &inputs, &mut rng);
        let mut extended: Vec<Vec<Vec<_>>> = small.operators().to_vec();
        let last = extended.len() - 1;
        let d_last = dims.dims()[last];
        extended[last].push(entcert::random::random_projective(d_last, &mut rng));
        let big = MeasurementSet::new(dims.clone(), extended).unwrap();
        let rho = random_density(&dims, 2, &mut rng);
        let opts = FidelityOptions { seed, ..Default::default() };
        let f_small = fhat(&correlation_from_state(&rho, &small).unwrap(), &opts).unwrap().value;
        let f_big = fhat(&correlation_from_state(&rho, &big).unwrap(), &opts).unwrap().value;
        prop_assert!(f_big <= f_small + 1e-8, "{f_big} > {f_small}");
    }
}
