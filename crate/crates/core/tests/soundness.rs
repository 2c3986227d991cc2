mod common;

use proptest::prelude::*;

use entcert::bell::{bell_operator, evaluate, spectral_gap};
use entcert::bounds::{coherent_info_lower, entropy_upper, gme_lower, ree_lower};
use entcert::fidelity::{fhat, FidelityOptions};
use entcert::purity::{a1_from_profile, a1_from_spectrum, NondegeneracyProfile};
use entcert::quantum::correlation_from_state;

use common::{eigh, entropy_bits, exact_quantities, random_instance, soundness_margins};

const MARGIN: f64 = -1e-8;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pipeline_composition(seed in any::<u64>()) {
        for (name, m) in soundness_margins(seed) {
            prop_assert!(m >= MARGIN, "{name}: margin {m}");
        }
    }

    #[test]
    fn spectral_a1_below_top_eigenvalue(seed in any::<u64>()) {
        let inst = random_instance(seed);
        let c = correlation_from_state(&inst.rho, &inst.settings).unwrap();
        let gap = spectral_gap(&inst.functional, &inst.settings).unwrap();
        let cert = a1_from_spectrum(evaluate(&inst.functional, &c).unwrap(), gap).unwrap();
        prop_assert!(cert.a1 <= inst.rho.max_eigenvalue() + 1e-8);
    }

    #[test]
    fn profile_a1_below_top_eigenvalue(seed in any::<u64>()) {
        let inst = random_instance(seed);
        let f = &inst.functional;
        let c = correlation_from_state(&inst.rho, &inst.settings).unwrap();
        let gap = spectral_gap(f, &inst.settings).unwrap();
        // a profile valid for these particular settings
        let p = NondegeneracyProfile::from_spectral_gap(
            f.name(), inst.rho.dims().dims().to_vec(), gap.lambda1, gap, &[0.0, 0.01, 0.05, 0.1, 0.3],
        ).unwrap();
        let observed = evaluate(f, &c).unwrap();
        if let Some(cert) = a1_from_profile(observed, &p).unwrap() {
            prop_assert!(cert.a1 <= inst.rho.max_eigenvalue() + 1e-8);
        }
    }

    #[test]
    fn bounds_on_exact_inputs(seed in any::<u64>()) {
        // feed the formulas the exact a1 and a valid F̂; they must stay sound
        let inst = random_instance(seed);
        let c = correlation_from_state(&inst.rho, &inst.settings).unwrap();
        let f = fhat(&c, &FidelityOptions::default()).unwrap().value;
        let a1 = inst.rho.max_eigenvalue();
        let ex = exact_quantities(&inst.rho, seed);
        let dims = inst.rho.dims();
        prop_assert!(gme_lower(a1, f).unwrap() <= ex.gme_upper + 1e-8);
        let s_up = entropy_upper(a1, dims.total()).unwrap();
        prop_assert!(ree_lower(f, s_up).unwrap() <= ex.ree_upper.unwrap_or(f64::INFINITY) + 1e-8);
        if let Some(ic) = ex.coherent_info {
            let rank = dims.dims()[0].min(dims.dims()[1]);
            prop_assert!(coherent_info_lower(a1, f, dims.total(), rank).unwrap() <= ic + 1e-8);
        }
    }

    #[test]
    fn entropy_upper_is_sound(seed in any::<u64>(), rank in 1usize..9) {
        let mut rng = entcert::random::seeded(seed);
        let dims = entcert::quantum::DimensionVector::new(vec![3, 3]).unwrap();
        let rho = entcert::random::random_density(&dims, rank, &mut rng);
        let s = entropy_bits(rho.matrix());
        prop_assert!(s <= entropy_upper(rho.max_eigenvalue(), 9).unwrap() + 1e-9);
        // any a1 below the true top eigenvalue keeps the bound valid
        let lower = rho.max_eigenvalue() * 0.8;
        if lower >= 1.0 / 9.0 {
            prop_assert!(s <= entropy_upper(lower, 9).unwrap() + 1e-9);
        }
    }

    #[test]
    fn trace_with_bell_operator_is_evaluate(seed in any::<u64>()) {
        let inst = random_instance(seed);
        let c = correlation_from_state(&inst.rho, &inst.settings).unwrap();
        let b = bell_operator(&inst.functional, &inst.settings).unwrap();
        let tr = (b * inst.rho.matrix()).trace().re;
        prop_assert!((tr - evaluate(&inst.functional, &c).unwrap()).abs() < 1e-10);
        let top = eigh(&bell_operator(&inst.functional, &inst.settings).unwrap())[0].0;
        prop_assert!(tr <= top + 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fhat_above_product_fidelity(seed in any::<u64>()) {
        let inst = random_instance(seed);
        let c = correlation_from_state(&inst.rho, &inst.settings).unwrap();
        let f = fhat(&c, &FidelityOptions { seed, ..Default::default() }).unwrap();
        let ex = exact_quantities(&inst.rho, seed);
        prop_assert!(f.value >= ex.sqrt_product_fidelity - 1e-8, "{} < {}", f.value, ex.sqrt_product_fidelity);
    }
}
