use hamming_qwalk::classical_walk::{
    brute_force_markov, eigenvalues, spectral_transition, WalkWeights,
};
use hamming_qwalk::quantum_walk_engine::{
    fourier_forward, fourier_inverse, fourier_step, initial_state, position_distribution,
    step_bruteforce, EnginePath, Walk,
};
use hamming_qwalk::unit_circle_spectrum::{build_poly, rho_lower, roots, spectral_coefficients};
use hamming_qwalk::{HammingParams, KrawtchoukTable};
use num_complex::Complex64;
use proptest::prelude::*;

fn small_shape() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![
        Just((2, 2)),
        Just((3, 2)),
        Just((4, 2)),
        Just((2, 3)),
        Just((3, 3)),
        Just((2, 5))
    ]
}

fn custom_walk() -> impl Strategy<Value = WalkWeights> {
    small_shape().prop_flat_map(|(d, n)| {
        prop::collection::vec(0.0f64..1.0, d + 1).prop_filter_map("all-zero weights", move |raw| {
            let total: f64 = raw.iter().sum();
            if total < 1e-3 {
                return None;
            }
            let w = raw.iter().map(|x| x / total).collect();
            WalkWeights::from_values(HammingParams::new(d, n).ok()?, w).ok()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classical_spectral_matches_iteration(weights in custom_walk(), t in 0usize..20) {
        let table = KrawtchoukTable::new(*weights.params()).unwrap();
        let spec = eigenvalues(&weights, &table);
        let dist = spectral_transition(&spec, t, &table);
        let oracle = brute_force_markov(&weights, t).unwrap();
        prop_assert!(dist.max_abs_diff(&oracle) < 1e-12);
        prop_assert!((dist.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quantum_paths_agree_and_conserve(weights in custom_walk(), t in 1usize..16) {
        let walk = Walk::new(weights).unwrap();
        let mut brute = initial_state(&walk);
        let mut field = fourier_forward(&walk, &brute).unwrap();
        for _ in 0..t {
            brute = step_bruteforce(&walk, &brute).unwrap();
            field = fourier_step(&walk, &field);
        }
        prop_assert!((brute.norm_sq() - 1.0).abs() < 1e-12);
        prop_assert!(fourier_inverse(&walk, &field).unwrap().max_abs_diff(&brute) < 1e-10);
        let (auto, _) = walk.wave_vector(t, EnginePath::Auto).unwrap();
        prop_assert!(auto.max_abs_diff(&brute) < 1e-9);

        let dist = position_distribution(&brute);
        prop_assert!((dist.total() - 1.0).abs() < 1e-12);
        let space = walk.space();
        let (means, _) = dist.class_means(space);
        for (x, p) in dist.p.iter().enumerate() {
            prop_assert!((p - means[space.weight(x)]).abs() < 1e-12);
        }
    }

    #[test]
    fn mode_zeros_on_circle(n in prop::sample::select(vec![2usize, 3, 5, 7, 11]), u in 0.0f64..=1.0) {
        let rho = rho_lower(n) + (1.0 - rho_lower(n)) * u;
        let poly = build_poly(rho, n).unwrap();
        let zs = roots(&poly).unwrap();
        prop_assert_eq!(zs.len(), n);
        for z in &zs {
            prop_assert!((z.norm() - 1.0).abs() < 1e-12);
            prop_assert!(poly.eval(*z).norm() < 1e-9);
        }
        if u > 1e-6 && u < 1.0 - 1e-6 {
            let c = spectral_coefficients(&zs, rho, n).unwrap();
            let sum: Complex64 = c.iter().sum();
            prop_assert!((sum - 1.0).norm() < 1e-9);
        }
    }
}
