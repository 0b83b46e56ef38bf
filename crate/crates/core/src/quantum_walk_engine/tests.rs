use super::*;
use crate::classical_walk::WalkKind;
use crate::unit_circle_spectrum::rho_lower;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn walk(kind: WalkKind, d: usize, n: usize) -> Walk {
    Walk::from_kind(&kind, HammingParams::new(d, n).unwrap()).unwrap()
}

fn bruteforce(w: &Walk, t: usize) -> Vec<WaveVector> {
    let mut out = vec![initial_state(w)];
    for _ in 0..t {
        let next = step_bruteforce(w, out.last().unwrap()).unwrap();
        out.push(next);
    }
    out
}

fn random_state(w: &Walk, seed: u64) -> WaveVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = w.size();
    let psi = (0..size * size)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    WaveVector { t: 0, size, psi }
}

#[test]
fn coin_is_normalized_and_orthogonal() {
    for (kind, d, n) in [
        (WalkKind::Simple, 3, 2),
        (WalkKind::Mixture { alpha: 0.3 }, 2, 3),
        (WalkKind::Independent, 2, 5),
    ] {
        let w = walk(kind, d, n);
        assert!((w.coin().norm_sq() - 1.0).abs() < 1e-12);
        assert!(w.coin().orthogonality_defect().unwrap() < 1e-10);
    }
}

#[test]
fn non_prime_rejected() {
    let r = Walk::from_kind(&WalkKind::Simple, HammingParams::new(2, 4).unwrap());
    assert!(matches!(r, Err(QwError::NotPrime(4))));
}

#[test]
fn initial_state_examples() {
    let w = walk(WalkKind::Simple, 3, 3);
    let s = initial_state(&w);
    assert!((s.norm_sq() - 1.0).abs() < 1e-14);
    let kappa1 = 6.0f64;
    for y in 0..w.size() {
        let expect = if w.space().weight(y) == 1 {
            kappa1.sqrt().recip()
        } else {
            0.0
        };
        assert!((s.get(y, 0).re - expect).abs() < 1e-15);
    }
    let p0 = position_distribution(&s);
    assert!((p0.p[0] - 1.0).abs() < 1e-15);
    assert_eq!(p0.p[1..].iter().sum::<f64>(), 0.0);
}

#[test]
fn one_step_gives_transition_law() {
    let w = walk(WalkKind::Mixture { alpha: 0.3 }, 2, 3);
    let s1 = step_bruteforce(&w, &initial_state(&w)).unwrap();
    let p1 = position_distribution(&s1);
    for x in 0..w.size() {
        let expect = w
            .coin()
            .weights()
            .vertex_prob(w.table(), w.space().weight(x));
        assert!((p1.p[x] - expect).abs() < 1e-14);
    }
    for y in 0..w.size() {
        for x in 0..w.size() {
            let expect = if x == w.space().neg(y) {
                w.coin().p()[y]
            } else {
                0.0
            };
            assert!((s1.get(y, x).re - expect).abs() < 1e-14);
        }
    }
}

#[test]
fn fourier_round_trip_and_initial_modes() {
    let w = walk(WalkKind::Simple, 2, 3);
    let s = random_state(&w, 7);
    let back = fourier_inverse(&w, &fourier_forward(&w, &s).unwrap()).unwrap();
    assert!(back.max_abs_diff(&s) < 1e-12);
    let f0 = fourier_forward(&w, &initial_state(&w)).unwrap();
    let scale = 1.0 / 3.0;
    for y in 0..w.size() {
        for xi in 0..w.size() {
            assert!((f0.get(y, xi) - Complex64::new(w.coin().p()[y] * scale, 0.0)).norm() < 1e-14);
        }
    }
}

#[test]
fn fourier_step_commutes_with_evolution() {
    let w = walk(WalkKind::Mixture { alpha: 0.7 }, 2, 3);
    let s = random_state(&w, 11);
    let a = fourier_forward(&w, &step_bruteforce(&w, &s).unwrap()).unwrap();
    let b = fourier_step(&w, &fourier_forward(&w, &s).unwrap());
    assert!(a.max_abs_diff(&b) < 1e-10);
    let f = fourier_forward(&w, &s).unwrap();
    for xi in 0..w.size() {
        assert!((f.mode_norm_sq(xi) - b.mode_norm_sq(xi)).abs() < 1e-10);
    }
}

#[test]
fn zero_mode_is_constant() {
    let w = walk(WalkKind::Simple, 3, 2);
    let mut f = fourier_forward(&w, &initial_state(&w)).unwrap();
    let start: Vec<_> = (0..w.size()).map(|y| f.get(y, 0)).collect();
    for _ in 0..9 {
        f = fourier_step(&w, &f);
    }
    for y in 0..w.size() {
        assert!((f.get(y, 0) - start[y]).norm() < 1e-13);
    }
}

#[test]
fn mode_closed_form_matches_iteration() {
    for (kind, d, n) in [
        (WalkKind::Mixture { alpha: 0.3 }, 2, 3),
        (WalkKind::Independent, 3, 3),
        (WalkKind::Mixture { alpha: 0.6 }, 2, 5),
    ] {
        let w = walk(kind, d, n);
        let modes = w.mode_spectra().unwrap();
        let mut f = fourier_forward(&w, &initial_state(&w)).unwrap();
        for t in 0..=50 {
            if t > 0 {
                f = fourier_step(&w, &f);
            }
            for xi in 1..w.size() {
                let spec = &modes[w.space().weight(xi) - 1];
                for y in 0..w.size() {
                    let v = mode_closed_form(&w, spec, y, xi, t).unwrap();
                    assert!((v - f.get(y, xi)).norm() < 1e-9, "t={t} xi={xi} y={y}");
                }
            }
        }
    }
}

#[test]
fn mode_closed_form_rejects_boundary() {
    let w = walk(WalkKind::Simple, 2, 3);
    let modes = w.mode_spectra().unwrap();
    assert!((modes[1].rho - rho_lower(3)).abs() < 1e-15);
    let xi = w.size() - 1;
    assert!(mode_closed_form(&w, &modes[1], 1, xi, 3).is_err());
}

#[test]
fn n2_closed_form_specializations() {
    // The n = 2 closed form agrees with the mode bracket built from c = (1/2, 1/2).
    let w = walk(WalkKind::Mixture { alpha: 0.2 }, 3, 2);
    let modes = w.mode_spectra().unwrap();
    let f = {
        let mut f = fourier_forward(&w, &initial_state(&w)).unwrap();
        for _ in 0..6 {
            f = fourier_step(&w, &f);
        }
        f
    };
    for xi in 1..w.size() {
        for y in 0..w.size() {
            let v = mode_closed_form(&w, &modes[w.space().weight(xi) - 1], y, xi, 6).unwrap();
            assert!((v - f.get(y, xi)).norm() < 1e-12);
        }
    }
}

#[test]
fn spectral_n2_matches_bruteforce() {
    for (kind, d) in [
        (WalkKind::Simple, 2),
        (WalkKind::Simple, 3),
        (WalkKind::Independent, 3),
        (WalkKind::NonLocal { m: 2 }, 3),
        (WalkKind::NonLocal { m: 2 }, 4),
        (WalkKind::Mixture { alpha: 0.3 }, 4),
    ] {
        let w = walk(kind.clone(), d, 2);
        let traj = bruteforce(&w, 20);
        for (t, s) in traj.iter().enumerate() {
            let c = wave_spectral_n2(&w, t).unwrap();
            assert!(c.max_abs_diff(s) < 1e-10, "{kind:?} d={d} t={t}");
        }
    }
}

#[test]
fn simple_n2_periodic_class_term() {
    // ρ_d = -1 contributes (-1)^{t+|x|} / 2^d to the wave vector.
    let w = walk(WalkKind::Simple, 3, 2);
    let table = spectral_table_n2(&w, 5);
    let (g0, g1) = (table.get(3, 0), table.get(3, 1));
    assert_eq!((g0.re, g1.re), (4.0, 5.0));
    for y in [1, 2, 4] {
        let x = 5;
        let (h, h1) = (w.space().weight(x), w.space().weight(w.space().add(x, y)));
        let term = g0 * w.table().kf(3, h) + g1 * w.table().kf(3, h1);
        let sign = if (5 + h) % 2 == 0 { 1.0 } else { -1.0 };
        assert!((term.re - sign).abs() < 1e-12);
    }
}

#[test]
fn spectral_general_matches_bruteforce() {
    for (kind, d, n) in [
        (WalkKind::Mixture { alpha: 0.3 }, 2, 3),
        (WalkKind::Independent, 2, 3),
        (WalkKind::Independent, 2, 5),
    ] {
        let w = walk(kind.clone(), d, n);
        let traj = bruteforce(&w, 30);
        for (t, s) in traj.iter().enumerate() {
            let c = wave_spectral_general(&w, t).unwrap();
            assert!(c.max_abs_diff(s) < 1e-9, "{kind:?} t={t}");
        }
    }
}

#[test]
fn independent_general_wave_closed_form() {
    // ψ_{y,x}(t) = p_y n^{-d} Σ_{k,l} η^{lk}/n {1 + (n^d δ_{|x⊕ly|,0} - 1) B_k(t)}
    // with B_k(t) = (-η^{-k})^t (1 - Σ_i 2/(n(1+η^k μ_i))) + Σ_i 2μ_i^t/(n(1+η^k μ_i)),
    // μ_i = η^i: the independent walk has ρ_j = 0, c_i = 1/n.
    let (d, n) = (2usize, 3usize);
    let w = walk(WalkKind::Independent, d, n);
    let eta = w.roots_of_unity();
    let size = w.size() as f64;
    for t in [0usize, 1, 2, 7] {
        let s = wave_spectral_general(&w, t).unwrap();
        for y in [0usize, 1, 4, 8] {
            for x in 0..w.size() {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let ek = eta.pow(k as i64);
                    let mut transient = Complex64::new(1.0, 0.0);
                    let mut stat = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        let mu = eta.pow(i as i64);
                        let wgt = 2.0 / (n as f64 * (Complex64::new(1.0, 0.0) + ek * mu));
                        transient -= wgt;
                        stat += wgt * mu.powu(t as u32);
                    }
                    let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
                    let b = eta.pow(-((k * t) as i64)) * sign * transient + stat;
                    for l in 0..n {
                        let delta = if w.space().scaled_add(x, l, y) == 0 {
                            size
                        } else {
                            0.0
                        };
                        acc += eta.pow((l * k) as i64) / n as f64 * (b * (delta - 1.0) + 1.0);
                    }
                }
                let expect = acc * w.coin().p()[y] / size;
                assert!((s.get(y, x) - expect).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn reduced_recursion_matches_bruteforce() {
    for (kind, d, n) in [
        (WalkKind::Simple, 2, 3),
        (WalkKind::Simple, 3, 2),
        (WalkKind::NonLocal { m: 2 }, 2, 3),
        (WalkKind::Simple, 2, 5),
    ] {
        let w = walk(kind.clone(), d, n);
        let traj = bruteforce(&w, 25);
        let mut rec = ModeRecursion::new(&w);
        for (t, s) in traj.iter().enumerate() {
            if t > 0 {
                rec.step();
            }
            let c = wave_from_table(&w, &rec.table());
            assert!(c.max_abs_diff(s) < 1e-10, "{kind:?} n={n} t={t}");
        }
    }
}

#[test]
fn engine_auto_falls_back_on_boundary() {
    let w = walk(WalkKind::Simple, 2, 3);
    let (s, report) = w.wave_vector(8, EnginePath::Auto).unwrap();
    assert_eq!(report.taken, EnginePath::Fourier);
    assert!(report.fallback.is_some());
    let (b, _) = w.wave_vector(8, EnginePath::Bruteforce).unwrap();
    assert!(s.max_abs_diff(&b) < 1e-10);

    let w = walk(WalkKind::Mixture { alpha: 0.3 }, 2, 3);
    let (_, report) = w.wave_vector(8, EnginePath::Spectral).unwrap();
    assert_eq!(report.taken, EnginePath::Spectral);
    assert!(report.fallback.is_none());
}

#[test]
fn class_trajectory_paths_agree() {
    let w = walk(WalkKind::Mixture { alpha: 0.3 }, 2, 3);
    let mut rows = [Vec::new(), Vec::new(), Vec::new()];
    for (i, path) in [
        EnginePath::Bruteforce,
        EnginePath::Fourier,
        EnginePath::Spectral,
    ]
    .into_iter()
    .enumerate()
    {
        w.class_trajectory(15, path, |_, p| rows[i].push(p.to_vec()))
            .unwrap();
    }
    for t in 0..=15 {
        for h in 0..=2 {
            assert!((rows[0][t][h] - rows[1][t][h]).abs() < 1e-12);
            assert!((rows[0][t][h] - rows[2][t][h]).abs() < 1e-10);
        }
    }
}

#[test]
fn position_distribution_is_class_function() {
    let w = walk(WalkKind::NonLocal { m: 2 }, 3, 3);
    let (s, _) = w.wave_vector(9, EnginePath::Bruteforce).unwrap();
    let dist = position_distribution(&s);
    assert!((dist.total() - 1.0).abs() < 1e-12);
    let (_, spread) = dist.class_means(w.space());
    assert!(spread < 1e-12);
}

#[test]
fn unitarity_and_reality_along_trajectory() {
    let w = walk(WalkKind::Mixture { alpha: 0.7 }, 2, 5);
    let mut s = initial_state(&w);
    for _ in 0..100 {
        s = step_bruteforce(&w, &s).unwrap();
        assert!((s.norm_sq() - 1.0).abs() < 1e-10);
        assert!(s.max_imag() < 1e-9);
    }
}

#[test]
fn eigencheck_examples() {
    let w = walk(WalkKind::Simple, 2, 2);
    let r = mode_unitary_eigencheck(&w, 1).unwrap();
    assert_eq!(r.rho, 0.0);
    assert!(r.passed, "{r:?}");
    let i = Complex64::new(0.0, 1.0);
    assert!(r.eigenvalues.iter().any(|e| (e - i).norm() < 1e-8));
    assert!(r.eigenvalues.iter().any(|e| (e + i).norm() < 1e-8));
    assert!(mode_unitary_eigencheck(&w, 0).unwrap().passed);

    let w = walk(WalkKind::Simple, 2, 3);
    let r = mode_unitary_eigencheck(&w, 1).unwrap();
    assert!(r.passed);
    let c = r.rho - 0.5;
    let s = (1.0 - c * c).sqrt();
    for z in [
        Complex64::new(1.0, 0.0),
        Complex64::new(c, s),
        Complex64::new(c, -s),
    ] {
        assert!(r.eigenvalues.iter().any(|e| (e - z).norm() < 1e-8));
    }
}

#[test]
fn engine_path_parse() {
    assert_eq!(
        "spectral".parse::<EnginePath>().unwrap(),
        EnginePath::Spectral
    );
    assert!("fast".parse::<EnginePath>().is_err());
    assert_eq!(
        serde_json::to_string(&EnginePath::Bruteforce).unwrap(),
        "\"bruteforce\""
    );
}

#[test]
fn step_is_deterministic() {
    let w = walk(WalkKind::Independent, 2, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = random_state(&w, rng.random());
    let a = step_bruteforce(&w, &s).unwrap();
    let b = step_bruteforce(&w, &s).unwrap();
    assert_eq!(a, b);
}
