//! Randomized invariants.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;

use qwhydro::asymptotics::{pearcey, phi_prime, saddle_points};
use qwhydro::cli::output::format_value;
use qwhydro::cli::parse_config;
use qwhydro::init::{phase_modulated_state, plane_wave, ModeSpec, ShockInitSpec};
use qwhydro::madelung::{
    currents, hydro_vars, max_signless_distance, phases, phi_minus_gradient, spinor_from_hydro,
    stress_energy_hydro,
};
use qwhydro::schrodinger::{spectral_propagate, Wavefunction};
use qwhydro::spectral::Spectral;
use qwhydro::walk::total_norm;
use qwhydro::{build_walk, step_walk, SpinorField};

fn polar_field(parts: &[(f64, f64)]) -> Vec<Complex64> {
    parts.iter().map(|&(r, p)| Complex64::from_polar(r, p)).collect()
}

/// Random state with component moduli in `[lo, hi]`, on an even lattice.
fn state(lo: f64, hi: f64) -> impl Strategy<Value = SpinorField> {
    (2usize..64).prop_flat_map(move |half| {
        let site = (lo..hi, -PI..PI);
        (
            prop::collection::vec(site.clone(), 2 * half),
            prop::collection::vec(site, 2 * half),
        )
            .prop_map(|(l, r)| SpinorField::new(polar_field(&l), polar_field(&r)).unwrap())
    })
}

fn mode() -> impl Strategy<Value = ModeSpec> {
    (0.1f64..1.0, 1u32..5, -PI..PI).prop_map(|(a, k, p)| ModeSpec::new(a, k, p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn walk_conserves_norm(s in state(0.0, 2.0), theta in 0.01f64..1.5, steps in 1usize..200) {
        let n = s.len();
        let params = build_walk(n, theta * n as f64 / TAU).unwrap();
        let norm0 = total_norm(&s, &params);
        let mut cur = s;
        for _ in 0..steps {
            cur = step_walk(&cur, &params).unwrap();
        }
        prop_assert!((total_norm(&cur, &params) / norm0 - 1.0).abs() <= 1e-12);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn serial_and_parallel_steps_are_identical(s in state(0.0, 2.0), theta in 0.01f64..1.5) {
        let params = build_walk(s.len(), theta * s.len() as f64 / TAU).unwrap();
        let a = qwhydro::walk::step_walk_serial(&s, &params).unwrap();
        let b = qwhydro::walk::step_walk_parallel(&s, &params).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn plane_waves_stay_single_mode(log_n in 3u32..8, q_frac in -0.45f64..0.45, theta in 0.01f64..1.5, steps in 1usize..20) {
        let n = 1usize << log_n;
        let q = (q_frac * n as f64).round() as i64;
        let params = build_walk(n, theta * n as f64 / TAU).unwrap();
        let mut s = plane_wave(&params, q).unwrap();
        for _ in 0..steps {
            s = step_walk(&s, &params).unwrap();
        }
        let spectral = Spectral::new(n);
        for comp in [&s.left, &s.right] {
            let c = spectral.forward(comp);
            let peak = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let idx = q.rem_euclid(n as i64) as usize;
            for (k, z) in c.iter().enumerate() {
                if k != idx {
                    prop_assert!(z.norm() <= 1e-12 * peak, "mode {} of {}", k, n);
                }
            }
        }
    }

    #[test]
    fn update_is_local(s in state(0.0, 2.0), site_frac in 0.0f64..1.0, theta in 0.01f64..1.5) {
        let n = s.len();
        let params = build_walk(n, theta * n as f64 / TAU).unwrap();
        let site = ((site_frac * n as f64) as usize).min(n - 1);
        let mut kicked = s.clone();
        kicked.left[site] += Complex64::new(0.5, -0.25);
        kicked.right[site] += Complex64::new(-0.125, 0.5);
        let (a, b) = (step_walk(&s, &params).unwrap(), step_walk(&kicked, &params).unwrap());
        let neighbours = [(site + 1) % n, (site + n - 1) % n];
        for i in 0..n {
            if !neighbours.contains(&i) {
                prop_assert_eq!(a.left[i], b.left[i]);
                prop_assert_eq!(a.right[i], b.right[i]);
            }
        }
    }

    #[test]
    fn madelung_roundtrip(s in state(0.1, 3.0)) {
        let back = spinor_from_hydro(&currents(&s), &phases(&s)).unwrap();
        prop_assert!(max_signless_distance(&s, &back) <= 1e-12);
    }

    #[test]
    fn current_is_timelike_identity(s in state(0.0, 3.0)) {
        let c = currents(&s);
        for i in 0..s.len() {
            let lhs = c.j0[i] * c.j0[i] - c.j1[i] * c.j1[i];
            let rhs = 4.0 * s.left[i].norm_sqr() * s.right[i].norm_sqr();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + c.j0[i] * c.j0[i]));
        }
    }

    // u⁰² − u¹² cancels to ~ε·(u⁰)², so the rapidity is kept below ~7
    #[test]
    fn velocity_is_normalized(s in state(0.01, 3.0), mass in 0.5f64..50.0) {
        let h = hydro_vars(&currents(&s), &phases(&s), mass);
        for i in (0..s.len()).filter(|&i| h.valid_mask[i]) {
            prop_assert!((h.u0[i] * h.u0[i] - h.u1[i] * h.u1[i] - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn shock_state_has_unit_density_and_symmetric_tensor(
        modes in prop::collection::vec(mode(), 1..4),
        speed in 0.0f64..0.6,
    ) {
        let (n, mass) = (256usize, 20.0);
        let params = build_walk(n, mass).unwrap();
        // Σ a k bounds the peak slope of the profile
        let bound: f64 = modes.iter().map(|m| m.amplitude * m.wavenumber as f64).sum();
        let spec = ShockInitSpec { modes, q_max: speed * mass / bound, mass };
        let s0 = phase_modulated_state(&params, &spec).unwrap();
        for d in s0.density() {
            prop_assert!((d - 1.0).abs() <= 1e-12);
        }
        let s1 = step_walk(&s0, &params).unwrap();
        let s2 = step_walk(&s1, &params).unwrap();
        let h = hydro_vars(&currents(&s1), &phases(&s1), mass);
        let t = stress_energy_hydro(&h, &phi_minus_gradient(&s0, &s1, &s2, params.dt()));
        let scale = t.t00.iter().map(|v| v.abs()).fold(0.0, f64::max);
        prop_assert!(t.max_asymmetry() <= 1e-9 * scale);
    }

    #[test]
    fn free_propagation_composes(
        coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 9),
        mass in 1.0f64..50.0,
        t1 in 0.0f64..2.0,
        t2 in 0.0f64..2.0,
    ) {
        let n = 64;
        let values: Vec<Complex64> = qwhydro::spectral::grid(n)
            .iter()
            .map(|&x| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, &(a, b))| Complex64::new(a, b) * Complex64::from_polar(1.0, (k as f64 - 4.0) * x))
                    .sum()
            })
            .collect();
        let psi = Wavefunction { values, time: 0.0 };
        let once = spectral_propagate(&psi, mass, t1 + t2);
        let twice = spectral_propagate(&spectral_propagate(&psi, mass, t1), mass, t2);
        let scale = psi.values.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for (a, b) in once.values.iter().zip(&twice.values) {
            prop_assert!((a - b).norm() <= 1e-13 * scale);
        }
        prop_assert!((once.norm_sqr() / psi.norm_sqr() - 1.0).abs() <= 1e-13);
    }

    #[test]
    fn saddles_solve_the_cubic(t in -30.0f64..30.0, x in -30.0f64..30.0) {
        for u in saddle_points(t, x) {
            prop_assert!(phi_prime(u, t, x).norm() < 1e-10, "T={} X={} u={}", t, x, u);
        }
    }

    #[test]
    fn pearcey_is_even_in_x(t in -8.0f64..8.0, x in 0.0f64..8.0) {
        let a = pearcey(t, x, 1e-10).unwrap();
        let b = pearcey(t, -x, 1e-10).unwrap();
        prop_assert!((a - b).norm() <= 1e-8);
    }

    #[test]
    fn csv_values_round_trip(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(format_value(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn config_parser_never_panics(text in "(([a-z_.]{0,12} ?= ?[-0-9a-z_.,e ]{0,16})?(#.*)?\n){0,8}") {
        let _ = parse_config(&text);
    }
}
