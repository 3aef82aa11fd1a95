//! Property tests for the structural invariants of each module.

use fdl_core::bounds::{beta_lower, beta_upper, classical_lower, classical_upper};
use fdl_core::caps::{build_scale_ladder, cap_partition, rescale_phase, v_set_select, Cap, Phase};
use fdl_core::knapp::sum_of_squares_points;
use fdl_core::measure::{make_cantor_measure, make_lattice_measure, make_sphere_measure, LatticeGeometry};
use fdl_core::numerics::sphere_area;
use fdl_core::spectral::{build_sphere_quadrature, decay_scan_with, fourier_transform_measure, ScanMode};
use proptest::prelude::*;

fn cantor() -> impl Strategy<Value = (usize, f64, usize)> {
    (1usize..=3, 0.05f64..0.45, 1usize..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constructed_measures_live_in_the_unit_ball((d, ratio, depth) in cantor(), n in 10usize..400) {
        let mu = make_cantor_measure(d, ratio, depth).unwrap();
        prop_assert!(mu.max_norm() <= 1.0 + 1e-12);
        prop_assert!((mu.total_mass() - 1.0).abs() <= 1e-12);
        prop_assert!(mu.weights().iter().all(|w| *w >= 0.0));
        let s = make_sphere_measure(d.max(2), n).unwrap();
        prop_assert!(s.max_norm() <= 1.0 + 1e-12);
        prop_assert!((s.total_mass() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn lattice_mass_is_the_ball_volume_sum(d in 2usize..=3, big_r in 4.0f64..40.0, kappa in 0.3f64..0.7, eps in 0.1f64..0.9, k in 1usize..4) {
        let mu = make_lattice_measure(d, big_r, kappa, eps, k).unwrap();
        let geo = LatticeGeometry::new(d, big_r, kappa, eps).unwrap();
        let expect = geo.centre_labels().len() as f64 * geo.ball_volume();
        prop_assert!(mu.max_norm() <= 1.0 + 1e-12);
        prop_assert!((mu.total_mass() - expect).abs() <= 1e-12 * expect.max(1.0));
    }

    #[test]
    fn transform_is_conjugate_symmetric((d, ratio, depth) in cantor(), xi in prop::collection::vec(-50.0f64..50.0, 3)) {
        let mu = make_cantor_measure(d, ratio, depth).unwrap();
        let xi = &xi[..d];
        let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
        let a = fourier_transform_measure(&mu, xi).unwrap();
        let b = fourier_transform_measure(&mu, &neg).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-14);
        prop_assert!(a.norm() <= mu.total_mass() * (1.0 + 1e-12));
    }

    #[test]
    fn shell_averages_respect_the_trivial_bound(ratio in 0.05f64..0.45, r0 in 0.5f64..30.0) {
        let mu = make_cantor_measure(2, ratio, 3).unwrap();
        let quad = build_sphere_quadrature(2, 64, 0).unwrap();
        let grid = [r0, 2.0 * r0, 4.0 * r0];
        for mode in [ScanMode::Pointwise, ScanMode::band_default()] {
            let c = decay_scan_with(&mu, &grid, &quad, mode).unwrap();
            prop_assert!(c.sigma.iter().all(|s| *s <= sphere_area(2) * (1.0 + 1e-9)));
        }
    }

    #[test]
    fn bound_tables_are_continuous_and_ordered(d in 2usize..=10, t in 0.001f64..1.0) {
        for p in [classical_upper(d), classical_lower(d)] {
            if d == 2 && p.pieces.is_empty() {
                continue;
            }
            prop_assert!(p.covers_without_gaps());
            prop_assert!(p.continuity_defect() <= 1e-12);
        }
        let alpha = t * d as f64;
        let lo = beta_lower(d, alpha).unwrap().value;
        let hi = beta_upper(d, alpha).unwrap().value;
        prop_assert!(lo <= hi + 1e-12, "lower {} above upper {}", lo, hi);
    }

    #[test]
    fn lower_bound_is_monotone_in_alpha(d in 2usize..=10, a in 0.001f64..1.0, b in 0.001f64..1.0) {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let df = d as f64;
        prop_assert!(beta_lower(d, a * df).unwrap().value <= beta_lower(d, b * df).unwrap().value + 1e-12);
    }

    #[test]
    fn cap_partition_tiles_the_parent(cx in -0.15f64..0.15, cy in -0.15f64..0.15, delta in 0.05f64..0.4, k in 1.0f64..9.0,
                                      u in prop::collection::vec(0.0f64..1.0, 40)) {
        let cap = Cap::new(Phase::paraboloid(), &[cx, cy], delta).unwrap();
        let (kids, kk) = cap_partition(&cap, k).unwrap();
        prop_assert_eq!(kids.len() as u64, kk * kk);
        let lo = cap.lo();
        for pair in u.chunks(2) {
            let p = [lo[0] + pair[0] * delta, lo[1] + pair[1] * delta];
            prop_assert_eq!(kids.iter().filter(|c| c.contains(&p)).count(), 1);
        }
    }

    #[test]
    fn enlarging_v_keeps_selected_children(theta in 0.0f64..std::f64::consts::PI, k_next in 2.0f64..20.0) {
        let cap = Cap::new(Phase::paraboloid(), &[0.0, 0.0], 0.5).unwrap();
        let (kids, _) = cap_partition(&cap, 4.0).unwrap();
        let e1 = vec![theta.cos(), theta.sin(), 0.0];
        let e2 = vec![0.0, 0.0, 1.0];
        let small = v_set_select(&cap, &kids, std::slice::from_ref(&e1), k_next).unwrap();
        let large = v_set_select(&cap, &kids, &[e1, e2], k_next).unwrap();
        for c in &small {
            prop_assert!(large.contains(c));
        }
    }

    #[test]
    fn paraboloid_survives_composed_rescalings(steps in prop::collection::vec((-0.3f64..0.3, -0.3f64..0.3, 0.05f64..1.0), 1..4),
                                               x in -0.5f64..0.5, y in -0.5f64..0.5) {
        let base = Phase::paraboloid();
        let mut p = base.clone();
        for (a, b, delta) in steps {
            p = rescale_phase(&p, &[a, b], delta).unwrap();
        }
        prop_assert!((p.value(&[x, y]) - base.value(&[x, y])).abs() <= 1e-12);
    }

    #[test]
    fn built_ladders_are_monotone(d in 2usize..=6, log_r in 2.0f64..60.0, t in 0.01f64..0.99) {
        let eps = t / (4.0 * d as f64);
        let big_r = 10f64.powf(log_r);
        let l = build_scale_ladder(big_r, eps, d).unwrap();
        prop_assert!(l.is_strictly_increasing());
        prop_assert!(l.log_k(d + 1) < eps * big_r.ln());
        prop_assert!(l.k(d + 1) <= big_r.powf(eps));
    }

    #[test]
    fn lattice_sphere_sets_are_symmetric(d in 2usize..=4, n2 in 1u64..60) {
        let set = sum_of_squares_points(d, n2).unwrap();
        prop_assert!(set.is_symmetry_closed());
    }
}
