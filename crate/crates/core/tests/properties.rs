//! Randomized invariants. Each case draws a seed and builds its inputs from a
//! seeded generator.

use majgeom::bloch::{
    quadrangle_closed_form, rodrigues_rotate, solid_angle_quadrangle, solid_angle_triangle,
};
use majgeom::majorana::majorana_points;
use majgeom::nlevel_values::{projector, weak_value_amplitudes, weak_value_direct};
use majgeom::numerics::{cayley_hamilton_exp_spin1, max_abs_diff, unitary_exp};
use majgeom::qubit_values::projector_weak_value_amplitudes;
use majgeom::sampling::{
    random_bloch, random_phase, random_qubit, random_spin1_operator, random_state, random_unitary,
};
use majgeom::{angle_distance, Complex64, NLevelState};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use std::f64::consts::PI;

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn phased(c: &[Complex64], phase: f64) -> Vec<Complex64> {
    c.iter().map(|z| z * Complex64::from_polar(1.0, phase)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn projector_weak_values_sum_to_one(seed in any::<u64>(), dim in 2usize..=6) {
        let mut g = rng(seed);
        let u = random_unitary(&mut g, dim);
        let (i, f) = (random_state(&mut g, dim), random_state(&mut g, dim));
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..dim {
            let col = NLevelState::from_vector(&u.column(k).into_owned()).unwrap();
            sum += weak_value_direct(&i, &projector(&col), &f).unwrap().to_complex();
        }
        prop_assert!((sum - 1.0).norm() <= 1e-10 * (1.0 / i.fidelity(&f)).max(1.0));
    }

    #[test]
    fn weak_values_are_gauge_invariant(seed in any::<u64>(), dim in 2usize..=5) {
        let mut g = rng(seed);
        let (i, r, f) = (random_state(&mut g, dim), random_state(&mut g, dim), random_state(&mut g, dim));
        let a = projector(&r);
        let base = weak_value_amplitudes(i.coefficients(), &a, f.coefficients()).unwrap();
        let moved = weak_value_amplitudes(
            &phased(i.coefficients(), random_phase(&mut g)),
            &a,
            &phased(f.coefficients(), random_phase(&mut g)),
        ).unwrap();
        prop_assert!((base - moved).norm() <= 1e-12 * base.norm().max(1.0) / i.fidelity(&f).max(1e-3));

        let (qi, qr, qf) = (random_qubit(&mut g), random_qubit(&mut g), random_qubit(&mut g));
        let base = projector_weak_value_amplitudes(&qi.amplitudes(), &qr.amplitudes(), &qf.amplitudes()).unwrap();
        let ph = |q: [Complex64; 2], p: f64| [q[0] * Complex64::from_polar(1.0, p), q[1] * Complex64::from_polar(1.0, p)];
        let moved = projector_weak_value_amplitudes(
            &ph(qi.amplitudes(), random_phase(&mut g)),
            &ph(qr.amplitudes(), random_phase(&mut g)),
            &ph(qf.amplitudes(), random_phase(&mut g)),
        ).unwrap();
        prop_assert!((base - moved).norm() <= 1e-12 * base.norm().max(1.0) / qi.inner(&qf).norm().max(1e-3));

        let rephased = NLevelState::from_coefficients(phased(i.coefficients(), random_phase(&mut g))).unwrap();
        let (p, q) = (majorana_points(&i).unwrap(), majorana_points(&rephased).unwrap());
        for (x, y) in p.points.iter().zip(&q.points) {
            prop_assert!(x.max_abs_diff(y) <= 1e-12);
        }
    }

    #[test]
    fn rodrigues_conserves_norm_and_axis_projection(seed in any::<u64>(), alpha in -4.0 * PI..4.0 * PI) {
        let mut g = rng(seed);
        let (i, r) = (random_bloch(&mut g), random_bloch(&mut g));
        let s = rodrigues_rotate(&i, &r, alpha);
        prop_assert!((s.norm() - 1.0).abs() <= 1e-12);
        prop_assert!((s.dot(&r) - i.dot(&r)).abs() <= 1e-12);
        prop_assert!(rodrigues_rotate(&s, &r, -alpha).max_abs_diff(&i) <= 1e-12);
        let full = rodrigues_rotate(&i, &r, alpha + 2.0 * PI);
        prop_assert!(full.max_abs_diff(&s) <= 1e-12);
    }

    #[test]
    fn quadrangle_is_triangle_sum(seed in any::<u64>(), alpha in -2.0 * PI..2.0 * PI) {
        let mut g = rng(seed);
        let (i, r, f) = (random_bloch(&mut g), random_bloch(&mut g), random_bloch(&mut g));
        let s = rodrigues_rotate(&i, &r, alpha);
        let q = solid_angle_quadrangle(&i, &r, &s, &f).unwrap();
        let t = solid_angle_triangle(&i, &r, &s).unwrap() + solid_angle_triangle(&i, &s, &f).unwrap();
        prop_assert!(angle_distance(q, t, 4.0 * PI) <= 1e-12);
        let c = quadrangle_closed_form(&i, &r, alpha, &f).unwrap();
        prop_assert!(angle_distance(q, c, 4.0 * PI) <= 1e-9);

        let (qi, qr, qs, qf) = (
            majgeom::bloch::bloch_to_qubit(&i),
            majgeom::bloch::bloch_to_qubit(&r),
            majgeom::bloch::bloch_to_qubit(&s),
            majgeom::bloch::bloch_to_qubit(&f),
        );
        let bargmann = qi.inner(&qf) * qf.inner(&qs) * qs.inner(&qr) * qr.inner(&qi);
        prop_assume!(bargmann.norm() > 1e-6);
        prop_assert!(angle_distance(-0.5 * q, bargmann.arg(), 2.0 * PI) <= 1e-9);
    }

    #[test]
    fn cayley_hamilton_matches_eigendecomposition(seed in any::<u64>(), alpha in -4.0 * PI..4.0 * PI) {
        let mut g = rng(seed);
        let a = random_spin1_operator(&mut g);
        let ch = cayley_hamilton_exp_spin1(&a, alpha).unwrap();
        let eig = unitary_exp(&a, 0.0, alpha).unwrap();
        prop_assert!(max_abs_diff(&ch, &eig) <= 1e-10);
    }
}
