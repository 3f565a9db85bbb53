//! State -> Majorana points -> state reconstruction.

use majgeom::majorana::{majorana_points, normalization_from_overlaps, symmetrize};
use majgeom::sampling::random_state;
use majgeom::{Complex64, NLevelState};
use rand::rngs::StdRng;
use rand::SeedableRng;

const FIDELITY_TOL: f64 = 1e-9;

fn round_trip_fidelity(state: &NLevelState) -> f64 {
    let rep = majorana_points(state).unwrap();
    assert_eq!(rep.points.len(), state.dim() - 1);
    let (back, k) = symmetrize(&rep.points).unwrap();
    assert!((k - rep.k).abs() < 1e-12);
    assert!((normalization_from_overlaps(&rep.points).unwrap() - k).abs() < 1e-9 * k.max(1.0));
    back.fidelity(state).powi(2)
}

#[test]
fn random_qutrits() {
    let mut rng = StdRng::seed_from_u64(201);
    for k in 0..1000 {
        let s = random_state(&mut rng, 3);
        let f = round_trip_fidelity(&s);
        assert!(f >= 1.0 - FIDELITY_TOL, "sample {k}: fidelity {f}");
    }
}

#[test]
fn random_four_and_five_level_states() {
    let mut rng = StdRng::seed_from_u64(202);
    for k in 0..200 {
        let s = random_state(&mut rng, 4 + k % 2);
        let f = round_trip_fidelity(&s);
        assert!(f >= 1.0 - FIDELITY_TOL, "sample {k}: fidelity {f}");
    }
}

/// Vanishing top coefficients put roots at infinity, i.e. points at the
/// south pole.
#[test]
fn roots_at_infinity() {
    let mut rng = StdRng::seed_from_u64(203);
    for k in 0..300 {
        let dim = 3 + k % 3;
        let zeros = 1 + k % (dim - 1);
        let mut c = random_state(&mut rng, dim).coefficients().to_vec();
        for z in c.iter_mut().rev().take(zeros) {
            *z = Complex64::new(0.0, 0.0);
        }
        let s = NLevelState::from_coefficients(c).unwrap();
        let rep = majorana_points(&s).unwrap();
        let south = rep.points.iter().filter(|p| (p.z + 1.0).abs() < 1e-12).count();
        assert!(south >= zeros, "dim {dim}: {south} south-pole points for {zeros} vanishing coefficients");
        let f = round_trip_fidelity(&s);
        assert!(f >= 1.0 - FIDELITY_TOL, "sample {k}: fidelity {f}");
    }
}

#[test]
fn basis_states_of_every_dimension() {
    for dim in 2..=majgeom::MAX_LEVELS {
        for k in 0..dim {
            let s = NLevelState::basis(dim, k).unwrap();
            let f = round_trip_fidelity(&s);
            assert!(f >= 1.0 - 1e-12, "dim {dim} level {k}: fidelity {f}");
        }
    }
}
