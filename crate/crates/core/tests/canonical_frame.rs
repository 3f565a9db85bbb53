use majgeom::canonical::{
    build_u1, build_u2, canonical_final_state, canonical_final_vector, canonicalize_triple, extract_params,
    strip_gauge, three_box_transform,
};
use majgeom::majorana::{discriminant_degeneracy, majorana_points};
use majgeom::nlevel_values::{coherent_point, projector, weak_value_direct};
use majgeom::numerics::unitarity_residual;
use majgeom::sampling::random_state;
use majgeom::{BlochVector, NLevelState};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn phase_free_distance(a: &NLevelState, b: &[f64; 3]) -> f64 {
    let c = strip_gauge(a.coefficients());
    c.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn params_reconstruct_random_states() {
    let mut rng = StdRng::seed_from_u64(401);
    for _ in 0..1000 {
        let s = random_state(&mut rng, 3);
        let p = extract_params(&s).unwrap();
        assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&p.theta));
        assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&p.epsilon));
        assert!(1.0 - p.state().unwrap().fidelity(&s) < 1e-10);
    }
}

#[test]
fn u1_maps_random_projector_states_to_north() {
    let mut rng = StdRng::seed_from_u64(402);
    let north = NLevelState::basis(3, 2).unwrap();
    for _ in 0..1000 {
        let r = random_state(&mut rng, 3);
        let u1 = build_u1(&r).unwrap();
        assert!(unitarity_residual(&u1) <= 1e-10);
        assert!(1.0 - r.transformed(&u1).unwrap().fidelity(&north) <= 1e-10);
    }
}

#[test]
fn u2_brings_random_final_states_to_product_form() {
    let mut rng = StdRng::seed_from_u64(403);
    for _ in 0..1000 {
        let f = random_state(&mut rng, 3);
        let p = extract_params(&f).unwrap();
        let u2 = build_u2(&f).unwrap();
        assert!(unitarity_residual(&u2) <= 1e-10);
        let north = NLevelState::basis(3, 2).unwrap();
        assert!(1.0 - north.transformed(&u2).unwrap().fidelity(&north) <= 1e-12);
        let g = f.transformed(&u2).unwrap();
        assert!(phase_free_distance(&g, &canonical_final_state(p.theta)) <= 1e-9);
        assert!(discriminant_degeneracy(&g).unwrap() <= 1e-9);
    }
}

#[test]
fn triples_canonicalize_and_preserve_weak_values() {
    let mut rng = StdRng::seed_from_u64(404);
    for _ in 0..500 {
        let (i, r, f) = (random_state(&mut rng, 3), random_state(&mut rng, 3), random_state(&mut rng, 3));
        let t = canonicalize_triple(&i, &r, &f).unwrap();
        assert!(unitarity_residual(&t.u_total) <= 1e-10);
        assert!(discriminant_degeneracy(&t.psi_r).unwrap() <= 1e-9);
        assert!(discriminant_degeneracy(&t.psi_f).unwrap() <= 1e-9);
        for p in majorana_points(&t.psi_r).unwrap().points {
            assert!(p.max_abs_diff(&BlochVector::NORTH) <= 1e-9);
        }
        let fv = coherent_point(&t.psi_f).unwrap();
        assert!(fv.max_abs_diff(&t.f_vec) <= 1e-9);
        assert_eq!(t.f_vec, canonical_final_vector(t.f_params.theta));

        let before = weak_value_direct(&i, &projector(&r), &f).unwrap();
        let after = weak_value_direct(&t.psi_i, &t.transform_operator(&projector(&r)), &t.psi_f).unwrap();
        assert!(before.agrees_with(&after, 1e-10));
    }
}

#[test]
fn trivial_frames() {
    let north = NLevelState::basis(3, 2).unwrap();
    let i = NLevelState::from_real(&[0.3, 0.5, 0.8]).unwrap();
    let t = canonicalize_triple(&i, &north, &north).unwrap();
    assert!(t.r_vec.max_abs_diff(&BlochVector::NORTH) < 1e-15);
    assert!(t.f_vec.max_abs_diff(&BlochVector::NORTH) < 1e-15);

    let e0 = NLevelState::basis(3, 0).unwrap();
    let u1 = build_u1(&e0).unwrap();
    assert!(1.0 - e0.transformed(&u1).unwrap().fidelity(&north) < 1e-15);
}

#[test]
fn three_box_matrices() {
    let (u1, u2) = three_box_transform();
    assert!(unitarity_residual(&u1) <= 1e-12 && unitarity_residual(&u2) <= 1e-12);
    let u = &u2 * &u1;
    let i = NLevelState::from_real(&[1.0, 1.0, 1.0]).unwrap().transformed(&u).unwrap();
    let f = NLevelState::from_real(&[1.0, -1.0, 1.0]).unwrap().transformed(&u).unwrap();
    assert!(coherent_point(&i).unwrap().max_abs_diff(&BlochVector::NORTH) < 1e-12);
    let want = BlochVector { x: 2.0 * 2f64.sqrt() / 3.0, y: 0.0, z: -1.0 / 3.0 };
    assert!(coherent_point(&f).unwrap().max_abs_diff(&want) < 1e-12);
    let box2 = NLevelState::basis(3, 1).unwrap().transformed(&u).unwrap();
    let pts = majorana_points(&box2).unwrap().points;
    let r1 = BlochVector { x: 2f64.sqrt() / 3f64.sqrt(), y: 0.0, z: 1.0 / 3f64.sqrt() };
    assert!(pts[0].max_abs_diff(&r1) < 1e-12 && pts[1].max_abs_diff(&-r1) < 1e-12);
}
