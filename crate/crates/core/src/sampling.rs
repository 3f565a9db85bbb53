//! Random states and operators for randomized checks.
//!
//! States are Haar-distributed (normalized complex Gaussian vectors), Bloch
//! vectors uniform on the sphere.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::bloch::bloch_to_qubit;
use crate::nlevel_values::GellMannDirection;
use crate::numerics::CMatrix;
use crate::{BlochVector, NLevelState, QubitState};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

pub fn random_bloch<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    loop {
        let (x, y, z) = (gaussian(rng), gaussian(rng), gaussian(rng));
        if let Ok(v) = BlochVector::normalized(x, y, z) {
            return v;
        }
    }
}

pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> QubitState {
    bloch_to_qubit(&random_bloch(rng))
}

pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> NLevelState {
    loop {
        let c: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        if let Ok(s) = NLevelState::from_coefficients(c) {
            return s;
        }
    }
}

pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)
}

/// Hermitian matrix `(G + G^dagger) / 2` with complex Gaussian `G`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    (&g + g.adjoint()).map(|z| z * 0.5)
}

/// Haar unitary from the QR decomposition of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMatrix::from_diagonal(&r.diagonal().map(|d| if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) }));
    q * phases
}

/// `V diag(1, 0, -1) V^dagger` for Haar `V`: traceless, `Tr A^2 = 2`, `det A = 0`.
pub fn random_spin1_operator<R: Rng + ?Sized>(rng: &mut R) -> CMatrix {
    let v = random_unitary(rng, 3);
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(-1.0, 0.0),
    ]));
    let a = &v * d * v.adjoint();
    (&a + a.adjoint()).map(|z| z * 0.5)
}

/// Uniformly distributed unit direction in the eight-dimensional Gell-Mann
/// space.
pub fn random_gell_mann_direction<R: Rng + ?Sized>(rng: &mut R) -> GellMannDirection {
    loop {
        let raw: [f64; 8] = std::array::from_fn(|_| gaussian(rng));
        let n = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            if let Ok(d) = GellMannDirection::new(raw.map(|x| x / n)) {
                return d;
            }
        }
    }
}

/// Gell-Mann direction whose operator has spectrum `{-1, 0, 1}`.
pub fn random_spin1_direction<R: Rng + ?Sized>(rng: &mut R) -> GellMannDirection {
    let a = random_spin1_operator(rng);
    GellMannDirection::from_operator(&a).expect("spin-1 operator is a unit Gell-Mann direction")
}
