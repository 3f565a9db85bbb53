//! Two-level weak and modular values.
//!
//! The projector weak value `<f|r><r|i>/<f|i>` has modulus
//! `sqrt((1+f.r)(1+r.i) / (2(1+f.i)))` and argument `-Omega_{irf}/2`.
//! The modular value of `e^{j beta/2} e^{-j (alpha/2) sigma_r}` rotates `i`
//! into `s` about `r`; its modulus is `sqrt((1+f.s)/(1+f.i))` and its argument
//! splits into a dynamical `(beta - alpha)/2` and a geometric `-Omega_{irsf}/2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{rodrigues_rotate, solid_angle_quadrangle, solid_angle_triangle};
use crate::numerics::CMatrix;
use crate::{BlochVector, Error, GeometricBreakdown, PolarComplex, QubitFactor, QubitState, Result, Tolerances};

/// Rotation axis and angles of a qubit modular value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitModularSpec {
    pub r: BlochVector,
    pub alpha: f64,
    pub beta: f64,
}

/// `r . sigma` as a 2x2 matrix.
pub fn sigma(r: &BlochVector) -> CMatrix {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    CMatrix::from_row_slice(2, 2, &[c(r.z, 0.0), c(r.x, -r.y), c(r.x, r.y), c(-r.z, 0.0)])
}

/// `e^{-j (alpha/2) r.sigma} = cos(alpha/2) - j sin(alpha/2) r.sigma`.
pub fn rotation_operator(r: &BlochVector, alpha: f64) -> CMatrix {
    let (s, c) = (0.5 * alpha).sin_cos();
    CMatrix::identity(2, 2).map(|z| z * c) - sigma(r).map(|z| z * Complex64::new(0.0, s))
}

fn check_overlap(overlap: f64) -> Result<()> {
    if overlap <= Tolerances::DEFAULT.orthogonal {
        return Err(Error::OrthogonalSelection { overlap });
    }
    Ok(())
}

fn inner2(a: &[Complex64; 2], b: &[Complex64; 2]) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

/// `<f|r><r|i> / (<f|i><r|r>)` on raw, possibly unnormalized and
/// arbitrarily phased amplitudes.
pub fn projector_weak_value_amplitudes(i: &[Complex64; 2], r: &[Complex64; 2], f: &[Complex64; 2]) -> Result<Complex64> {
    let fi = inner2(f, i);
    let scale = (inner2(f, f).re * inner2(i, i).re).sqrt();
    check_overlap(fi.norm() / scale)?;
    Ok(inner2(f, r) * inner2(r, i) / (fi * inner2(r, r).re))
}

pub fn projector_weak_value_direct(i: &QubitState, r: &QubitState, f: &QubitState) -> Result<PolarComplex> {
    projector_weak_value_amplitudes(&i.amplitudes(), &r.amplitudes(), &f.amplitudes()).map(PolarComplex::from)
}

pub fn projector_weak_value_geometric(
    i: &BlochVector,
    r: &BlochVector,
    f: &BlochVector,
) -> Result<(PolarComplex, GeometricBreakdown)> {
    check_overlap((0.5 * (1.0 + f.dot(i))).max(0.0).sqrt())?;
    let modulus = (0.5 * (1.0 + f.dot(r)) * (1.0 + r.dot(i)) / (1.0 + f.dot(i))).max(0.0).sqrt();
    let omega = solid_angle_triangle(i, r, f)?;
    let breakdown = GeometricBreakdown {
        factors: vec![QubitFactor {
            modulus_ratio: modulus,
            solid_angle: omega,
            i_point: *i,
            r_point: *r,
            s_point: None,
            f_point: *f,
        }],
        dynamical_phase: 0.0,
        k_ratio: 1.0,
    };
    Ok((breakdown.recombine(), breakdown))
}

pub fn modular_value_amplitudes(i: &[Complex64; 2], spec: &QubitModularSpec, f: &[Complex64; 2]) -> Result<Complex64> {
    let fi = inner2(f, i);
    let scale = (inner2(f, f).re * inner2(i, i).re).sqrt();
    check_overlap(fi.norm() / scale)?;
    let u = rotation_operator(&spec.r, spec.alpha);
    let ui = [u[(0, 0)] * i[0] + u[(0, 1)] * i[1], u[(1, 0)] * i[0] + u[(1, 1)] * i[1]];
    Ok(Complex64::from_polar(1.0, 0.5 * spec.beta) * inner2(f, &ui) / fi)
}

pub fn modular_value_direct(i: &QubitState, spec: &QubitModularSpec, f: &QubitState) -> Result<PolarComplex> {
    modular_value_amplitudes(&i.amplitudes(), spec, &f.amplitudes()).map(PolarComplex::from)
}

pub fn modular_value_geometric(
    i: &BlochVector,
    spec: &QubitModularSpec,
    f: &BlochVector,
) -> Result<(PolarComplex, GeometricBreakdown)> {
    check_overlap((0.5 * (1.0 + f.dot(i))).max(0.0).sqrt())?;
    let s = rodrigues_rotate(i, &spec.r, spec.alpha);
    let modulus = ((1.0 + f.dot(&s)) / (1.0 + f.dot(i))).max(0.0).sqrt();
    let omega = solid_angle_quadrangle(i, &spec.r, &s, f)?;
    let breakdown = GeometricBreakdown {
        factors: vec![QubitFactor {
            modulus_ratio: modulus,
            solid_angle: omega,
            i_point: *i,
            r_point: spec.r,
            s_point: Some(s),
            f_point: *f,
        }],
        dynamical_phase: 0.5 * (spec.beta - spec.alpha),
        k_ratio: 1.0,
    };
    Ok((breakdown.recombine(), breakdown))
}
