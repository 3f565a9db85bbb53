use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::BlochVector;

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_pi(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// Distance between two angles modulo `period`.
pub fn angle_distance(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

/// A complex value in polar form, as weak and modular values are reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarComplex {
    pub modulus: f64,
    /// Principal argument in `(-pi, pi]`.
    pub argument: f64,
    /// Argument on a continuous branch, when a sweep tracks one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unwrapped_argument: Option<f64>,
}

impl PolarComplex {
    pub fn new(modulus: f64, argument: f64) -> Self {
        let (modulus, argument) = if modulus < 0.0 {
            (-modulus, argument + PI)
        } else {
            (modulus, argument)
        };
        let argument = if modulus == 0.0 { 0.0 } else { wrap_pi(argument) };
        PolarComplex { modulus, argument, unwrapped_argument: None }
    }

    pub fn from_complex(z: Complex64) -> Self {
        let modulus = z.norm();
        let argument = if modulus == 0.0 { 0.0 } else { z.arg() };
        PolarComplex { modulus, argument, unwrapped_argument: None }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.argument)
    }

    pub fn with_unwrapped(mut self, unwrapped: f64) -> Self {
        self.unwrapped_argument = Some(unwrapped);
        self
    }

    /// Relative modulus difference and argument difference modulo `2 pi`.
    /// The argument is ignored when both moduli are negligible.
    pub fn discrepancy(&self, other: &PolarComplex) -> (f64, f64) {
        let scale = self.modulus.max(other.modulus);
        let dm = if scale == 0.0 { 0.0 } else { (self.modulus - other.modulus).abs() / scale.max(1e-300) };
        let da = if scale < 1e-14 { 0.0 } else { angle_distance(self.argument, other.argument, 2.0 * PI) };
        (dm, da)
    }

    pub fn agrees_with(&self, other: &PolarComplex, tol: f64) -> bool {
        let (dm, da) = self.discrepancy(other);
        dm <= tol && da <= tol
    }
}

impl From<Complex64> for PolarComplex {
    fn from(z: Complex64) -> Self {
        PolarComplex::from_complex(z)
    }
}

/// One qubit contribution to a factorized weak or modular value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitFactor {
    pub modulus_ratio: f64,
    /// Oriented solid angle of the triangle `(i, r, f)` or quadrangle
    /// `(i, r, s, f)`; the factor's phase is `-solid_angle / 2`.
    pub solid_angle: f64,
    pub i_point: BlochVector,
    pub r_point: BlochVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_point: Option<BlochVector>,
    pub f_point: BlochVector,
}

impl QubitFactor {
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.modulus_ratio, -0.5 * self.solid_angle)
    }
}

/// Per-qubit factors plus dynamical phase of a geometric evaluation.
///
/// The total is `k_ratio * prod(modulus_ratio)` with argument
/// `dynamical_phase - sum(solid_angle) / 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricBreakdown {
    pub factors: Vec<QubitFactor>,
    pub dynamical_phase: f64,
    pub k_ratio: f64,
}

impl GeometricBreakdown {
    pub fn modulus(&self) -> f64 {
        self.k_ratio * self.factors.iter().map(|f| f.modulus_ratio).product::<f64>()
    }

    /// Total argument before wrapping.
    pub fn phase(&self) -> f64 {
        self.dynamical_phase - 0.5 * self.factors.iter().map(|f| f.solid_angle).sum::<f64>()
    }

    pub fn recombine(&self) -> PolarComplex {
        let phase = self.phase();
        PolarComplex::new(self.modulus(), phase).with_unwrapped(phase)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapping_is_half_open() {
        assert_eq!(wrap_pi(PI), PI);
        assert_eq!(wrap_pi(-PI), PI);
        assert!((wrap_pi(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn rectangular_round_trip() {
        let z = Complex64::new(-0.3, 1.7);
        let p = PolarComplex::from_complex(z);
        assert!((p.to_complex() - z).norm() < 1e-15);
        assert_eq!(PolarComplex::new(-2.0, 0.0).to_complex(), Complex64::from_polar(2.0, PI));
    }

    #[test]
    fn agreement_across_branch_cut() {
        let a = PolarComplex::new(1.0, PI - 1e-12);
        let b = PolarComplex::new(1.0, -PI + 1e-12);
        assert!(a.agrees_with(&b, 1e-10));
    }
}
