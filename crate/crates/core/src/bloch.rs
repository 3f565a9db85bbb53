//! Bloch-sphere geometry for pure qubit states.
//!
//! A state `cos(theta/2)|0> + e^{j phi} sin(theta/2)|1>` sits at
//! `(sin theta cos phi, sin theta sin phi, cos theta)`, so `|0>` is the north
//! pole. Oriented solid angles follow the sign of the Bargmann invariant:
//! `-Omega_{irf}/2 = arg(<i|f><f|r><r|i>)`.

use std::f64::consts::PI;
use std::ops::Neg;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::polar::wrap_pi;
use crate::{Error, Result, Tolerances};

const UNIT_TOL: f64 = 1e-10;

/// Unit vector on the Bloch sphere. Serializes as `[x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 3]> for BlochVector {
    fn from(v: [f64; 3]) -> Self {
        BlochVector { x: v[0], y: v[1], z: v[2] }
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(v: BlochVector) -> Self {
        [v.x, v.y, v.z]
    }
}

impl Neg for BlochVector {
    type Output = BlochVector;
    fn neg(self) -> BlochVector {
        BlochVector { x: -self.x, y: -self.y, z: -self.z }
    }
}

impl BlochVector {
    pub const NORTH: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 1.0 };
    pub const SOUTH: BlochVector = BlochVector { x: 0.0, y: 0.0, z: -1.0 };
    pub const E_X: BlochVector = BlochVector { x: 1.0, y: 0.0, z: 0.0 };
    pub const E_Y: BlochVector = BlochVector { x: 0.0, y: 1.0, z: 0.0 };

    /// Checked constructor: the norm must be 1 within `1e-10`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = BlochVector { x, y, z };
        let n = v.norm();
        if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidState(format!("Bloch vector norm {n} is not 1")));
        }
        Ok(v)
    }

    /// Rescales a nonzero vector onto the sphere.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidState("cannot normalize a zero Bloch vector".into()));
        }
        Ok(BlochVector { x: x / n, y: y / n, z: z / n })
    }

    /// Point with polar angle `theta` and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        BlochVector { x: st * cp, y: st * sp, z: ct }
    }

    pub fn to_array(self) -> [f64; 3] {
        self.into()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_TOL
    }

    pub fn dot(&self, o: &BlochVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// Plain cross product; the result is generally not a unit vector.
    pub fn cross(&self, o: &BlochVector) -> BlochVector {
        BlochVector {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    pub fn scale(&self, s: f64) -> BlochVector {
        BlochVector { x: s * self.x, y: s * self.y, z: s * self.z }
    }

    pub fn add(&self, o: &BlochVector) -> BlochVector {
        BlochVector { x: self.x + o.x, y: self.y + o.y, z: self.z + o.z }
    }

    pub fn sub(&self, o: &BlochVector) -> BlochVector {
        BlochVector { x: self.x - o.x, y: self.y - o.y, z: self.z - o.z }
    }

    /// Great-circle distance in radians.
    pub fn angle_to(&self, o: &BlochVector) -> f64 {
        self.cross(o).norm().atan2(self.dot(o))
    }

    /// Polar angle in `[0, pi]`.
    pub fn theta(&self) -> f64 {
        (self.x.hypot(self.y)).atan2(self.z)
    }

    /// Azimuth in `(-pi, pi]`.
    pub fn phi(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn max_abs_diff(&self, o: &BlochVector) -> f64 {
        (self.x - o.x).abs().max((self.y - o.y).abs()).max((self.z - o.z).abs())
    }
}

/// Normalized qubit amplitudes in canonical gauge: the first amplitude with
/// modulus above `1e-12` is real and non-negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    a0: Complex64,
    a1: Complex64,
}

impl QubitState {
    /// Normalizes and gauge-fixes the amplitudes.
    pub fn new(a0: Complex64, a1: Complex64) -> Result<Self> {
        let n = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidState("qubit amplitudes vanish".into()));
        }
        let (a0, a1) = (a0 / n, a1 / n);
        let pivot = if a0.norm() > Tolerances::DEFAULT.zero { a0 } else { a1 };
        let phase = Complex64::from_polar(1.0, -pivot.arg());
        let mut a0 = a0 * phase;
        let mut a1 = a1 * phase;
        if a0.norm() > Tolerances::DEFAULT.zero {
            a0 = Complex64::new(a0.norm(), 0.0);
        } else {
            a1 = Complex64::new(a1.norm(), 0.0);
        }
        Ok(QubitState { a0, a1 })
    }

    pub fn zero() -> Self {
        QubitState { a0: Complex64::new(1.0, 0.0), a1: Complex64::new(0.0, 0.0) }
    }

    pub fn one() -> Self {
        QubitState { a0: Complex64::new(0.0, 0.0), a1: Complex64::new(1.0, 0.0) }
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        [self.a0, self.a1]
    }

    pub fn a0(&self) -> Complex64 {
        self.a0
    }

    pub fn a1(&self) -> Complex64 {
        self.a1
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &QubitState) -> Complex64 {
        self.a0.conj() * other.a0 + self.a1.conj() * other.a1
    }

    pub fn to_bloch(&self) -> BlochVector {
        qubit_to_bloch(self)
    }

    pub fn from_bloch(v: &BlochVector) -> Self {
        bloch_to_qubit(v)
    }
}

pub fn qubit_to_bloch(q: &QubitState) -> BlochVector {
    bloch_from_amplitudes(q.a0, q.a1)
}

/// Bloch vector of unnormalized amplitudes.
pub fn bloch_from_amplitudes(a0: Complex64, a1: Complex64) -> BlochVector {
    let n = a0.norm_sqr() + a1.norm_sqr();
    let c = a0.conj() * a1;
    BlochVector { x: 2.0 * c.re / n, y: 2.0 * c.im / n, z: (a0.norm_sqr() - a1.norm_sqr()) / n }
}

pub fn bloch_to_qubit(v: &BlochVector) -> QubitState {
    let n = v.norm();
    let (x, y, z) = (v.x / n, v.y / n, v.z / n);
    let a0 = ((1.0 + z) / 2.0).max(0.0).sqrt();
    let s = ((1.0 - z) / 2.0).max(0.0).sqrt();
    let rho = x.hypot(y);
    let a1 = if rho > 0.0 { Complex64::new(x / rho, y / rho) * s } else { Complex64::new(s, 0.0) };
    if a0 > Tolerances::DEFAULT.zero {
        QubitState { a0: Complex64::new(a0, 0.0), a1 }
    } else {
        QubitState { a0: Complex64::new(0.0, 0.0), a1: Complex64::new(a1.norm(), 0.0) }
    }
}

/// `|<phi_v|phi_u>|^2 = (1 + u.v) / 2`.
pub fn projection_probability(u: &BlochVector, v: &BlochVector) -> f64 {
    (0.5 * (1.0 + u.dot(v))).clamp(0.0, 1.0)
}

/// Oriented solid angle of the geodesic triangle `i -> r -> f`, in `(-2pi, 2pi]`.
pub fn solid_angle_triangle(i: &BlochVector, r: &BlochVector, f: &BlochVector) -> Result<f64> {
    solid_angle_triangle_with(i, r, f, Tolerances::DEFAULT.zero)
}

pub fn solid_angle_triangle_with(i: &BlochVector, r: &BlochVector, f: &BlochVector, tol_zero: f64) -> Result<f64> {
    let num = f.dot(&r.cross(i));
    let den = 1.0 + f.dot(r) + r.dot(i) + f.dot(i);
    if num.abs() <= tol_zero {
        if den.abs() <= tol_zero {
            return Err(Error::UndefinedSolidAngle);
        }
        return Ok(if den < 0.0 { 2.0 * PI } else { 0.0 });
    }
    Ok(-2.0 * num.atan2(den))
}

/// Rotation of `i` by `alpha` about the unit axis `r`.
pub fn rodrigues_rotate(i: &BlochVector, r: &BlochVector, alpha: f64) -> BlochVector {
    let (s, c) = alpha.sin_cos();
    i.scale(c).add(&r.scale(r.dot(i) * (1.0 - c))).add(&r.cross(i).scale(s))
}

/// `Omega_{irsf} = Omega_{irs} + Omega_{isf}`.
pub fn solid_angle_quadrangle(i: &BlochVector, r: &BlochVector, s: &BlochVector, f: &BlochVector) -> Result<f64> {
    Ok(solid_angle_triangle(i, r, s)? + solid_angle_triangle(i, s, f)?)
}

/// Quadrangle solid angle for `s = rodrigues_rotate(i, r, alpha)` from the
/// Bloch vectors alone, without constructing `s`. Agrees with
/// [`solid_angle_quadrangle`] modulo `4 pi`.
pub fn quadrangle_closed_form(i: &BlochVector, r: &BlochVector, alpha: f64, f: &BlochVector) -> Result<f64> {
    let (sh, ch) = (0.5 * alpha).sin_cos();
    let v = f.dot(&r.cross(i));
    let bracket = Complex64::new(ch * (1.0 + f.dot(i)) + sh * v, -sh * (f.dot(r) + r.dot(i)));
    if bracket.norm() <= Tolerances::DEFAULT.zero {
        return Err(Error::UndefinedSolidAngle);
    }
    let omega = -2.0 * wrap_pi(bracket.arg() + 0.5 * alpha);
    Ok(if omega <= -2.0 * PI { omega + 4.0 * PI } else { omega })
}
