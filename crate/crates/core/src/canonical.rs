//! Canonical frame for qutrit pre/postselection triples.
//!
//! `U1` sends the projector state to `(0, 0, 1)`, whose Majorana points both
//! sit on the north pole. `U2` keeps that state fixed and turns the
//! postselected state into `(1 - cos eta, sqrt(2 cos eta (1 - cos eta)), cos eta)`,
//! a product state with both points at
//! `(sqrt(4 cos eta (1 - cos eta)), 0, 2 cos eta - 1)`.
//!
//! States are parametrized as
//! `(e^{j chi1} cos eps sin theta, e^{j chi2} sin eps sin theta, cos theta)`
//! after removing the phase of the third component (or, if that component
//! vanishes, of the largest one).

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::majorana::{majorana_points, SymmetricRepresentation};
use crate::numerics::{self, CMatrix};
use crate::{BlochVector, Error, NLevelState, Result, Tolerances};

/// `(theta, epsilon, chi1, chi2)` of a qutrit. For the postselected state
/// after `U1` the same four numbers are `(eta, delta, xi1, xi2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QutritParams {
    pub theta: f64,
    pub epsilon: f64,
    pub chi1: f64,
    pub chi2: f64,
    /// `sin(theta) = 0`: `epsilon` and the phases are undefined and set to 0.
    pub param_degenerate: bool,
}

impl QutritParams {
    pub fn state(&self) -> Result<NLevelState> {
        crate::majorana::qutrit_state_from_params(self.theta, self.epsilon, self.chi1, self.chi2)
    }
}

fn check_qutrit(state: &NLevelState) -> Result<()> {
    if state.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: state.dim() });
    }
    Ok(())
}

/// Removes the phase of the third component, or of the largest-modulus
/// component when the third vanishes.
pub fn strip_gauge(c: &[Complex64]) -> Vec<Complex64> {
    let tol = Tolerances::DEFAULT.zero;
    let last = c.len() - 1;
    let pivot = if c[last].norm() > tol {
        last
    } else {
        (0..c.len()).max_by(|&a, &b| c[a].norm().total_cmp(&c[b].norm())).unwrap_or(last)
    };
    let phase = Complex64::from_polar(1.0, -c[pivot].arg());
    let mut out: Vec<Complex64> = c.iter().map(|z| z * phase).collect();
    out[pivot] = Complex64::new(out[pivot].norm(), 0.0);
    out
}

pub fn extract_params(state: &NLevelState) -> Result<QutritParams> {
    check_qutrit(state)?;
    let tol = Tolerances::DEFAULT.zero;
    let c = strip_gauge(state.coefficients());
    let (m0, m1, m2) = (c[0].norm(), c[1].norm(), c[2].norm());
    let sin_theta = m0.hypot(m1);
    let theta = sin_theta.atan2(m2);
    if sin_theta <= tol {
        return Ok(QutritParams { theta: 0.0, epsilon: 0.0, chi1: 0.0, chi2: 0.0, param_degenerate: true });
    }
    let phase = |z: Complex64| if z.norm() > tol { z.arg().rem_euclid(2.0 * PI) } else { 0.0 };
    Ok(QutritParams {
        theta,
        epsilon: m1.atan2(m0),
        chi1: phase(c[0]),
        chi2: phase(c[1]),
        param_degenerate: false,
    })
}

/// Unitary with third row `<psi_r|`, so that `U1 psi_r = (0, 0, 1)`.
///
/// When `psi_r` already is `(0, 0, 1)` the identity is returned; this is the
/// general form evaluated at `epsilon = pi/2`, `chi1 = chi2 = pi`.
pub fn build_u1(psi_r: &NLevelState) -> Result<CMatrix> {
    let p = extract_params(psi_r)?;
    if p.param_degenerate {
        return Ok(numerics::identity(3));
    }
    Ok(u1_from_params(&p))
}

pub fn u1_from_params(p: &QutritParams) -> CMatrix {
    let (st, ct) = p.theta.sin_cos();
    let (se, ce) = p.epsilon.sin_cos();
    let e1 = Complex64::from_polar(1.0, -p.chi1);
    let e2 = Complex64::from_polar(1.0, -p.chi2);
    let r = |x: f64| Complex64::new(x, 0.0);
    CMatrix::from_row_slice(
        3,
        3,
        &[
            -e1 * se,
            e2 * ce,
            r(0.0),
            -e1 * (ce * ct),
            -e2 * (se * ct),
            r(st),
            e1 * (ce * st),
            e2 * (se * st),
            r(ct),
        ],
    )
}

/// Block rotation fixing `(0, 0, 1)` that brings `psi_f_prime` to canonical
/// product form.
pub fn build_u2(psi_f_prime: &NLevelState) -> Result<CMatrix> {
    let p = extract_params(psi_f_prime)?;
    build_u2_from_params(p.theta, p.epsilon, p.chi1, p.chi2)
}

/// `U2` with mixing angle `delta + arccos(tan(eta / 2))`.
pub fn build_u2_from_params(eta: f64, delta: f64, xi1: f64, xi2: f64) -> Result<CMatrix> {
    let t = (0.5 * eta).tan();
    if !(t.is_finite() && (-1e-12..=1.0 + 1e-12).contains(&t)) {
        return Err(Error::EtaOutOfRange { eta });
    }
    let a = delta + t.clamp(0.0, 1.0).acos();
    let (sa, ca) = a.sin_cos();
    let e1 = Complex64::from_polar(1.0, -xi1);
    let e2 = Complex64::from_polar(1.0, -xi2);
    let zero = Complex64::new(0.0, 0.0);
    Ok(CMatrix::from_row_slice(
        3,
        3,
        &[e1 * ca, e2 * sa, zero, e1 * sa, -e2 * ca, zero, zero, zero, Complex64::new(1.0, 0.0)],
    ))
}

/// `(1 - cos eta, sqrt(2 cos eta (1 - cos eta)), cos eta)`.
pub fn canonical_final_state(eta: f64) -> [f64; 3] {
    let c = eta.cos();
    [1.0 - c, (2.0 * c * (1.0 - c)).max(0.0).sqrt(), c]
}

/// Bloch vector shared by both Majorana points of the canonical final state.
pub fn canonical_final_vector(eta: f64) -> BlochVector {
    let c = eta.cos();
    BlochVector { x: (4.0 * c * (1.0 - c)).max(0.0).sqrt(), y: 0.0, z: 2.0 * c - 1.0 }
}

/// A qutrit triple mapped to its canonical frame.
#[derive(Debug, Clone)]
pub struct CanonicalTriple {
    /// `U2 * U1`.
    pub u_total: CMatrix,
    pub u1: CMatrix,
    pub u2: CMatrix,
    pub r_vec: BlochVector,
    pub f_vec: BlochVector,
    /// Majorana points and `K` of the transformed initial state.
    pub i_rep: SymmetricRepresentation,
    pub psi_i: NLevelState,
    pub psi_r: NLevelState,
    pub psi_f: NLevelState,
    pub r_params: QutritParams,
    /// `(eta, delta, xi1, xi2)` of the postselected state after `U1`.
    pub f_params: QutritParams,
}

impl CanonicalTriple {
    pub fn transform(&self, state: &NLevelState) -> Result<NLevelState> {
        state.transformed(&self.u_total)
    }

    /// `U A U^dagger`.
    pub fn transform_operator(&self, a: &CMatrix) -> CMatrix {
        &self.u_total * a * self.u_total.adjoint()
    }
}

pub fn canonicalize_triple(psi_i: &NLevelState, psi_r: &NLevelState, psi_f: &NLevelState) -> Result<CanonicalTriple> {
    for s in [psi_i, psi_r, psi_f] {
        check_qutrit(s)?;
    }
    let r_params = extract_params(psi_r)?;
    let u1 = build_u1(psi_r)?;
    let f_prime = psi_f.transformed(&u1)?;
    let f_params = extract_params(&f_prime)?;
    let u2 = build_u2_from_params(f_params.theta, f_params.epsilon, f_params.chi1, f_params.chi2)?;
    let u_total = &u2 * &u1;
    let psi_i2 = psi_i.transformed(&u_total)?;
    let i_rep = majorana_points(&psi_i2)?;
    Ok(CanonicalTriple {
        r_vec: BlochVector::NORTH,
        f_vec: canonical_final_vector(f_params.theta),
        i_rep,
        psi_r: psi_r.transformed(&u_total)?,
        psi_f: psi_f.transformed(&u_total)?,
        psi_i: psi_i2,
        u_total,
        u1,
        u2,
        r_params,
        f_params,
    })
}

/// The fixed pair of unitaries that brings the three-box states
/// `(1,1,1)/sqrt3` and `(1,-1,1)/sqrt3` to canonical form.
pub fn three_box_transform() -> (CMatrix, CMatrix) {
    let s2 = SQRT_2;
    let s3 = 3f64.sqrt();
    let s6 = 6f64.sqrt();
    let r = |x: f64| Complex64::new(x, 0.0);
    let u1 = CMatrix::from_row_slice(
        3,
        3,
        &[r(-s3), r(s3), r(0.0), r(-1.0), r(-1.0), r(2.0), r(s2), r(s2), r(s2)],
    )
    .map(|z| z / s6);
    let u2 = CMatrix::from_row_slice(
        3,
        3,
        &[
            r(-1.0 - s3),
            r(1.0 - s3),
            r(0.0),
            r(1.0 - s3),
            r(1.0 + s3),
            r(0.0),
            r(0.0),
            r(0.0),
            r(2.0 * s2),
        ],
    )
    .map(|z| z / (2.0 * s2));
    (u1, u2)
}
