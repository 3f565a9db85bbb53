//! Weak-value singularity scan of a qutrit projector in the canonical frame
//! `r = e_z`, `f = e_x`, sweeping the polar parameter `theta` of the initial
//! state at fixed `epsilon`, `chi1`, `chi2`.
//!
//! The two Majorana points of the initial state collide where the
//! discriminant vanishes (`theta_b`), and the second point passes through
//! `-e_x`, orthogonal to the postselection, at `theta_c`. There the weak value
//! diverges and the solid-angle sum jumps by `2 pi`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::solid_angle_triangle;
use crate::majorana::{qutrit_roots_closed_form, qutrit_state_from_params};
use crate::nlevel_values::{projector, weak_value_direct};
use crate::{BlochVector, Error, NLevelState, PolarComplex, Result, Tolerances};

/// Acceptance threshold on `|h|` or `|d|` at a bisected root.
const ROOT_ACCEPT: f64 = 1e-8;
const BISECT_WIDTH: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanParams {
    pub epsilon: f64,
    pub chi1: f64,
    pub chi2: f64,
}

impl Default for ScanParams {
    /// `epsilon = arcsin(tan(pi/6))`, `chi1 = 4 pi/3`, `chi2 = 2 pi/3`.
    fn default() -> Self {
        ScanParams { epsilon: FRAC_PI_6.tan().asin(), chi1: 4.0 * PI / 3.0, chi2: 2.0 * PI / 3.0 }
    }
}

impl ScanParams {
    pub fn initial_state(&self, theta: f64) -> Result<NLevelState> {
        qutrit_state_from_params(theta, self.epsilon, self.chi1, self.chi2)
    }

    /// `cos(eps) e^{j chi1} + sqrt(2) sin(eps) e^{j chi2}`.
    fn w(&self) -> Complex64 {
        let (se, ce) = self.epsilon.sin_cos();
        Complex64::from_polar(ce, self.chi1) + Complex64::from_polar(SQRT_2 * se, self.chi2)
    }

    /// Closed-form weak value `[1 + tan(theta) w]^{-1}`.
    pub fn closed_form_weak_value(&self, theta: f64) -> Complex64 {
        1.0 / (1.0 + theta.tan() * self.w())
    }

    /// `cos(theta) + sin(theta) w`, proportional to `<f|i>`.
    pub fn overlap_function(&self, theta: f64) -> Complex64 {
        let (st, ct) = theta.sin_cos();
        ct + st * self.w()
    }

    /// `2 sin^2(eps) sin(theta) e^{2j chi_tilde} - 4 cos(eps) cos(theta)`,
    /// proportional to the root discriminant.
    pub fn discriminant_function(&self, theta: f64) -> Complex64 {
        let (st, ct) = theta.sin_cos();
        let (se, ce) = self.epsilon.sin_cos();
        let chi_tilde = self.chi2 - 0.5 * self.chi1;
        Complex64::from_polar(2.0 * se * se * st, 2.0 * chi_tilde) - 4.0 * ce * ct
    }
}

/// The postselected state `e_x (x) e_x`.
pub fn scan_final_state() -> NLevelState {
    NLevelState::from_real(&[0.5, std::f64::consts::FRAC_1_SQRT_2, 0.5]).expect("normalized")
}

/// `count` uniform points on `[1e-3, pi/2 - 1e-3]`.
pub fn default_grid(count: usize) -> Vec<f64> {
    linspace(1e-3, FRAC_PI_2 - 1e-3, count)
}

pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![start],
        _ => (0..count).map(|k| start + (stop - start) * k as f64 / (count - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanFlags {
    /// Row brackets the root collision `theta_b`.
    pub bifurcation: bool,
    /// Row brackets `theta_c`, or the selection is orthogonal here.
    pub singular: bool,
    /// Discriminant below the near-degenerate tolerance.
    pub near_degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub theta: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub i1: BlochVector,
    pub i2: BlochVector,
    pub omega1: Option<f64>,
    pub omega2: Option<f64>,
    pub wv_modulus: Option<f64>,
    /// Principal argument in `(-pi, pi]`.
    pub wv_argument: Option<f64>,
    pub wv_direct: Option<PolarComplex>,
    pub discriminant: f64,
    pub flags: ScanFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaJump {
    /// 1 or 2.
    pub series: u8,
    /// Index of the first record after the jump.
    pub index: usize,
    pub theta_before: f64,
    pub theta_after: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub params: ScanParams,
    pub records: Vec<ScanRecord>,
    pub theta_b: Option<f64>,
    pub theta_c: Option<f64>,
    pub jumps: Vec<OmegaJump>,
    pub omega1_max_step: f64,
    pub omega2_max_step: f64,
}

impl ScanResult {
    /// Largest deviation of `omega1 + omega2` from 0 below `theta_c` and from
    /// `2 pi` above it.
    pub fn omega_sum_deviation(&self) -> Option<(f64, f64)> {
        let tc = self.theta_c?;
        let (mut below, mut above) = (0.0f64, 0.0f64);
        for r in &self.records {
            if let (Some(a), Some(b)) = (r.omega1, r.omega2) {
                if r.theta < tc {
                    below = below.max((a + b).abs());
                } else {
                    above = above.max((a + b - 2.0 * PI).abs());
                }
            }
        }
        Some((below, above))
    }

    pub fn jumps_in(&self, series: u8) -> Vec<OmegaJump> {
        self.jumps.iter().copied().filter(|j| j.series == series).collect()
    }
}

struct PointData {
    record: ScanRecord,
}

fn scan_point(theta: f64, params: &ScanParams, f_state: &NLevelState, r_proj: &crate::numerics::CMatrix) -> Result<PointData> {
    let tol = Tolerances::DEFAULT;
    let a = qutrit_roots_closed_form(theta, params.epsilon, params.chi1, params.chi2);
    let [i1, i2] = a.points();
    let (r, f) = (BlochVector::NORTH, BlochVector::E_X);
    let omega = |i: &BlochVector| match solid_angle_triangle(i, &r, &f) {
        Ok(o) => Ok(Some(o)),
        Err(Error::UndefinedSolidAngle) => Ok(None),
        Err(e) => Err(e),
    };
    let (omega1, omega2) = (omega(&i1)?, omega(&i2)?);
    let factor_modulus = |i: &BlochVector| {
        let den = 1.0 + f.dot(i);
        (den > tol.zero).then(|| (0.5 * (1.0 + f.dot(&r)) * (1.0 + r.dot(i)) / den).max(0.0).sqrt())
    };
    let wv_modulus = match (factor_modulus(&i1), factor_modulus(&i2)) {
        (Some(a), Some(b)) => Some(a * b),
        _ => None,
    };
    let wv_argument = match (omega1, omega2, wv_modulus) {
        (Some(a), Some(b), Some(_)) => Some(crate::polar::wrap_pi(-0.5 * (a + b))),
        _ => None,
    };
    let psi_i = params.initial_state(theta)?;
    let wv_direct = match weak_value_direct(&psi_i, r_proj, f_state) {
        Ok(w) => Some(w),
        Err(Error::OrthogonalSelection { .. }) => None,
        Err(e) => return Err(e),
    };
    let discriminant = params.discriminant_function(theta).norm();
    let flags = ScanFlags {
        bifurcation: false,
        singular: wv_direct.is_none() || wv_modulus.is_none(),
        near_degenerate: discriminant <= tol.near_degenerate,
    };
    Ok(PointData {
        record: ScanRecord {
            theta,
            alpha1: a.alpha1,
            alpha2: a.alpha2,
            beta1: a.beta1,
            beta2: a.beta2,
            i1,
            i2,
            omega1,
            omega2,
            wv_modulus,
            wv_argument,
            wv_direct,
            discriminant,
            flags,
        },
    })
}

/// Bisects a sign change of `g` on `[a, b]`.
fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a);
    for _ in 0..200 {
        if b - a <= BISECT_WIDTH {
            break;
        }
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm > 0.0) == (ga > 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// First sign change of `Re g` across the grid, bisected, and accepted if
/// `|g|` is small there.
fn locate_root(grid: &[f64], g: impl Fn(f64) -> Complex64) -> Option<f64> {
    grid.windows(2).find_map(|w| {
        let (ga, gb) = (g(w[0]).re, g(w[1]).re);
        if ga == 0.0 {
            return (g(w[0]).norm() <= ROOT_ACCEPT).then_some(w[0]);
        }
        if (ga > 0.0) == (gb > 0.0) {
            return None;
        }
        let t = bisect(|x| g(x).re, w[0], w[1]);
        (g(t).norm() <= ROOT_ACCEPT).then_some(t)
    })
}

/// Lifts a sequence of angles defined modulo `4 pi` onto the branch nearest
/// the previous value. A step that no branch brings within `pi` is a jump:
/// the previous branch offset is kept and the step is reported.
fn unwrap_series(values: &[Option<f64>]) -> (Vec<Option<f64>>, Vec<(usize, f64)>, f64) {
    const PERIOD: f64 = 4.0 * PI;
    let mut out = Vec::with_capacity(values.len());
    let mut jumps = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    let mut max_step = 0.0f64;
    for (k, v) in values.iter().enumerate() {
        let Some(v) = *v else {
            out.push(None);
            continue;
        };
        let (u, offset) = match prev {
            None => (v, 0.0),
            Some((p, offset)) => {
                let near = PERIOD * ((p - v) / PERIOD).round();
                if (v + near - p).abs() <= PI {
                    max_step = max_step.max((v + near - p).abs());
                    (v + near, near)
                } else {
                    jumps.push((k, v + offset - p));
                    (v + offset, offset)
                }
            }
        };
        out.push(Some(u));
        prev = Some((u, offset));
    }
    (out, jumps, max_step)
}

/// Runs the scan over `grid`, which must be strictly increasing inside
/// `(0, pi/2)`.
pub fn singularity_scan(grid: &[f64], params: &ScanParams) -> Result<ScanResult> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty theta grid".into()));
    }
    if grid.iter().any(|t| !t.is_finite() || *t <= 0.0 || *t >= FRAC_PI_2) {
        return Err(Error::InvalidInput("theta grid must lie inside (0, pi/2)".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("theta grid must be strictly increasing".into()));
    }
    let f_state = scan_final_state();
    let r_proj = projector(&NLevelState::basis(3, 2)?);
    let points: Vec<PointData> =
        grid.par_iter().map(|&t| scan_point(t, params, &f_state, &r_proj)).collect::<Result<_>>()?;
    let mut records: Vec<ScanRecord> = points.into_iter().map(|p| p.record).collect();

    let theta_b = locate_root(grid, |t| params.discriminant_function(t));
    let theta_c = locate_root(grid, |t| params.overlap_function(t));

    let mut jumps = Vec::new();
    let mut max_steps = [0.0; 2];
    for series in 0..2usize {
        let raw: Vec<Option<f64>> =
            records.iter().map(|r| if series == 0 { r.omega1 } else { r.omega2 }).collect();
        let (unwrapped, js, max_step) = unwrap_series(&raw);
        max_steps[series] = max_step;
        for (rec, u) in records.iter_mut().zip(unwrapped) {
            if series == 0 {
                rec.omega1 = u;
            } else {
                rec.omega2 = u;
            }
        }
        for (index, step) in js {
            let before = (0..index).rev().find(|&k| raw[k].is_some()).unwrap_or(0);
            jumps.push(OmegaJump {
                series: series as u8 + 1,
                index,
                theta_before: grid[before],
                theta_after: grid[index],
                step,
            });
        }
    }

    let mark = |records: &mut [ScanRecord], root: Option<f64>, set: fn(&mut ScanFlags)| {
        if let Some(t) = root {
            let hi = grid.partition_point(|&g| g < t);
            if hi > 0 {
                set(&mut records[hi - 1].flags);
            }
            if hi < records.len() {
                set(&mut records[hi].flags);
            }
        }
    };
    mark(&mut records, theta_b, |f| f.bifurcation = true);
    mark(&mut records, theta_c, |f| f.singular = true);

    Ok(ScanResult {
        params: *params,
        records,
        theta_b,
        theta_c,
        jumps,
        omega1_max_step: max_steps[0],
        omega2_max_step: max_steps[1],
    })
}
