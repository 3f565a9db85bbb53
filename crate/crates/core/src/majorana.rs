//! Majorana stellar representation.
//!
//! An `N`-level state `sum_k c_k |k>` maps to the symmetric state of `N - 1`
//! qubits in which level `k` is the Dicke state with `k` qubits in `|0>`.
//! So `|0>` becomes `|1...1>` and `|N-1>` becomes `|0...0>`. The qubit states
//! are read off from the roots of
//!
//! ```text
//! p(z) = sum_k (-1)^k sqrt(C(N-1, k)) c_k z^k
//! ```
//!
//! where a root `z` stands for the qubit `|0> + z|1>` and a root at infinity
//! for `|1>`. For a qutrit this is `c0 - sqrt(2) c1 z + c2 z^2`.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::bloch_to_qubit;
use crate::numerics::{self, CMatrix, CVector, ProjectiveRoot};
use crate::{BlochVector, Error, Result, Tolerances, MAX_LEVELS};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Normalized coefficients of an `N`-level state, `2 <= N <= MAX_LEVELS`,
/// with the first coefficient of modulus above `1e-12` real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct NLevelState {
    coeffs: Vec<Complex64>,
}

impl NLevelState {
    /// Normalizes and gauge-fixes arbitrary nonzero coefficients.
    pub fn from_coefficients(coeffs: Vec<Complex64>) -> Result<Self> {
        let n = coeffs.len();
        if !(2..=MAX_LEVELS).contains(&n) {
            return Err(Error::InvalidState(format!("dimension {n} outside 2..={MAX_LEVELS}")));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidState("non-finite coefficient".into()));
        }
        let norm = numerics::norm(&coeffs);
        if norm == 0.0 {
            return Err(Error::InvalidState("all coefficients vanish".into()));
        }
        let mut coeffs: Vec<Complex64> = coeffs.into_iter().map(|c| c / norm).collect();
        gauge_fix(&mut coeffs, Tolerances::DEFAULT.zero);
        Ok(NLevelState { coeffs })
    }

    pub fn from_vector(v: &CVector) -> Result<Self> {
        Self::from_coefficients(v.iter().copied().collect())
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::from_coefficients(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidState(format!("basis index {k} out of range for dimension {dim}")));
        }
        let mut c = vec![ZERO; dim];
        c[k] = Complex64::new(1.0, 0.0);
        Self::from_coefficients(c)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn to_vector(&self) -> CVector {
        CVector::from_column_slice(&self.coeffs)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &NLevelState) -> Complex64 {
        numerics::inner(&self.coeffs, &other.coeffs)
    }

    /// `|<self|other>|`.
    pub fn fidelity(&self, other: &NLevelState) -> f64 {
        self.inner(other).norm()
    }

    /// `U |self>`, renormalized and gauge-fixed.
    pub fn transformed(&self, u: &CMatrix) -> Result<NLevelState> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.nrows() });
        }
        NLevelState::from_vector(&(u * self.to_vector()))
    }
}

fn gauge_fix(c: &mut [Complex64], tol: f64) {
    if let Some(pivot) = c.iter().find(|z| z.norm() > tol).copied() {
        let phase = Complex64::from_polar(1.0, -pivot.arg());
        let mut first = true;
        for z in c.iter_mut() {
            *z *= phase;
            if first && z.norm() > tol {
                *z = Complex64::new(z.norm(), 0.0);
                first = false;
            }
        }
    }
}

/// Unordered Majorana points with normalization factor `K`.
///
/// The points are stored sorted by `z`, then `x`, then `y`, all descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricRepresentation {
    pub points: Vec<BlochVector>,
    pub k: f64,
}

impl SymmetricRepresentation {
    pub fn new(mut points: Vec<BlochVector>) -> Result<Self> {
        sort_points(&mut points);
        let k = normalization_factor(&points)?;
        Ok(SymmetricRepresentation { points, k })
    }

    pub fn dim(&self) -> usize {
        self.points.len() + 1
    }
}

pub fn sort_points(points: &mut [BlochVector]) {
    points.sort_by(|a, b| {
        b.z.total_cmp(&a.z).then_with(|| b.x.total_cmp(&a.x)).then_with(|| b.y.total_cmp(&a.y))
    });
}

pub fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Majorana polynomial coefficients, lowest degree first.
pub fn majorana_polynomial(state: &NLevelState) -> Vec<Complex64> {
    let n = state.dim() - 1;
    state
        .coefficients()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            c * (sign * binomial(n, k).sqrt())
        })
        .collect()
}

/// Bloch point of the qubit `|0> + z|1>`; infinity is the south pole.
pub fn root_to_bloch(root: &ProjectiveRoot) -> BlochVector {
    match root {
        ProjectiveRoot::AtInfinity => BlochVector::SOUTH,
        ProjectiveRoot::Finite(z) => {
            let m = z.norm_sqr();
            if m <= 1.0 {
                let d = 1.0 + m;
                BlochVector { x: 2.0 * z.re / d, y: 2.0 * z.im / d, z: (1.0 - m) / d }
            } else {
                let w = z.inv();
                let mw = w.norm_sqr();
                let d = 1.0 + mw;
                BlochVector { x: 2.0 * w.re / d, y: -2.0 * w.im / d, z: (mw - 1.0) / d }
            }
        }
    }
}

pub fn majorana_points(state: &NLevelState) -> Result<SymmetricRepresentation> {
    majorana_points_with(state, Tolerances::DEFAULT.zero)
}

pub fn majorana_points_with(state: &NLevelState, tol_zero: f64) -> Result<SymmetricRepresentation> {
    let roots = numerics::solve_polynomial_with(&majorana_polynomial(state), tol_zero)?;
    SymmetricRepresentation::new(roots.iter().map(root_to_bloch).collect())
}

/// Coefficients `E_k` of `x^k` in `prod_m (b_m + a_m x)` for the qubits
/// `a_m|0> + b_m|1>` of the given points.
fn elementary_coefficients(points: &[BlochVector]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for p in points {
        let q = bloch_to_qubit(p);
        let (a, b) = (q.a0(), q.a1());
        let mut next = vec![ZERO; e.len() + 1];
        for (k, c) in e.iter().enumerate() {
            next[k] += c * b;
            next[k + 1] += c * a;
        }
        e = next;
    }
    e
}

fn check_point_count(points: &[BlochVector]) -> Result<()> {
    if points.is_empty() || points.len() + 1 > MAX_LEVELS {
        return Err(Error::InvalidInput(format!(
            "{} Majorana points; expected 1..={}",
            points.len(),
            MAX_LEVELS - 1
        )));
    }
    Ok(())
}

/// `K` such that `K * sum_P P(|phi_1>...|phi_n>)` is normalized.
pub fn normalization_factor(points: &[BlochVector]) -> Result<f64> {
    check_point_count(points)?;
    let n = points.len();
    let e = elementary_coefficients(points);
    let sum: f64 = e.iter().enumerate().map(|(k, c)| c.norm_sqr() / binomial(n, k)).sum();
    Ok(1.0 / (factorial(n) * sum.sqrt()))
}

/// Independent evaluation of `K` from qubit overlaps:
/// `|| sum_P P(phi) ||^2 = n! perm(G)` with `G_ab = <phi_a|phi_b>`.
pub fn normalization_from_overlaps(points: &[BlochVector]) -> Result<f64> {
    check_point_count(points)?;
    let q: Vec<_> = points.iter().map(bloch_to_qubit).collect();
    let n = q.len();
    let perm: Complex64 = permutations(n)
        .iter()
        .map(|p| (0..n).map(|a| q[a].inner(&q[p[a]])).product::<Complex64>())
        .sum();
    Ok(1.0 / (factorial(n) * perm.re).sqrt())
}

/// Symmetric state whose Majorana points are `points`, with its `K`.
pub fn symmetrize(points: &[BlochVector]) -> Result<(NLevelState, f64)> {
    check_point_count(points)?;
    let n = points.len();
    let e = elementary_coefficients(points);
    let coeffs: Vec<Complex64> = e.iter().enumerate().map(|(k, c)| c / binomial(n, k).sqrt()).collect();
    let k = normalization_factor(points)?;
    Ok((NLevelState::from_coefficients(coeffs)?, k))
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    out
}

/// Permutation `p` minimizing `sum_k angle(a[k], b[p[k]])`; ties resolve to
/// the lexicographically first permutation.
pub fn pair_points(a: &[BlochVector], b: &[BlochVector]) -> Vec<usize> {
    let n = a.len().min(b.len());
    let mut best = (f64::INFINITY, (0..n).collect::<Vec<_>>());
    for p in permutations(n) {
        let cost: f64 = (0..n).map(|k| a[k].angle_to(&b[p[k]])).sum();
        if cost < best.0 - 1e-12 {
            best = (cost, p);
        }
    }
    best.1
}

/// `|2 c1^2 - 4 c0 c2|`, the discriminant modulus of the qutrit polynomial.
pub fn discriminant_degeneracy(state: &NLevelState) -> Result<f64> {
    if state.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: state.dim() });
    }
    let c = state.coefficients();
    Ok((2.0 * c[1] * c[1] - 4.0 * c[0] * c[2]).norm())
}

/// Two-qubit amplitudes `[[psi_00, psi_01], [psi_10, psi_11]]` of a qutrit.
pub fn two_qubit_amplitudes(state: &NLevelState) -> Result<[[Complex64; 2]; 2]> {
    if state.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: state.dim() });
    }
    let c = state.coefficients();
    let mid = c[1] / SQRT_2;
    Ok([[c[2], mid], [mid, c[0]]])
}

fn entropy_of_amplitudes(m: &[[Complex64; 2]; 2]) -> f64 {
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm_sqr();
    let disc = (1.0 - 4.0 * det).max(0.0).sqrt();
    [(1.0 + disc) / 2.0, (1.0 - disc) / 2.0]
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy in bits of one qubit of the symmetrized pair.
pub fn entanglement_entropy(p1: &BlochVector, p2: &BlochVector) -> Result<f64> {
    let (state, _) = symmetrize(&[*p1, *p2])?;
    entanglement_entropy_state(&state)
}

pub fn entanglement_entropy_state(state: &NLevelState) -> Result<f64> {
    Ok(entropy_of_amplitudes(&two_qubit_amplitudes(state)?))
}

/// Root angles of the qutrit `(e^{j chi1} cos eps sin theta,
/// e^{j chi2} sin eps sin theta, cos theta)`: root `k` is
/// `tan(beta_k / 2) e^{j alpha_k}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QutritAngles {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// Sum of the root moduli.
    pub s: f64,
    /// `|D|^2 / 4` for the discriminant `D` of the monic polynomial.
    pub rho: f64,
    pub chi_tilde: f64,
    /// Discriminant modulus at or below `1e-12`: the two roots coincide.
    pub degenerate: bool,
}

impl QutritAngles {
    pub fn roots(&self) -> [Complex64; 2] {
        [
            Complex64::from_polar((0.5 * self.beta1).tan(), self.alpha1),
            Complex64::from_polar((0.5 * self.beta2).tan(), self.alpha2),
        ]
    }

    pub fn points(&self) -> [BlochVector; 2] {
        [BlochVector::from_angles(self.beta1, self.alpha1), BlochVector::from_angles(self.beta2, self.alpha2)]
    }
}

pub fn qutrit_state_from_params(theta: f64, epsilon: f64, chi1: f64, chi2: f64) -> Result<NLevelState> {
    let (st, ct) = theta.sin_cos();
    let (se, ce) = epsilon.sin_cos();
    NLevelState::from_coefficients(vec![
        Complex64::from_polar(ce * st, chi1),
        Complex64::from_polar(se * st, chi2),
        Complex64::new(ct, 0.0),
    ])
}

/// Closed-form roots of `z^2 - sqrt(2) sin(eps) tan(theta) e^{j chi2} z
/// + cos(eps) tan(theta) e^{j chi1}`, for `0 <= theta < pi/2`.
///
/// Azimuths are `chi1/2 +- gamma`. Root 1 takes `+gamma` when
/// `sin(chi_tilde) > 0` and `-gamma` otherwise, with
/// `chi_tilde = chi2 - chi1/2`; when both roots share an azimuth, root 1 is
/// the one nearer the north pole.
pub fn qutrit_roots_closed_form(theta: f64, epsilon: f64, chi1: f64, chi2: f64) -> QutritAngles {
    const LABEL_TOL: f64 = 1e-12;
    let t = theta.tan();
    let (se, ce) = epsilon.sin_cos();
    let chi_tilde = chi2 - 0.5 * chi1;
    let p = ce * t;
    // Roots scaled by e^{-j chi1/2}: z'^2 - b' z' + p = 0 with p real.
    let b = Complex64::from_polar(SQRT_2 * se * t, chi_tilde);
    let d = b * b - 4.0 * p;
    let rho = d.norm_sqr() / 4.0;
    let s = (2.0 * p + se * se * t * t + 0.5 * d.norm()).max(0.0).sqrt();
    let degenerate = d.norm() <= Tolerances::DEFAULT.zero;

    let sq = d.sqrt();
    let big = if (b * sq.conj()).re >= 0.0 { b + sq } else { b - sq };
    let half = 0.5 * chi1;
    if big.norm() == 0.0 {
        return QutritAngles { alpha1: half, alpha2: half, beta1: 0.0, beta2: 0.0, s, rho, chi_tilde, degenerate };
    }
    let rho_big = 0.5 * big.norm();
    let rho_small = p / rho_big;
    let gamma_big = big.arg();
    let gamma = gamma_big.abs();
    let sgn = if chi_tilde.sin() > LABEL_TOL { 1.0 } else { -1.0 };

    let separable_azimuths = gamma > LABEL_TOL && std::f64::consts::PI - gamma > LABEL_TOL;
    let (rho1, rho2) = if separable_azimuths {
        if gamma_big.signum() == sgn {
            (rho_big, rho_small)
        } else {
            (rho_small, rho_big)
        }
    } else {
        (rho_small, rho_big)
    };
    QutritAngles {
        alpha1: half + sgn * gamma,
        alpha2: half - sgn * gamma,
        beta1: 2.0 * rho1.atan(),
        beta2: 2.0 * rho2.atan(),
        s,
        rho,
        chi_tilde,
        degenerate,
    }
}
