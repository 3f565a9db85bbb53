//! Weak and modular values of `N`-level systems.
//!
//! Direct evaluation works for every dimension. The geometric evaluation
//! needs two of the three states to be product states in the Majorana
//! picture (all points coincident). For qutrits this is arranged by
//! [`canonicalize_triple`]; for larger `N` the caller has to supply states
//! already in that form.
//!
//! With the entangled state carrying points `x_k` and the product states
//! single points, the value splits into `N - 1` qubit factors:
//!
//! - projector weak value: `C * prod_k Pi_w(i_k, r_k, f_k)`, where `C` is
//!   `((N-1)! K_r)^2` when the projector state is the entangled one and 1
//!   otherwise;
//! - modular value: modulus `(K_s/K_i) prod_k sqrt((1 + f.s_k)/(1 + f.i_k))`,
//!   argument `beta - strength * Lambda_r - sum_k Omega_{i_k r s_k f} / 2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::canonical::canonicalize_triple;
use crate::majorana::{majorana_points, majorana_polynomial, pair_points, root_to_bloch, symmetrize};
use crate::numerics::{self, eig_hermitian, hermiticity_residual, CMatrix, ProjectiveRoot};
use crate::qubit_values::projector_weak_value_geometric;
use crate::{BlochVector, Error, GeometricBreakdown, NLevelState, PolarComplex, QubitFactor, Result, Tolerances};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The eight Gell-Mann matrices, normalized to `Tr(l_a l_b) = 2 delta_ab`.
pub fn gell_mann() -> [CMatrix; 8] {
    let mut out: [CMatrix; 8] = std::array::from_fn(|_| CMatrix::zeros(3, 3));
    let one = Complex64::new(1.0, 0.0);
    let j = Complex64::new(0.0, 1.0);
    out[0][(0, 1)] = one;
    out[0][(1, 0)] = one;
    out[1][(0, 1)] = -j;
    out[1][(1, 0)] = j;
    out[2][(0, 0)] = one;
    out[2][(1, 1)] = -one;
    out[3][(0, 2)] = one;
    out[3][(2, 0)] = one;
    out[4][(0, 2)] = -j;
    out[4][(2, 0)] = j;
    out[5][(1, 2)] = one;
    out[5][(2, 1)] = one;
    out[6][(1, 2)] = -j;
    out[6][(2, 1)] = j;
    let s = 1.0 / 3f64.sqrt();
    out[7][(0, 0)] = one * s;
    out[7][(1, 1)] = one * s;
    out[7][(2, 2)] = one * (-2.0 * s);
    out
}

/// Unit 8-vector and its operator `sum_k r_k l_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GellMannDirection {
    pub r8: [f64; 8],
    pub operator: CMatrix,
}

impl GellMannDirection {
    pub fn new(r8: [f64; 8]) -> Result<Self> {
        let n = r8.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !n.is_finite() || (n - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!("Gell-Mann direction has norm {n}, expected 1")));
        }
        let operator = gell_mann().iter().zip(r8).fold(CMatrix::zeros(3, 3), |acc, (l, r)| acc + l * Complex64::new(r, 0.0));
        Ok(GellMannDirection { r8, operator })
    }

    /// Inverse of [`GellMannDirection::new`]: `r_k = Tr(A l_k) / 2`.
    pub fn from_operator(a: &CMatrix) -> Result<Self> {
        if a.nrows() != 3 || a.ncols() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: a.nrows() });
        }
        let residual = hermiticity_residual(a);
        if residual > Tolerances::DEFAULT.hermitian {
            return Err(Error::NotHermitian { residual });
        }
        let tr = numerics::trace(a);
        if tr.norm() > 1e-10 {
            return Err(Error::InvalidInput(format!("operator has trace {tr}, expected 0")));
        }
        let r8: [f64; 8] = std::array::from_fn(|k| 0.5 * numerics::trace(&(a * &gell_mann()[k])).re);
        Self::new(r8)
    }
}

/// Which eigenvector of the observable plays the projector role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenChoice {
    #[default]
    Largest,
    /// Position in the ascending eigenvalue list.
    Index(usize),
}

/// `e^{j beta} e^{-j alpha (N-1)/2 A}`, or `e^{-j theta A}` when
/// `generic_theta` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct NLevelModularSpec {
    pub observable: CMatrix,
    pub alpha: f64,
    pub beta: f64,
    pub eigen_choice: EigenChoice,
    pub generic_theta: Option<f64>,
}

impl NLevelModularSpec {
    pub fn new(observable: CMatrix, alpha: f64, beta: f64) -> Self {
        NLevelModularSpec { observable, alpha, beta, eigen_choice: EigenChoice::Largest, generic_theta: None }
    }

    pub fn gell_mann(direction: &GellMannDirection, alpha: f64, beta: f64) -> Self {
        Self::new(direction.operator.clone(), alpha, beta)
    }

    /// The plain evolution `e^{-j theta A}`.
    pub fn evolution(observable: CMatrix, theta: f64) -> Self {
        NLevelModularSpec { generic_theta: Some(theta), ..Self::new(observable, 0.0, 0.0) }
    }

    pub fn dim(&self) -> usize {
        self.observable.nrows()
    }

    /// `(phase, strength)` such that the operator is `e^{j phase} e^{-j strength A}`.
    pub fn phase_and_strength(&self) -> (f64, f64) {
        match self.generic_theta {
            Some(theta) => (0.0, theta),
            None => (self.beta, self.alpha * angular_prefactor(self.dim())),
        }
    }

    pub fn unitary(&self) -> Result<CMatrix> {
        let (phase, strength) = self.phase_and_strength();
        numerics::unitary_exp(&self.observable, phase, strength)
    }
}

/// `(N - 1) / 2`; equal to 1 for a qutrit.
pub fn angular_prefactor(dim: usize) -> f64 {
    (dim as f64 - 1.0) / 2.0
}

pub fn projector(state: &NLevelState) -> CMatrix {
    let v = state.to_vector();
    &v * v.adjoint()
}

fn check_dims(a: &CMatrix, i: usize, f: usize) -> Result<()> {
    if i != f {
        return Err(Error::DimensionMismatch { expected: i, found: f });
    }
    if a.nrows() != i || a.ncols() != i {
        return Err(Error::DimensionMismatch { expected: i, found: a.nrows() });
    }
    Ok(())
}

fn selection_overlap(i: &[Complex64], f: &[Complex64]) -> Result<Complex64> {
    let fi = numerics::inner(f, i);
    let overlap = fi.norm() / (numerics::norm(i) * numerics::norm(f));
    if overlap <= Tolerances::DEFAULT.orthogonal {
        return Err(Error::OrthogonalSelection { overlap });
    }
    Ok(fi)
}

fn apply(a: &CMatrix, v: &[Complex64]) -> Vec<Complex64> {
    (0..a.nrows()).map(|r| (0..v.len()).map(|c| a[(r, c)] * v[c]).sum()).collect()
}

/// `<f|A|i> / <f|i>` on raw amplitudes with arbitrary phase and norm.
pub fn weak_value_amplitudes(i: &[Complex64], a: &CMatrix, f: &[Complex64]) -> Result<Complex64> {
    check_dims(a, i.len(), f.len())?;
    let residual = hermiticity_residual(a);
    if residual > Tolerances::DEFAULT.hermitian {
        return Err(Error::NotHermitian { residual });
    }
    let fi = selection_overlap(i, f)?;
    Ok(numerics::inner(f, &apply(a, i)) / fi)
}

pub fn weak_value_direct(psi_i: &NLevelState, a: &CMatrix, psi_f: &NLevelState) -> Result<PolarComplex> {
    weak_value_amplitudes(psi_i.coefficients(), a, psi_f.coefficients()).map(PolarComplex::from)
}

pub fn modular_value_amplitudes(i: &[Complex64], spec: &NLevelModularSpec, f: &[Complex64]) -> Result<Complex64> {
    check_dims(&spec.observable, i.len(), f.len())?;
    let fi = selection_overlap(i, f)?;
    let u = spec.unitary()?;
    Ok(numerics::inner(f, &apply(&u, i)) / fi)
}

pub fn modular_value_direct(psi_i: &NLevelState, spec: &NLevelModularSpec, psi_f: &NLevelState) -> Result<PolarComplex> {
    modular_value_amplitudes(psi_i.coefficients(), spec, psi_f.coefficients()).map(PolarComplex::from)
}

/// The common Majorana point of a product state, or `None` if the state is
/// entangled.
///
/// The point is the mean of the polynomial roots, which stays accurate when
/// the root is highly degenerate.
pub fn coherent_point(state: &NLevelState) -> Option<BlochVector> {
    let p = majorana_polynomial(state);
    let n = p.len() - 1;
    let root = if p[n].norm() >= p[0].norm() {
        ProjectiveRoot::Finite(-p[n - 1] / (p[n] * n as f64))
    } else {
        let w = -p[1] / (p[0] * n as f64);
        if w == ZERO {
            ProjectiveRoot::AtInfinity
        } else {
            ProjectiveRoot::Finite(w.inv())
        }
    };
    let point = root_to_bloch(&root);
    let (candidate, _) = symmetrize(&vec![point; n]).ok()?;
    (1.0 - candidate.fidelity(state) <= 1e-12).then_some(point)
}

enum Role {
    Product(BlochVector),
    Entangled(Vec<BlochVector>, f64),
}

fn role(state: &NLevelState) -> Result<Role> {
    match coherent_point(state) {
        Some(p) => Ok(Role::Product(p)),
        None => {
            let rep = majorana_points(state)?;
            Ok(Role::Entangled(rep.points, rep.k))
        }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Projector weak value `<f|r><r|i> / <f|i>` from qubit factors, for states
/// of any dimension of which at most one is entangled.
pub fn factorized_projector_weak_value(
    psi_i: &NLevelState,
    psi_r: &NLevelState,
    psi_f: &NLevelState,
) -> Result<(PolarComplex, GeometricBreakdown)> {
    let n = psi_i.dim();
    for s in [psi_r, psi_f] {
        if s.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: s.dim() });
        }
    }
    selection_overlap(psi_i.coefficients(), psi_f.coefficients())?;
    let roles = [role(psi_i)?, role(psi_r)?, role(psi_f)?];
    let entangled: Vec<usize> = (0..3).filter(|&k| matches!(roles[k], Role::Entangled(..))).collect();
    if entangled.len() > 1 {
        return Err(Error::NotCanonical("more than one of the three states is entangled".into()));
    }
    let m = n - 1;
    let point = |r: &Role, k: usize| match r {
        Role::Product(p) => *p,
        Role::Entangled(pts, _) => pts[k],
    };
    let k_ratio = match &roles[1] {
        Role::Entangled(_, k) => (factorial(m) * k).powi(2),
        Role::Product(_) => 1.0,
    };
    let mut factors = Vec::with_capacity(m);
    for k in 0..m {
        let (i, r, f) = (point(&roles[0], k), point(&roles[1], k), point(&roles[2], k));
        let (_, b) = projector_weak_value_geometric(&i, &r, &f)?;
        factors.push(b.factors[0]);
    }
    let breakdown = GeometricBreakdown { factors, dynamical_phase: 0.0, k_ratio };
    Ok((breakdown.recombine(), breakdown))
}

/// Modular value from qubit factors, given the evolved state
/// `psi_s = e^{-j strength A} psi_i` and product states `psi_r` (an
/// eigenvector of `A`) and `psi_f`.
pub fn factorized_modular_value(
    psi_i: &NLevelState,
    psi_s: &NLevelState,
    psi_r: &NLevelState,
    psi_f: &NLevelState,
    dynamical_phase: f64,
) -> Result<(PolarComplex, GeometricBreakdown)> {
    selection_overlap(psi_i.coefficients(), psi_f.coefficients())?;
    let r = coherent_point(psi_r).ok_or_else(|| Error::NotCanonical("projector state is entangled".into()))?;
    let f = coherent_point(psi_f).ok_or_else(|| Error::NotCanonical("postselected state is entangled".into()))?;
    let i_rep = majorana_points(psi_i)?;
    let s_rep = majorana_points(psi_s)?;
    let pairing = pair_points(&i_rep.points, &s_rep.points);
    let mut factors = Vec::with_capacity(pairing.len());
    for (k, &pk) in pairing.iter().enumerate() {
        let (i, s) = (i_rep.points[k], s_rep.points[pk]);
        let overlap = (0.5 * (1.0 + f.dot(&i))).max(0.0).sqrt();
        if overlap <= Tolerances::DEFAULT.orthogonal {
            return Err(Error::OrthogonalSelection { overlap });
        }
        factors.push(QubitFactor {
            modulus_ratio: ((1.0 + f.dot(&s)) / (1.0 + f.dot(&i))).max(0.0).sqrt(),
            solid_angle: crate::bloch::solid_angle_quadrangle(&i, &r, &s, &f)?,
            i_point: i,
            r_point: r,
            s_point: Some(s),
            f_point: f,
        });
    }
    let breakdown = GeometricBreakdown { factors, dynamical_phase, k_ratio: s_rep.k / i_rep.k };
    Ok((breakdown.recombine(), breakdown))
}

/// Geometric projector weak value of a qutrit triple via its canonical frame.
pub fn qutrit_projector_weak_value_geometric(
    psi_i: &NLevelState,
    psi_r: &NLevelState,
    psi_f: &NLevelState,
) -> Result<(PolarComplex, GeometricBreakdown)> {
    selection_overlap(psi_i.coefficients(), psi_f.coefficients())?;
    let t = canonicalize_triple(psi_i, psi_r, psi_f)?;
    factorized_projector_weak_value(&t.psi_i, &t.psi_r, &t.psi_f)
}

/// Selected eigenvector and eigenvalue of the observable.
pub fn eigen_selection(spec: &NLevelModularSpec) -> Result<(NLevelState, f64)> {
    let eig = eig_hermitian(&spec.observable)?;
    let idx = match spec.eigen_choice {
        EigenChoice::Largest => eig.dim() - 1,
        EigenChoice::Index(k) if k < eig.dim() => k,
        EigenChoice::Index(k) => {
            return Err(Error::InvalidInput(format!("eigenvector index {k} out of range for dimension {}", eig.dim())))
        }
    };
    Ok((NLevelState::from_vector(&eig.vector(idx))?, eig.values[idx]))
}

fn evolved(psi_i: &NLevelState, spec: &NLevelModularSpec) -> Result<NLevelState> {
    let (_, strength) = spec.phase_and_strength();
    let u = if spec.dim() == 3 {
        numerics::cayley_hamilton_exp_spin1(&spec.observable, strength)
            .or_else(|_| numerics::unitary_exp(&spec.observable, 0.0, strength))?
    } else {
        numerics::unitary_exp(&spec.observable, 0.0, strength)?
    };
    psi_i.transformed(&u)
}

/// Geometric qutrit modular value via the canonical frame of
/// `(psi_i, psi_r, psi_f)`, with `psi_r` the selected eigenvector.
pub fn qutrit_modular_value_geometric(
    psi_i: &NLevelState,
    spec: &NLevelModularSpec,
    psi_f: &NLevelState,
) -> Result<(PolarComplex, GeometricBreakdown)> {
    check_dims(&spec.observable, psi_i.dim(), psi_f.dim())?;
    if psi_i.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: psi_i.dim() });
    }
    selection_overlap(psi_i.coefficients(), psi_f.coefficients())?;
    let (psi_r, lambda_r) = eigen_selection(spec)?;
    let psi_s = evolved(psi_i, spec)?;
    let t = canonicalize_triple(psi_i, &psi_r, psi_f)?;
    let (phase, strength) = spec.phase_and_strength();
    factorized_modular_value(&t.psi_i, &t.transform(&psi_s)?, &t.psi_r, &t.psi_f, phase - strength * lambda_r)
}

/// Geometric modular value for states already in canonical form: the
/// selected eigenvector and `psi_f` must be product states.
pub fn modular_value_canonical(
    psi_i: &NLevelState,
    spec: &NLevelModularSpec,
    psi_f: &NLevelState,
) -> Result<(PolarComplex, GeometricBreakdown)> {
    check_dims(&spec.observable, psi_i.dim(), psi_f.dim())?;
    let (psi_r, lambda_r) = eigen_selection(spec)?;
    let psi_s = evolved(psi_i, spec)?;
    let (phase, strength) = spec.phase_and_strength();
    factorized_modular_value(psi_i, &psi_s, &psi_r, psi_f, phase - strength * lambda_r)
}

/// Geometric projector weak value for states already in canonical form.
pub fn projector_weak_value_canonical(
    psi_i: &NLevelState,
    psi_r: &NLevelState,
    psi_f: &NLevelState,
) -> Result<(PolarComplex, GeometricBreakdown)> {
    factorized_projector_weak_value(psi_i, psi_r, psi_f)
}

fn check_context(context: &[CMatrix], dim: usize) -> Result<()> {
    const TOL: f64 = 1e-10;
    if context.is_empty() {
        return Err(Error::IncompleteContext("empty projector set".into()));
    }
    let mut sum = CMatrix::zeros(dim, dim);
    for (a, p) in context.iter().enumerate() {
        if p.nrows() != dim || p.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.nrows() });
        }
        if hermiticity_residual(p) > TOL || numerics::max_abs_diff(&(p * p), p) > TOL {
            return Err(Error::IncompleteContext(format!("element {a} is not an orthogonal projector")));
        }
        for (b, q) in context.iter().enumerate().skip(a + 1) {
            if (p * q).iter().any(|z| z.norm() > TOL) {
                return Err(Error::IncompleteContext(format!("elements {a} and {b} are not orthogonal")));
            }
        }
        sum += p;
    }
    if numerics::max_abs_diff(&sum, &numerics::identity(dim)) > TOL {
        return Err(Error::IncompleteContext("projectors do not sum to the identity".into()));
    }
    Ok(())
}

/// ABL probabilities of every outcome of a projective context.
pub fn abl_distribution(psi_i: &NLevelState, context: &[CMatrix], psi_f: &NLevelState) -> Result<Vec<f64>> {
    let dim = psi_i.dim();
    if psi_f.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: psi_f.dim() });
    }
    check_context(context, dim)?;
    let weights: Vec<f64> = context
        .iter()
        .map(|p| numerics::inner(psi_f.coefficients(), &apply(p, psi_i.coefficients())).norm_sqr())
        .collect();
    let total: f64 = weights.iter().sum();
    if total <= Tolerances::DEFAULT.zero {
        return Err(Error::ZeroDenominator);
    }
    Ok(weights.into_iter().map(|w| w / total).collect())
}

pub fn abl_probability(psi_i: &NLevelState, context: &[CMatrix], psi_f: &NLevelState, k: usize) -> Result<f64> {
    let dist = abl_distribution(psi_i, context, psi_f)?;
    dist.get(k)
        .copied()
        .ok_or_else(|| Error::InvalidInput(format!("outcome {k} out of range for a context of {}", dist.len())))
}
