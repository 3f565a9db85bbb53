//! Small dense complex linear algebra: projective polynomial roots,
//! Hermitian eigendecomposition and unitary exponentials.
//!
//! Everything here works on matrices of a handful of rows. Eigenvalue
//! iterations are delegated to `nalgebra`; the root finder uses a stable
//! closed form up to degree two and companion-matrix eigenvalues above,
//! followed by Newton polishing.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result, Tolerances};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const J: Complex64 = Complex64::new(0.0, 1.0);

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

/// A root of a polynomial on the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjectiveRoot {
    Finite(Complex64),
    AtInfinity,
}

impl ProjectiveRoot {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ProjectiveRoot::AtInfinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match self {
            ProjectiveRoot::Finite(z) => Some(*z),
            ProjectiveRoot::AtInfinity => None,
        }
    }
}

/// `sum_k conj(a_k) b_k`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Largest entry modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_residual(h: &CMatrix) -> f64 {
    if !h.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(h, &h.adjoint())
}

/// Largest entry modulus of `U^dagger U - I`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(&(u.adjoint() * u), &identity(u.nrows()))
}

pub fn is_unitary(u: &CMatrix, tol: f64) -> bool {
    unitarity_residual(u) <= tol
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Evaluates `sum_k coeffs[k] z^k` by Horner's rule.
pub fn eval_poly(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
}

fn eval_poly_and_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Roots of `sum_k coeffs[k] z^k` (lowest degree first) on the Riemann
/// sphere, with the default zero threshold.
pub fn solve_polynomial(coeffs: &[Complex64]) -> Result<Vec<ProjectiveRoot>> {
    solve_polynomial_with(coeffs, Tolerances::DEFAULT.zero)
}

/// Roots of `sum_k coeffs[k] z^k` (lowest degree first).
///
/// Returns exactly `coeffs.len() - 1` roots. Each leading coefficient with
/// modulus `<= tol_zero` contributes one root at infinity and each trailing
/// one an exact root at zero; the remaining roots are finite and listed first.
pub fn solve_polynomial_with(coeffs: &[Complex64], tol_zero: f64) -> Result<Vec<ProjectiveRoot>> {
    if coeffs.iter().all(|c| c.norm() <= tol_zero) {
        return Err(Error::AllCoefficientsZero);
    }
    let degree = coeffs.len() - 1;
    let mut effective = degree;
    while coeffs[effective].norm() <= tol_zero {
        effective -= 1;
    }
    let low = coeffs.iter().take_while(|c| c.norm() <= tol_zero).count();
    let poly = &coeffs[low..=effective];

    let mut finite: Vec<Complex64> = match effective - low {
        0 => Vec::new(),
        1 => vec![-poly[0] / poly[1]],
        2 => {
            let (z1, z2) = quadratic_roots(poly[2], poly[1], poly[0]);
            vec![z1, z2]
        }
        _ => companion_roots(poly)?,
    };
    finite.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), low));

    let mut roots: Vec<ProjectiveRoot> = finite.into_iter().map(ProjectiveRoot::Finite).collect();
    roots.extend(std::iter::repeat_n(ProjectiveRoot::AtInfinity, degree - effective));
    Ok(roots)
}

/// Roots of `a z^2 + b z + c` with `a != 0`, choosing the sign of the
/// discriminant root that avoids cancellation in `b + sqrt(disc)`.
pub fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> (Complex64, Complex64) {
    let mut sq = (b * b - 4.0 * a * c).sqrt();
    if (b.conj() * sq).re < 0.0 {
        sq = -sq;
    }
    let q = -(b + sq) / 2.0;
    if q == ZERO {
        return (ZERO, ZERO);
    }
    (q / a, c / q)
}

fn companion_roots(poly: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = poly.len() - 1;
    let lead = poly[n];
    let mut companion = CMatrix::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = ONE;
    }
    for i in 0..n {
        companion[(i, n - 1)] = -poly[i] / lead;
    }
    let eigenvalues = nalgebra::Schur::try_new(companion, EIG_EPS, EIG_MAX_ITER)
        .and_then(|s| s.eigenvalues())
        .ok_or_else(|| Error::PreconditionViolated("companion eigenvalue iteration did not converge".into()))?;

    let reversed: Vec<Complex64> = poly.iter().rev().copied().collect();
    Ok(eigenvalues.iter().map(|&z| polish_root(poly, &reversed, z)).collect())
}

/// A few guarded Newton steps, on `p(z)` inside the unit disk and on the
/// reversed polynomial in `w = 1/z` outside it.
fn polish_root(poly: &[Complex64], reversed: &[Complex64], z: Complex64) -> Complex64 {
    let inside = z.norm() <= 1.0;
    let (coeffs, mut x) = if inside { (poly, z) } else { (reversed, z.inv()) };
    let mut residual = eval_poly(coeffs, x).norm();
    for _ in 0..4 {
        let (p, dp) = eval_poly_and_derivative(coeffs, x);
        if dp == ZERO || residual == 0.0 {
            break;
        }
        let candidate = x - p / dp;
        let r = eval_poly(coeffs, candidate).norm();
        if !(r < residual) {
            break;
        }
        x = candidate;
        residual = r;
    }
    if inside {
        x
    } else {
        x.inv()
    }
}

/// Eigenvalues in ascending order with orthonormal, gauge-fixed eigenvectors
/// stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

pub fn eig_hermitian(h: &CMatrix) -> Result<HermitianEigen> {
    eig_hermitian_with(h, &Tolerances::DEFAULT)
}

pub fn eig_hermitian_with(h: &CMatrix, tol: &Tolerances) -> Result<HermitianEigen> {
    let residual = hermiticity_residual(h);
    if residual > tol.hermitian {
        return Err(Error::NotHermitian { residual });
    }
    let sym = (h + h.adjoint()).map(|z| z * 0.5);
    let eig = nalgebra::SymmetricEigen::try_new(sym, EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::PreconditionViolated("Hermitian eigenvalue iteration did not converge".into()))?;

    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut vectors = CMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (col, &k) in order.iter().enumerate() {
        values.push(eig.eigenvalues[k]);
        let mut v = eig.eigenvectors.column(k).into_owned();
        let v_norm = v.norm();
        v /= Complex64::new(v_norm, 0.0);
        if let Some(pivot) = v.iter().find(|z| z.norm() > tol.zero) {
            let phase = Complex64::from_polar(1.0, -pivot.arg());
            v *= phase;
        }
        vectors.set_column(col, &v);
    }
    Ok(HermitianEigen { values, vectors })
}

/// `e^{j phase} e^{-j strength H}` for Hermitian `H`, built from its
/// eigendecomposition.
pub fn unitary_exp(h: &CMatrix, phase: f64, strength: f64) -> Result<CMatrix> {
    let eig = eig_hermitian(h)?;
    Ok(exp_from_eigen(&eig, phase, strength))
}

pub(crate) fn exp_from_eigen(eig: &HermitianEigen, phase: f64, strength: f64) -> CMatrix {
    let diag = CVector::from_iterator(
        eig.dim(),
        eig.values.iter().map(|&l| Complex64::from_polar(1.0, phase - strength * l)),
    );
    &eig.vectors * CMatrix::from_diagonal(&diag) * eig.vectors.adjoint()
}

/// `e^{-j alpha lambda} = 1 - j sin(alpha) lambda + (cos(alpha) - 1) lambda^2`,
/// valid for a traceless 3x3 operator with `Tr lambda^2 = 2` and vanishing
/// determinant (spectrum `{-1, 0, 1}`).
pub fn cayley_hamilton_exp_spin1(lambda: &CMatrix, alpha: f64) -> Result<CMatrix> {
    const SPECTRAL_TOL: f64 = 1e-9;
    if lambda.nrows() != 3 || lambda.ncols() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: lambda.nrows() });
    }
    let tr = trace(lambda);
    if tr.norm() > SPECTRAL_TOL {
        return Err(Error::PreconditionViolated(format!("operator is not traceless (Tr = {tr})")));
    }
    let sq = lambda * lambda;
    let tr_sq = trace(&sq);
    if (tr_sq - 2.0).norm() > SPECTRAL_TOL {
        return Err(Error::PreconditionViolated(format!("Tr lambda^2 = {tr_sq}, expected 2")));
    }
    let det = lambda.clone().determinant();
    if det.norm() > SPECTRAL_TOL {
        return Err(Error::PreconditionViolated(format!("det lambda = {det}, expected 0")));
    }
    let (s, c) = alpha.sin_cos();
    Ok(identity(3) - lambda * (J * s) + sq * Complex64::new(c - 1.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
    }

    fn spin1_x() -> CMatrix {
        let s = FRAC_1_SQRT_2;
        CMatrix::from_row_slice(3, 3, &[ZERO, c(s, 0.0), ZERO, c(s, 0.0), ZERO, c(s, 0.0), ZERO, c(s, 0.0), ZERO])
    }

    #[test]
    fn basis_qutrit_roots() {
        let r = solve_polynomial(&[c(FRAC_1_SQRT_2, 0.0), ZERO, ZERO]).unwrap();
        assert_eq!(r, vec![ProjectiveRoot::AtInfinity, ProjectiveRoot::AtInfinity]);

        let r = solve_polynomial(&[ZERO, c(-1.0, 0.0), ZERO]).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].finite().unwrap().norm(), 0.0);
        assert!(r[1].is_infinite());

        let r = solve_polynomial(&[ZERO, ZERO, c(FRAC_1_SQRT_2, 0.0)]).unwrap();
        assert!(r.iter().all(|z| z.finite().unwrap().norm() == 0.0));
    }

    #[test]
    fn negligible_low_coefficients_give_exact_zero_roots() {
        // z^2 (z - 1) with noise in the constant term
        let r = solve_polynomial(&[c(1e-14, 0.0), ZERO, c(-1.0, 0.0), ONE]).unwrap();
        let zeros = r.iter().filter(|z| z.finite() == Some(ZERO)).count();
        assert_eq!(zeros, 2);
        assert!(r.iter().any(|z| (z.finite().unwrap() - 1.0).norm() < 1e-14));
    }

    #[test]
    fn all_zero_coefficients() {
        assert_eq!(solve_polynomial(&[ZERO, c(1e-14, 0.0)]), Err(Error::AllCoefficientsZero));
    }

    #[test]
    fn cubic_roots_are_polished() {
        // (z - 1)(z + 2j)(z - 0.5 + 0.5j)
        let roots = [c(1.0, 0.0), c(0.0, -2.0), c(0.5, -0.5)];
        let mut coeffs = vec![ONE];
        for r in roots {
            let mut next = vec![ZERO; coeffs.len() + 1];
            for (k, a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            coeffs = next;
        }
        let found = solve_polynomial(&coeffs).unwrap();
        for r in roots {
            let best = found.iter().map(|z| (z.finite().unwrap() - r).norm()).fold(f64::MAX, f64::min);
            assert!(best < 1e-13, "{best}");
        }
    }

    #[test]
    fn quadratic_avoids_cancellation() {
        let (z1, z2) = quadratic_roots(ONE, c(-1e8, 0.0), ONE);
        let small = if z1.norm() < z2.norm() { z1 } else { z2 };
        assert!((small.re - 1e-8).abs() < 1e-22);
    }

    #[test]
    fn pauli_and_spin1_spectra() {
        let e = eig_hermitian(&sigma_z()).unwrap();
        assert_eq!(e.values, vec![-1.0, 1.0]);
        let e = eig_hermitian(&spin1_x()).unwrap();
        for (got, want) in e.values.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        for k in 0..3 {
            let v = e.vector(k);
            let pivot = v.iter().find(|z| z.norm() > 1e-12).unwrap();
            assert!(pivot.im.abs() < 1e-14 && pivot.re > 0.0);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = CMatrix::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn exponential_special_cases() {
        let sz = sigma_z();
        let u = unitary_exp(&sz, 0.0, 0.0).unwrap();
        assert!(max_abs_diff(&u, &identity(2)) < 1e-15);
        let half = unitary_exp(&sz, 0.0, PI / 2.0).unwrap();
        assert!(max_abs_diff(&half, &(sz.clone() * -J)) < 1e-15);
        let full = unitary_exp(&sz, 0.0, PI).unwrap();
        assert!(max_abs_diff(&full, &(-identity(2))) < 1e-15);
    }

    #[test]
    fn cayley_hamilton_matches_eigen_route() {
        let l = spin1_x();
        for alpha in [0.0, 0.7, 2.0 * PI, -1.3] {
            let ch = cayley_hamilton_exp_spin1(&l, alpha).unwrap();
            let ev = unitary_exp(&l, 0.0, alpha).unwrap();
            assert!(max_abs_diff(&ch, &ev) < 1e-12);
            assert!(is_unitary(&ch, 1e-12));
        }
        let full = cayley_hamilton_exp_spin1(&l, 2.0 * PI).unwrap();
        assert!(max_abs_diff(&full, &identity(3)) < 1e-14);
    }

    #[test]
    fn cayley_hamilton_names_failed_condition() {
        let diag = CMatrix::from_diagonal(&CVector::from_vec(vec![ONE, ONE, c(-2.0, 0.0)]));
        match cayley_hamilton_exp_spin1(&diag, 0.3) {
            Err(Error::PreconditionViolated(msg)) => assert!(msg.contains("Tr lambda^2")),
            other => panic!("{other:?}"),
        }
        let shifted = spin1_x() + identity(3);
        match cayley_hamilton_exp_spin1(&shifted, 0.3) {
            Err(Error::PreconditionViolated(msg)) => assert!(msg.contains("traceless")),
            other => panic!("{other:?}"),
        }
    }
}
