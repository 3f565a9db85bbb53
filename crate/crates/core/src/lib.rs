//! Weak and modular values of pre- and postselected discrete quantum systems,
//! evaluated two ways: directly from Hilbert-space inner products, and
//! geometrically from Bloch-sphere vectors through the Majorana stellar
//! representation.
//!
//! The geometric route factors an `N`-level value into `N - 1` qubit
//! contributions. The modulus is a product of projection-probability ratios
//! and the argument a sum of oriented solid angles on the Bloch sphere.
//!
//! Module map:
//!
//! - [`numerics`]: polynomial roots, Hermitian eigenproblems, unitary exponentials.
//! - [`bloch`]: Bloch vectors, qubit states, solid angles, Rodrigues rotation.
//! - [`qubit_values`]: two-level weak and modular values.
//! - [`majorana`]: `N`-level states to Majorana points and back.
//! - [`canonical`]: the unitary pair that canonicalizes a qutrit triple.
//! - [`nlevel_values`]: `N`-level weak/modular values, Gell-Mann operators, ABL rule.
//! - [`experiments`]: the weak-value singularity scan and the three-box report.

pub mod bloch;
pub mod canonical;
mod error;
pub mod experiments;
pub mod majorana;
pub mod nlevel_values;
pub mod numerics;
mod polar;
pub mod qubit_values;
pub mod sampling;

pub use bloch::{BlochVector, QubitState};
pub use error::{Error, Result};
pub use majorana::{NLevelState, SymmetricRepresentation};
pub use numerics::{CMatrix, CVector, ProjectiveRoot};
pub use polar::{angle_distance, wrap_pi, GeometricBreakdown, PolarComplex, QubitFactor};

pub use num_complex::Complex64;

/// Largest number of levels accepted for an [`NLevelState`].
pub const MAX_LEVELS: usize = 8;

/// Numerical thresholds shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Values at or below this modulus are treated as zero
    /// (vanishing polynomial coefficients, degenerate solid angles).
    pub zero: f64,
    /// Agreement threshold between two routes to the same quantity.
    pub compare: f64,
    /// Maximum entry of `U^dagger U - I` accepted as unitary.
    pub unitary: f64,
    /// Maximum entry of `H - H^dagger` accepted as Hermitian.
    pub hermitian: f64,
    /// `|<f|i>|` at or below this raises an orthogonal-selection error.
    pub orthogonal: f64,
    /// Discriminant moduli up to this value are flagged near-degenerate.
    pub near_degenerate: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        zero: 1e-12,
        compare: 1e-9,
        unitary: 1e-10,
        hermitian: 1e-10,
        orthogonal: 1e-10,
        near_degenerate: 1e-8,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
