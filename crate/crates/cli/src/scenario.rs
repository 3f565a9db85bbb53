//! Scenario documents: version-1 JSON inputs for every command.
//!
//! States are coefficient arrays of `[re, im]` pairs, Bloch vectors are
//! `[x, y, z]`, matrices are rows of `[re, im]` pairs. A previously emitted
//! result envelope is accepted too; its `scenario` member is used.

use majgeom::{BlochVector, CMatrix, Complex64, NLevelState};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const SCENARIO_VERSION: u32 = 1;
const SILENT_DEVIATION: f64 = 1e-10;
const MAX_DEVIATION: f64 = 1e-8;

pub type StateInput = Vec<[f64; 2]>;
pub type MatrixInput = Vec<Vec<[f64; 2]>>;

/// A qubit given either as a Bloch vector or as two amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QubitInput {
    Bloch([f64; 3]),
    State(StateInput),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitWeakScenario {
    pub version: u32,
    pub i: QubitInput,
    pub r: QubitInput,
    pub f: QubitInput,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitModularScenario {
    pub version: u32,
    pub i: QubitInput,
    pub f: QubitInput,
    /// Rotation axis.
    pub r: [f64; 3],
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QutritWeakScenario {
    pub version: u32,
    pub i: StateInput,
    pub r: StateInput,
    pub f: StateInput,
}

/// `largest` or an eigenvector index in ascending eigenvalue order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EigenInput {
    Index(usize),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QutritModularScenario {
    pub version: u32,
    pub i: StateInput,
    pub f: StateInput,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r8: Option<[f64; 8]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<MatrixInput>,
    pub alpha: f64,
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen: Option<EigenInput>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NLevelDirectScenario {
    pub version: u32,
    pub i: StateInput,
    pub f: StateInput,
    pub observable: MatrixInput,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Evolution strength of `e^{-j theta A}`; overrides `alpha`/`beta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MajoranaScenario {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 3]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridInput {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanScenario {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextInput {
    pub name: String,
    pub projectors: Vec<MatrixInput>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AblScenario {
    pub version: u32,
    pub i: StateInput,
    pub f: StateInput,
    pub contexts: Vec<ContextInput>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmptyScenario {
    pub version: u32,
}

/// Parses `text` as a scenario of type `T`, unwrapping a result envelope
/// when given one.
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    let mut value: Value =
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("scenario is not valid JSON: {e}")))?;
    if value.get("command").is_some() && value.get("results").is_some() {
        value = value.get("scenario").cloned().unwrap_or(Value::Null);
        if value.is_null() {
            return Err(CliError::usage("result envelope carries no scenario"));
        }
    }
    match value.get("version").and_then(Value::as_u64) {
        Some(v) if v == SCENARIO_VERSION as u64 => {}
        Some(v) => return Err(CliError::usage(format!("unsupported scenario version {v}; expected 1"))),
        None => return Err(CliError::usage("scenario is missing an integer `version`")),
    }
    serde_json::from_value(value).map_err(|e| CliError::usage(format!("invalid scenario: {e}")))
}

/// Collects non-fatal load warnings.
#[derive(Debug, Default)]
pub struct Warnings(pub Vec<String>);

impl Warnings {
    fn check_norm(&mut self, what: &str, norm: f64) -> Result<(), CliError> {
        let dev = (norm - 1.0).abs();
        if !norm.is_finite() || dev > MAX_DEVIATION {
            return Err(CliError::usage(format!("{what} has norm {norm}, outside 1 +- {MAX_DEVIATION:e}")));
        }
        if dev > SILENT_DEVIATION {
            self.0.push(format!("{what} renormalized (norm deviation {dev:.3e})"));
        }
        Ok(())
    }

    pub fn state(&mut self, what: &str, s: &StateInput, dim: Option<usize>) -> Result<NLevelState, CliError> {
        if let Some(d) = dim {
            if s.len() != d {
                return Err(CliError::usage(format!("{what} has {} coefficients; expected {d}", s.len())));
            }
        }
        let c: Vec<Complex64> = s.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        self.check_norm(what, norm)?;
        NLevelState::from_coefficients(c).map_err(|e| CliError::usage(format!("{what}: {e}")))
    }

    pub fn bloch(&mut self, what: &str, v: &[f64; 3]) -> Result<BlochVector, CliError> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        self.check_norm(what, norm)?;
        Ok(BlochVector { x: v[0] / norm, y: v[1] / norm, z: v[2] / norm })
    }

    pub fn qubit(&mut self, what: &str, q: &QubitInput) -> Result<BlochVector, CliError> {
        match q {
            QubitInput::Bloch(v) => self.bloch(what, v),
            QubitInput::State(s) => {
                let st = self.state(what, s, Some(2))?;
                let c = st.coefficients();
                Ok(majgeom::bloch::bloch_from_amplitudes(c[0], c[1]))
            }
        }
    }
}

pub fn matrix(what: &str, m: &MatrixInput) -> Result<CMatrix, CliError> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(CliError::usage(format!("{what} must be a non-empty square matrix")));
    }
    Ok(CMatrix::from_fn(n, n, |r, c| Complex64::new(m[r][c][0], m[r][c][1])))
}
