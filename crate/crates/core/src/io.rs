//! JSON state files and report formatting.
//!
//! Pure state: `{"n_qubits": 3, "amplitudes": [[re, im], ...]}`.
//! Density matrix: `{"dim": 8, "rows": [[[re, im], ...], ...]}`.
//!
//! States are written with shortest round-trip float formatting, so a file
//! written here reads back to a bit-identical state. Reports are rounded to
//! 12 significant digits.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, DensityMatrix, PureState};
use crate::measures::QuantumState;

/// Significant digits kept in report output.
pub const REPORT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PureStateFile {
    pub n_qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<&PureState> for PureStateFile {
    fn from(psi: &PureState) -> Self {
        Self {
            n_qubits: psi.n_qubits(),
            amplitudes: psi.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

impl PureStateFile {
    pub fn into_state(self) -> Result<PureState> {
        let amps = self
            .amplitudes
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        PureState::new(self.n_qubits, amps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityMatrixFile {
    pub dim: usize,
    pub rows: Vec<Vec<[f64; 2]>>,
}

impl From<&DensityMatrix> for DensityMatrixFile {
    fn from(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        Self {
            dim: m.nrows(),
            rows: (0..m.nrows())
                .map(|i| {
                    (0..m.ncols())
                        .map(|j| [m[(i, j)].re, m[(i, j)].im])
                        .collect()
                })
                .collect(),
        }
    }
}

impl DensityMatrixFile {
    pub fn into_state(self) -> Result<DensityMatrix> {
        if self.rows.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: self.rows.len(),
            });
        }
        if let Some(bad) = self.rows.iter().find(|r| r.len() != self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: bad.len(),
            });
        }
        let m = CMatrix::from_fn(self.dim, self.dim, |i, j| {
            let [re, im] = self.rows[i][j];
            Complex64::new(re, im)
        });
        DensityMatrix::new(m)
    }
}

/// Parses either file format, chosen by its keys.
pub fn parse_state(text: &str) -> Result<QuantumState> {
    let value: Value = serde_json::from_str(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::InvalidParameter("state file must be a JSON object".into()))?;
    if obj.contains_key("n_qubits") {
        let file: PureStateFile = serde_json::from_value(value)?;
        Ok(QuantumState::Pure(file.into_state()?))
    } else if obj.contains_key("dim") {
        let file: DensityMatrixFile = serde_json::from_value(value)?;
        Ok(QuantumState::Mixed(file.into_state()?))
    } else {
        Err(Error::InvalidParameter(
            "state file needs either \"n_qubits\" (pure) or \"dim\" (density matrix)".into(),
        ))
    }
}

pub fn state_to_json(state: &QuantumState) -> String {
    let text = match state {
        QuantumState::Pure(psi) => serde_json::to_string_pretty(&PureStateFile::from(psi)),
        QuantumState::Mixed(rho) => serde_json::to_string_pretty(&DensityMatrixFile::from(rho)),
    };
    text.expect("plain numeric data serializes")
}

/// Rounds `x` to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

/// Rounds every float in a JSON tree to `digits` significant digits.
pub fn round_json(value: &mut Value, digits: usize) {
    match value {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n
                .as_f64()
                .and_then(|x| serde_json::Number::from_f64(round_sig(x, digits)))
            {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|v| round_json(v, digits)),
        Value::Object(map) => map.values_mut().for_each(|v| round_json(v, digits)),
        _ => {}
    }
}

/// Pretty JSON with floats rounded to [`REPORT_DIGITS`].
pub fn report_json<T: Serialize>(report: &T) -> Result<String> {
    let mut v = serde_json::to_value(report)?;
    round_json(&mut v, REPORT_DIGITS);
    Ok(serde_json::to_string_pretty(&v)?)
}

/// Single-line variant of [`report_json`].
pub fn report_json_line<T: Serialize>(report: &T) -> Result<String> {
    let mut v = serde_json::to_value(report)?;
    round_json(&mut v, REPORT_DIGITS);
    Ok(serde_json::to_string(&v)?)
}
