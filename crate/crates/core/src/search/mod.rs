//! Haar Monte Carlo, multistart family optimization, stationarity probes and
//! the n-qubit `sC` scan.
//!
//! Sample `k` of every randomized search draws from `RandomStream::new(seed, k)`.
//! Work is spread over rayon's pool but results are merged in index order,
//! so output is identical for any thread count.

mod nelder_mead;
mod optimize;
mod scan;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::PureStateFile;
use crate::linalg::{haar_random_pure, PureState, RandomStream, MAX_QUBITS};
use crate::measures::{
    c_max, eof_from_concurrence, pair_concurrences, LIU_CONC_BOUND, LIU_EOF_BOUND, SC_BOUND,
};

pub use nelder_mead::{nelder_mead_max, NelderMeadOptions, NelderMeadOutcome};
pub use optimize::{optimize_family, stationarity_check, OptimizeFamily, DEFAULT_STARTS};
pub use scan::{
    conjecture_scan, min_local_eigenvalue, probe_state, uniqueness_probe, ProbeEntry, ScanResult,
    UniquenessReport, DEFAULT_GENUINE_THRESHOLD,
};

/// Width of histogram bins.
pub const HISTOGRAM_BIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ObjectiveName {
    #[serde(rename = "sC")]
    SC,
    #[serde(rename = "sE")]
    SE,
    #[serde(rename = "eof_pair_sum")]
    EofPairSum,
    #[serde(rename = "conc_pair_sum")]
    ConcPairSum,
}

impl ObjectiveName {
    pub const ALL: [ObjectiveName; 4] = [Self::SC, Self::SE, Self::EofPairSum, Self::ConcPairSum];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::SC => "sC",
            Self::SE => "sE",
            Self::EofPairSum => "eof_pair_sum",
            Self::ConcPairSum => "conc_pair_sum",
        }
    }
}

impl fmt::Display for ObjectiveName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ObjectiveName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|o| o.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|o| o.as_str()).collect();
                Error::InvalidParameter(format!(
                    "unknown objective '{s}'; expected one of: {}",
                    names.join(", ")
                ))
            })
    }
}

/// A scalar built from the pair measures of an `n`-qubit pure state.
///
/// `sC` and `sE` sum over every pair; the two pair sums take the pairs that
/// contain qubit 0 (`E_AB + E_AC` and `C_AB + C_AC` for three qubits).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Objective {
    pub name: ObjectiveName,
    pub n_qubits: usize,
}

impl Objective {
    pub fn new(name: ObjectiveName, n_qubits: usize) -> Result<Self> {
        if !(2..=MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::QubitCount(n_qubits));
        }
        Ok(Self { name, n_qubits })
    }

    pub fn three(name: ObjectiveName) -> Self {
        Self { name, n_qubits: 3 }
    }

    pub fn value(&self, pairs: &PairData) -> f64 {
        let n = pairs.n_qubits;
        match self.name {
            ObjectiveName::SC => pairs.concurrence.iter().sum(),
            ObjectiveName::SE => pairs.eof.iter().sum(),
            // pairs (0, j) come first in lexicographic order
            ObjectiveName::EofPairSum => pairs.eof[..n - 1].iter().sum(),
            ObjectiveName::ConcPairSum => pairs.concurrence[..n - 1].iter().sum(),
        }
    }

    /// Evaluates the objective after checking the state's size and, for three
    /// qubits, every bound on the pair measures.
    pub fn evaluate(&self, psi: &PureState) -> Result<f64> {
        if psi.n_qubits() != self.n_qubits {
            return Err(Error::WrongSystemSize {
                expected: self.n_qubits,
                found: psi.n_qubits(),
            });
        }
        let pairs = PairData::of(psi)?;
        if self.n_qubits == 3 {
            check_bounds(&pairs, psi)?;
        }
        Ok(self.value(&pairs))
    }
}

/// Pair concurrences and EoFs of a pure state, lexicographic pair order.
#[derive(Debug, Clone, PartialEq)]
pub struct PairData {
    pub n_qubits: usize,
    pub concurrence: Vec<f64>,
    pub eof: Vec<f64>,
}

impl PairData {
    pub fn of(psi: &PureState) -> Result<Self> {
        let concurrence = pair_concurrences(psi)?;
        let eof = concurrence
            .iter()
            .map(|&c| eof_from_concurrence(c))
            .collect();
        Ok(Self {
            n_qubits: psi.n_qubits(),
            concurrence,
            eof,
        })
    }
}

/// Slack allowed above each three-qubit bound before a search aborts.
pub mod slack {
    pub const C_MAX: f64 = 1e-6;
    pub const SC: f64 = 1e-9;
    pub const LIU_EOF: f64 = 1e-4;
    pub const LIU_CONC: f64 = 1e-6;
}

fn dump(psi: &PureState) -> String {
    serde_json::to_string(&PureStateFile::from(psi)).expect("plain numeric data serializes")
}

/// Fails with [`Error::BoundViolation`] if a three-qubit pure state exceeds
/// any of the `sE`, `sC` or pivot pair-sum bounds.
pub fn check_bounds(pairs: &PairData, psi: &PureState) -> Result<()> {
    let c = &pairs.concurrence;
    let e = &pairs.eof;
    // pivot X pairs: A -> (AB, AC), B -> (AB, BC), C -> (AC, BC)
    let pivot_max = |v: &[f64]| (v[0] + v[1]).max(v[0] + v[2]).max(v[1] + v[2]);
    let checks = [
        ("sE <= c_max", e.iter().sum::<f64>(), c_max() + slack::C_MAX),
        ("sC <= 2", c.iter().sum::<f64>(), SC_BOUND + slack::SC),
        (
            "E_XY + E_XZ <= 1.20175",
            pivot_max(e),
            LIU_EOF_BOUND + slack::LIU_EOF,
        ),
        (
            "C_XY + C_XZ <= sqrt(2)",
            pivot_max(c),
            LIU_CONC_BOUND + slack::LIU_CONC,
        ),
    ];
    for (bound, value, limit) in checks {
        if value > limit {
            return Err(Error::BoundViolation {
                bound,
                value,
                limit,
                state: dump(psi),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: u64,
    pub best: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    /// Lower edge of the bin.
    pub value: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub objective: ObjectiveName,
    pub n_qubits: usize,
    pub best_value: f64,
    /// Family parameters of the optimum (family searches only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub best_params: Option<serde_json::Value>,
    pub best_state: PureStateFile,
    /// Samples drawn, or objective evaluations for optimizer runs.
    pub evaluations: u64,
    pub seed: u64,
    /// Best-so-far, recorded each time it improves (sampling) or after each
    /// start (optimization).
    pub trace: Vec<TracePoint>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub histogram: Option<Vec<HistogramBin>>,
    /// Best value among the optimizer's starting points.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub start_best: Option<f64>,
}

impl SearchResult {
    /// `value,count` rows with a leading comment carrying the seed.
    pub fn histogram_csv(&self) -> Option<String> {
        let bins = self.histogram.as_ref()?;
        let mut out = format!(
            "# objective={} n_qubits={} seed={} samples={} bin_width={}\nvalue,count\n",
            self.objective, self.n_qubits, self.seed, self.evaluations, HISTOGRAM_BIN
        );
        for b in bins {
            out.push_str(&format!("{:.3},{}\n", b.value, b.count));
        }
        Some(out)
    }
}

pub(crate) fn histogram(values: impl Iterator<Item = f64>) -> Vec<HistogramBin> {
    let mut bins: BTreeMap<i64, u64> = BTreeMap::new();
    for v in values {
        *bins.entry((v / HISTOGRAM_BIN).floor() as i64).or_default() += 1;
    }
    bins.into_iter()
        .map(|(k, count)| HistogramBin {
            value: k as f64 * HISTOGRAM_BIN,
            count,
        })
        .collect()
}

/// Evaluates `f` on samples `0..n` in parallel and returns the results in
/// index order; the first failing index wins.
pub fn par_samples<T: Send>(n: u64, f: impl Fn(u64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    let results: Vec<Result<T>> = (0..n).into_par_iter().map(f).collect();
    results.into_iter().collect()
}

/// Running maximum with first-index tie-breaking.
pub(crate) fn best_and_trace(
    values: impl Iterator<Item = (u64, f64)>,
) -> Option<(u64, f64, Vec<TracePoint>)> {
    let mut best: Option<(u64, f64)> = None;
    let mut trace = Vec::new();
    for (k, v) in values {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((k, v));
            trace.push(TracePoint {
                iteration: k,
                best: v,
            });
        }
    }
    best.map(|(k, v)| (k, v, trace))
}

/// Largest objective value over `n_samples` Haar-random pure states.
///
/// Every sample of a three-qubit objective is also checked against all
/// pair-measure bounds; the first violation aborts with the offending state.
pub fn monte_carlo_max(
    obj: Objective,
    n_samples: u64,
    seed: u64,
    with_histogram: bool,
) -> Result<SearchResult> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter(
            "n_samples must be at least 1".into(),
        ));
    }
    let n = obj.n_qubits;
    let values = par_samples(n_samples, |k| {
        let psi = haar_random_pure(n, &mut RandomStream::new(seed, k))?;
        obj.evaluate(&psi)
    })?;
    let (k, best_value, trace) = best_and_trace(
        values
            .iter()
            .copied()
            .enumerate()
            .map(|(k, v)| (k as u64, v)),
    )
    .expect("at least one sample");
    let best = haar_random_pure(n, &mut RandomStream::new(seed, k))?;
    Ok(SearchResult {
        objective: obj.name,
        n_qubits: n,
        best_value,
        best_params: None,
        best_state: PureStateFile::from(&best),
        evaluations: n_samples,
        seed,
        trace,
        histogram: with_histogram.then(|| histogram(values.iter().copied())),
        start_best: None,
    })
}
