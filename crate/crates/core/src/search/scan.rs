use serde::{Deserialize, Serialize};

use super::{best_and_trace, par_samples, Objective, ObjectiveName, PairData, SearchResult};
use crate::error::{Error, Result};
use crate::families::w_state;
use crate::io::PureStateFile;
use crate::linalg::{haar_random_pure, hermitian_eigenvalues, PureState, RandomStream};

/// Default lower limit on every single-qubit reduction's smaller eigenvalue.
pub const DEFAULT_GENUINE_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    #[serde(flatten)]
    pub search: SearchResult,
    /// Samples that passed the filter.
    pub accepted: u64,
    pub filter_threshold: f64,
    /// `n - 1`.
    pub bound: f64,
    /// `bound - best_value`.
    pub margin: f64,
    /// `sC` of the n-qubit W state.
    pub w_value: f64,
    /// `w_value - best_value`.
    pub gap_to_w: f64,
    /// Set when some sample exceeded `n - 1` by more than 1e-9.
    pub violation: bool,
}

/// Smallest eigenvalue over all single-qubit reductions.
pub fn min_local_eigenvalue(psi: &PureState) -> Result<f64> {
    let mut min = f64::INFINITY;
    for q in 0..psi.n_qubits() {
        let vals = hermitian_eigenvalues(psi.reduced(&[q])?.matrix())?;
        min = min.min(vals[vals.len() - 1]);
    }
    Ok(min)
}

/// Largest `sC` over Haar samples on `n` qubits whose single-qubit
/// reductions all have smaller eigenvalue above `threshold`.
///
/// The filter is a stand-in for genuine multipartite entanglement: it only
/// excludes states that are (nearly) product across some single qubit.
/// A threshold of zero or below disables it. Exceeding `n - 1` is fatal for
/// three qubits (a bound check fails) and only flagged for larger `n`.
pub fn conjecture_scan(n: usize, n_samples: u64, seed: u64, threshold: f64) -> Result<ScanResult> {
    if !(3..=5).contains(&n) {
        return Err(Error::QubitCount(n));
    }
    if n_samples == 0 {
        return Err(Error::InvalidParameter(
            "n_samples must be at least 1".into(),
        ));
    }
    let obj = Objective::new(ObjectiveName::SC, n)?;
    let values = par_samples(n_samples, |k| {
        let psi = haar_random_pure(n, &mut RandomStream::new(seed, k))?;
        if threshold > 0.0 && min_local_eigenvalue(&psi)? <= threshold {
            return Ok(None);
        }
        obj.evaluate(&psi).map(Some)
    })?;
    let accepted = values.iter().flatten().count() as u64;
    let (k, best_value, trace) = best_and_trace(
        values
            .iter()
            .enumerate()
            .filter_map(|(k, v)| v.map(|v| (k as u64, v))),
    )
    .ok_or_else(|| Error::Precondition(format!("no sample passed the filter at {threshold}")))?;
    let best = haar_random_pure(n, &mut RandomStream::new(seed, k))?;
    let bound = (n - 1) as f64;
    let w_value = obj.value(&PairData::of(&w_state(n)?)?);
    Ok(ScanResult {
        search: SearchResult {
            objective: obj.name,
            n_qubits: n,
            best_value,
            best_params: None,
            best_state: PureStateFile::from(&best),
            evaluations: n_samples,
            seed,
            trace,
            histogram: None,
            start_best: None,
        },
        accepted,
        filter_threshold: threshold,
        bound,
        margin: bound - best_value,
        w_value,
        gap_to_w: w_value - best_value,
        violation: best_value > bound + 1e-9,
    })
}

/// LU-invariant distance of a three-qubit pure state from `|W>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeEntry {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sample: Option<u64>,
    #[serde(rename = "sC")]
    pub s_c: f64,
    pub concurrences: [f64; 3],
    /// `max |C_XY - 2/3|` over the three pairs.
    pub pair_deviation: f64,
    /// Largest deviation of a single-qubit spectrum from `{2/3, 1/3}`.
    pub spectrum_deviation: f64,
    /// `sC > 2 - tolerance`.
    pub near_extremal: bool,
}

pub fn probe_state(psi: &PureState, tolerance: f64) -> Result<ProbeEntry> {
    if psi.n_qubits() != 3 {
        return Err(Error::WrongSystemSize {
            expected: 3,
            found: psi.n_qubits(),
        });
    }
    let pairs = PairData::of(psi)?;
    super::check_bounds(&pairs, psi)?;
    let c = [
        pairs.concurrence[0],
        pairs.concurrence[1],
        pairs.concurrence[2],
    ];
    let s_c: f64 = c.iter().sum();
    let pair_deviation = c.iter().map(|x| (x - 2.0 / 3.0).abs()).fold(0.0, f64::max);
    let mut spectrum_deviation: f64 = 0.0;
    for q in 0..3 {
        let vals = hermitian_eigenvalues(psi.reduced(&[q])?.matrix())?;
        spectrum_deviation = spectrum_deviation
            .max((vals[0] - 2.0 / 3.0).abs())
            .max((vals[1] - 1.0 / 3.0).abs());
    }
    Ok(ProbeEntry {
        sample: None,
        s_c,
        concurrences: c,
        pair_deviation,
        spectrum_deviation,
        near_extremal: s_c > 2.0 - tolerance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub tolerance: f64,
    pub samples: u64,
    pub seed: u64,
    /// Largest `sC` among all samples.
    pub best_s_c: f64,
    pub near_extremal: Vec<ProbeEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_pair_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_spectrum_deviation: Option<f64>,
}

/// Collects Haar samples with `sC > 2 - tolerance` and their distance from `|W>`.
pub fn uniqueness_probe(tolerance: f64, n_samples: u64, seed: u64) -> Result<UniquenessReport> {
    if !(tolerance > 0.0 && tolerance < 0.1) {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tolerance} outside (0, 0.1)"
        )));
    }
    let entries = par_samples(n_samples, |k| {
        let psi = haar_random_pure(3, &mut RandomStream::new(seed, k))?;
        let pairs = PairData::of(&psi)?;
        super::check_bounds(&pairs, &psi)?;
        let s_c: f64 = pairs.concurrence.iter().sum();
        if s_c > 2.0 - tolerance {
            let mut e = probe_state(&psi, tolerance)?;
            e.sample = Some(k);
            Ok((s_c, Some(e)))
        } else {
            Ok((s_c, None))
        }
    })?;
    let best_s_c = entries
        .iter()
        .map(|e| e.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let near: Vec<ProbeEntry> = entries.into_iter().filter_map(|e| e.1).collect();
    let max_of = |f: fn(&ProbeEntry) -> f64| near.iter().map(f).reduce(f64::max);
    Ok(UniquenessReport {
        tolerance,
        samples: n_samples,
        seed,
        best_s_c,
        max_pair_deviation: max_of(|e| e.pair_deviation),
        max_spectrum_deviation: max_of(|e| e.spectrum_deviation),
        near_extremal: near,
    })
}
