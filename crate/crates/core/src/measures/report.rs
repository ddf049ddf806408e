use serde::{Deserialize, Serialize};

use super::{
    c_max, pair_measures, pure_concurrence, Bipartition, LIU_CONC_BOUND, LIU_EOF_BOUND, SC_BOUND,
};
use crate::error::{Error, Result};
use crate::linalg::{partial_trace, DensityMatrix, PureState};

/// Qubit pairs in report order: AB, AC, BC.
pub const PAIRS: [[usize; 2]; 3] = [[0, 1], [0, 2], [1, 2]];

/// Either kind of input accepted by [`pairwise_report`].
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn n_qubits(&self) -> Option<usize> {
        match self {
            QuantumState::Pure(psi) => Some(psi.n_qubits()),
            QuantumState::Mixed(rho) => rho.n_qubits(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairMeasures {
    pub concurrence: f64,
    pub eof: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairTable {
    #[serde(rename = "AB")]
    pub ab: PairMeasures,
    #[serde(rename = "AC")]
    pub ac: PairMeasures,
    #[serde(rename = "BC")]
    pub bc: PairMeasures,
}

impl PairTable {
    pub fn as_array(&self) -> [PairMeasures; 3] {
        [self.ab, self.ac, self.bc]
    }

    /// The two pairs that contain `pivot`.
    fn around(&self, pivot: usize) -> [PairMeasures; 2] {
        match pivot {
            0 => [self.ab, self.ac],
            1 => [self.ab, self.bc],
            _ => [self.ac, self.bc],
        }
    }
}

/// `C²_{X|rest} - C²_{X,Y} - C²_{X,Z}` for each pivot X.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangleResiduals {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

/// Bound minus achieved value; negative means the bound is violated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Margins {
    /// `c_max - sE`.
    pub c_max: f64,
    /// `2 - sC`.
    #[serde(rename = "sC2")]
    pub s_c2: f64,
    /// `1.20175 - max over pivots of (E_XY + E_XZ)`.
    pub liu_eof: f64,
    /// `√2 - max over pivots of (C_XY + C_XZ)`.
    pub liu_conc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub pairs: PairTable,
    #[serde(rename = "sC")]
    pub s_c: f64,
    #[serde(rename = "sE")]
    pub s_e: f64,
    /// Sum of the six one-way discords; defined for pure inputs only.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub discord_sum: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tangle_residuals: Option<TangleResiduals>,
    pub margins: Margins,
}

impl MeasureReport {
    fn from_pairs(pairs: PairTable, residuals: Option<TangleResiduals>) -> Self {
        let all = pairs.as_array();
        let s_c = all.iter().map(|p| p.concurrence).sum::<f64>();
        let s_e = all.iter().map(|p| p.eof).sum::<f64>();
        let liu_eof = (0..3)
            .map(|q| pairs.around(q).iter().map(|p| p.eof).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        let liu_conc = (0..3)
            .map(|q| pairs.around(q).iter().map(|p| p.concurrence).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        let is_pure = residuals.is_some();
        Self {
            pairs,
            s_c,
            s_e,
            // pure tripartite states: E_XY + E_XZ = δ_XY + δ_XZ for every pivot X,
            // so the six ordered discords sum to twice sE
            discord_sum: is_pure.then_some(2.0 * s_e),
            tangle_residuals: residuals,
            margins: Margins {
                c_max: c_max() - s_e,
                s_c2: SC_BOUND - s_c,
                liu_eof: LIU_EOF_BOUND - liu_eof,
                liu_conc: LIU_CONC_BOUND - liu_conc,
            },
        }
    }

    /// `E_XY + E_XZ` for pivot A.
    pub fn eof_pair_sum(&self) -> f64 {
        self.pairs.ab.eof + self.pairs.ac.eof
    }

    /// `C_XY + C_XZ` for pivot A.
    pub fn conc_pair_sum(&self) -> f64 {
        self.pairs.ab.concurrence + self.pairs.ac.concurrence
    }
}

fn require_three(found: usize) -> Result<()> {
    if found != 3 {
        return Err(Error::WrongSystemSize { expected: 3, found });
    }
    Ok(())
}

fn table(reductions: [DensityMatrix; 3]) -> Result<PairTable> {
    let [ab, ac, bc] = reductions;
    Ok(PairTable {
        ab: pair_measures(&ab)?,
        ac: pair_measures(&ac)?,
        bc: pair_measures(&bc)?,
    })
}

pub fn pairwise_report_pure(psi: &PureState) -> Result<MeasureReport> {
    require_three(psi.n_qubits())?;
    let reductions = [
        psi.reduced(&PAIRS[0])?,
        psi.reduced(&PAIRS[1])?,
        psi.reduced(&PAIRS[2])?,
    ];
    let pairs = table(reductions)?;
    let residual = |pivot: usize| -> Result<f64> {
        let whole = pure_concurrence(psi, &Bipartition::single(3, pivot)?)?;
        let [x, y] = pairs.around(pivot);
        Ok(whole * whole - x.concurrence.powi(2) - y.concurrence.powi(2))
    };
    let residuals = TangleResiduals {
        a: residual(0)?,
        b: residual(1)?,
        c: residual(2)?,
    };
    Ok(MeasureReport::from_pairs(pairs, Some(residuals)))
}

/// Report for a three-qubit mixed state.
///
/// Pair measures are those of the two-qubit reductions; no three-party
/// convex roof is evaluated, and discord and tangle residuals are absent.
pub fn pairwise_report_mixed(rho: &DensityMatrix) -> Result<MeasureReport> {
    if rho.dim() != 8 {
        return Err(Error::WrongSystemSize {
            expected: 3,
            found: rho.n_qubits().unwrap_or(0),
        });
    }
    let reductions = [
        partial_trace(rho, 3, &PAIRS[0])?,
        partial_trace(rho, 3, &PAIRS[1])?,
        partial_trace(rho, 3, &PAIRS[2])?,
    ];
    Ok(MeasureReport::from_pairs(table(reductions)?, None))
}

pub fn pairwise_report(state: &QuantumState) -> Result<MeasureReport> {
    match state {
        QuantumState::Pure(psi) => pairwise_report_pure(psi),
        QuantumState::Mixed(rho) => pairwise_report_mixed(rho),
    }
}

/// CKW residual `C²_{pivot|rest} - C²_{pivot,X} - C²_{pivot,Y}` of a pure three-qubit state.
pub fn ckw_residual(psi: &PureState, pivot: usize) -> Result<f64> {
    require_three(psi.n_qubits())?;
    if pivot >= 3 {
        return Err(Error::QubitOutOfRange {
            index: pivot,
            n_qubits: 3,
        });
    }
    let whole = pure_concurrence(psi, &Bipartition::single(3, pivot)?)?;
    let mut residual = whole * whole;
    for other in (0..3).filter(|&q| q != pivot) {
        let rho = psi.reduced(&[pivot, other])?;
        residual -= super::wootters_concurrence(&rho)?.powi(2);
    }
    Ok(residual)
}

/// Concurrence of every qubit pair `(i < j)` of a pure state, in lexicographic order.
pub fn pair_concurrences(psi: &PureState) -> Result<Vec<f64>> {
    pair_values(psi, super::wootters_concurrence)
}

/// EoF of every qubit pair `(i < j)` of a pure state, in lexicographic order.
pub fn pair_eofs(psi: &PureState) -> Result<Vec<f64>> {
    pair_values(psi, super::eof_two_qubit)
}

fn pair_values(psi: &PureState, f: impl Fn(&DensityMatrix) -> Result<f64>) -> Result<Vec<f64>> {
    let n = psi.n_qubits();
    if n < 2 {
        return Err(Error::WrongSystemSize {
            expected: 2,
            found: n,
        });
    }
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(f(&psi.reduced(&[i, j])?)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CMatrix, RandomStream};
    use crate::measures::binary_entropy;
    use num_complex::Complex64;

    fn state(entries: &[(usize, f64)]) -> PureState {
        let mut a = vec![Complex64::new(0.0, 0.0); 8];
        for &(i, v) in entries {
            a[i] = Complex64::new(v, 0.0);
        }
        PureState::normalized(3, a).unwrap()
    }

    #[test]
    fn ghz_report_is_zero() {
        let r = pairwise_report_pure(&state(&[(0, 1.0), (7, 1.0)])).unwrap();
        for p in r.pairs.as_array() {
            assert!(p.concurrence < 1e-12 && p.eof < 1e-12);
        }
        assert!(r.s_c < 1e-12 && r.s_e < 1e-12);
        assert!((r.tangle_residuals.unwrap().a - 1.0).abs() < 1e-12);
    }

    #[test]
    fn w_report() {
        let r = pairwise_report_pure(&state(&[(1, 1.0), (2, 1.0), (4, 1.0)])).unwrap();
        assert!((r.s_c - 2.0).abs() < 1e-9);
        let h = binary_entropy(0.5 + 5f64.sqrt() / 6.0).unwrap();
        assert!((r.s_e - 3.0 * h).abs() < 1e-9);
        assert!((r.s_e - 1.650120).abs() < 1e-4);
        assert!((r.discord_sum.unwrap() - 2.0 * r.s_e).abs() < 1e-12);
        assert!(r.margins.c_max.abs() < 1e-9);
        assert!(r.margins.s_c2.abs() < 1e-9);
        let t = r.tangle_residuals.unwrap();
        assert!(t.a.abs() < 1e-8 && t.b.abs() < 1e-8 && t.c.abs() < 1e-8);
    }

    #[test]
    fn w_wbar_even_mixture() {
        let w = state(&[(1, 1.0), (2, 1.0), (4, 1.0)]);
        let wbar = state(&[(6, 1.0), (5, 1.0), (3, 1.0)]);
        let rho = DensityMatrix::mixture(&[(0.5, &w), (0.5, &wbar)]).unwrap();
        let r = pairwise_report(&QuantumState::Mixed(rho)).unwrap();
        for p in r.pairs.as_array() {
            assert!((p.concurrence - 1.0 / 3.0).abs() < 1e-8);
        }
        assert!((r.s_c - 1.0).abs() < 1e-8);
        assert!(r.discord_sum.is_none() && r.tangle_residuals.is_none());
    }

    #[test]
    fn report_sums_match_pairs() {
        for k in 0..50 {
            let psi = crate::linalg::haar_random_pure(3, &mut RandomStream::new(9, k)).unwrap();
            let r = pairwise_report_pure(&psi).unwrap();
            let pairs = r.pairs.as_array();
            assert!((r.s_c - pairs.iter().map(|p| p.concurrence).sum::<f64>()).abs() <= 1e-12);
            assert!((r.s_e - pairs.iter().map(|p| p.eof).sum::<f64>()).abs() <= 1e-12);
            assert!((r.discord_sum.unwrap() - 2.0 * r.s_e).abs() <= 1e-12);
        }
    }

    #[test]
    fn wrong_size_rejected() {
        let two = PureState::basis(2, 0).unwrap();
        assert!(matches!(
            pairwise_report_pure(&two),
            Err(Error::WrongSystemSize {
                expected: 3,
                found: 2
            })
        ));
        let rho = DensityMatrix::new(CMatrix::identity(4, 4) * Complex64::new(0.25, 0.0)).unwrap();
        assert!(matches!(
            pairwise_report_mixed(&rho),
            Err(Error::WrongSystemSize { .. })
        ));
    }

    #[test]
    fn ckw_examples() {
        let ghz = state(&[(0, 1.0), (7, 1.0)]);
        assert!((ckw_residual(&ghz, 0).unwrap() - 1.0).abs() < 1e-12);
        let w = state(&[(1, 1.0), (2, 1.0), (4, 1.0)]);
        assert!(ckw_residual(&w, 0).unwrap().abs() < 1e-8);
        let product = PureState::basis(3, 5).unwrap();
        for pivot in 0..3 {
            assert!(ckw_residual(&product, pivot).unwrap().abs() < 1e-12);
        }
        assert!(matches!(
            ckw_residual(&w, 3),
            Err(Error::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn json_keys() {
        let r = pairwise_report_pure(&state(&[(1, 1.0), (2, 1.0), (4, 1.0)])).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert!(v["pairs"]["AB"]["concurrence"].is_number());
        for key in ["sC", "sE", "discord_sum"] {
            assert!(v[key].is_number(), "{key}");
        }
        for key in ["c_max", "sC2", "liu_eof", "liu_conc"] {
            assert!(v["margins"][key].is_number(), "{key}");
        }
    }
}
