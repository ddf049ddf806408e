//! Bipartite entanglement measures on qubit states.
//!
//! Concurrence and entanglement of formation (EoF) are exact for pure states
//! across any cut and for two-qubit density matrices (Wootters). Convex-roof
//! values of larger mixed states are never computed: a three-qubit mixed
//! input is characterized only through the pair measures of its two-qubit
//! reductions.

mod lemmas;
mod report;

use std::sync::atomic::{AtomicBool, Ordering};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, psd_sqrt, roundoff_floor, CMatrix, DensityMatrix, PureState,
};

pub use lemmas::{
    convexity_transfer_check, lu_rank_check, phi_plus_01, product_spectrum_check, RankConcurrence,
};
pub use report::{
    ckw_residual, pair_concurrences, pair_eofs, pairwise_report, pairwise_report_mixed,
    pairwise_report_pure, Margins, MeasureReport, PairMeasures, PairTable, QuantumState,
    TangleResiduals, PAIRS,
};

/// Maximum of `E_AB + E_AC` over three-qubit pure states, in ebits.
pub const LIU_EOF_BOUND: f64 = 1.20175;

/// Maximum of `C_AB + C_AC` over three-qubit pure states.
pub const LIU_CONC_BOUND: f64 = std::f64::consts::SQRT_2;

/// Upper bound on `sC` for three qubits.
pub const SC_BOUND: f64 = 2.0;

/// `3 h(1/2 + √5/6)`, the largest `sE` of any three-qubit state (attained by `|W>`).
pub fn c_max() -> f64 {
    3.0 * binary_entropy_unchecked(0.5 + 5f64.sqrt() / 6.0)
}

static FLIP_WOOTTERS_SIGN: AtomicBool = AtomicBool::new(false);

/// Debug-only fault injection: flips the sign of the `√λ₂` term in the
/// Wootters formula so downstream checks can be shown to fail.
#[doc(hidden)]
pub fn set_wootters_fault(enabled: bool) {
    FLIP_WOOTTERS_SIGN.store(enabled, Ordering::SeqCst);
}

/// `h(x) = -x log₂ x - (1-x) log₂ (1-x)` with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if !(-SLACK..=1.0 + SLACK).contains(&x) {
        return Err(Error::InvalidParameter(format!(
            "binary entropy argument {x} outside [0, 1]"
        )));
    }
    Ok(binary_entropy_unchecked(x.clamp(0.0, 1.0)))
}

fn binary_entropy_unchecked(x: f64) -> f64 {
    xlog2x(x) + xlog2x(1.0 - x)
}

/// `-x log₂ x`, zero at the endpoints.
fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Two-qubit EoF as a function of concurrence.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy_unchecked((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(rho.matrix())?
        .into_iter()
        .map(|l| xlog2x(l.max(0.0)))
        .sum())
}

/// A cut of an `n`-qubit register into `side` and its complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    n_qubits: usize,
    side: Vec<usize>,
}

impl Bipartition {
    pub fn new(n_qubits: usize, side: &[usize]) -> Result<Self> {
        let mut seen = vec![false; n_qubits];
        for &q in side {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
            if seen[q] {
                return Err(Error::DuplicateQubit(q));
            }
            seen[q] = true;
        }
        if side.is_empty() || side.len() == n_qubits {
            return Err(Error::TrivialPartition);
        }
        let mut side = side.to_vec();
        side.sort_unstable();
        Ok(Self { n_qubits, side })
    }

    /// Splits qubit `q` from the rest.
    pub fn single(n_qubits: usize, q: usize) -> Result<Self> {
        Self::new(n_qubits, &[q])
    }

    pub fn side(&self) -> &[usize] {
        &self.side
    }

    pub fn complement(&self) -> Vec<usize> {
        (0..self.n_qubits)
            .filter(|q| !self.side.contains(q))
            .collect()
    }

    /// The side with fewer qubits; both sides share the same nonzero spectrum.
    fn smaller_side(&self) -> Vec<usize> {
        if 2 * self.side.len() <= self.n_qubits {
            self.side.clone()
        } else {
            self.complement()
        }
    }

    fn check(&self, psi: &PureState) -> Result<()> {
        if psi.n_qubits() != self.n_qubits {
            return Err(Error::WrongSystemSize {
                expected: self.n_qubits,
                found: psi.n_qubits(),
            });
        }
        Ok(())
    }
}

/// `C = √(2(1 - Tr ρ_A²))` across the cut.
pub fn pure_concurrence(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    cut.check(psi)?;
    let rho = psi.reduced(&cut.smaller_side())?;
    Ok((2.0 * (1.0 - rho.purity())).max(0.0).sqrt())
}

/// Entanglement entropy `S(ρ_A)` across the cut, in ebits.
pub fn pure_eof(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    cut.check(psi)?;
    von_neumann_entropy(&psi.reduced(&cut.smaller_side())?)
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    Ok(())
}

/// `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn spin_flip(rho: &DensityMatrix) -> Result<DensityMatrix> {
    require_two_qubit(rho)?;
    // σ_y ⊗ σ_y is real and anti-diagonal with signs (-, +, +, -), so
    // ρ̃[i][j] = s_i s_j conj(ρ[3-i][3-j]).
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    let m = rho.matrix();
    let flipped = CMatrix::from_fn(4, 4, |i, j| m[(3 - i, 3 - j)].conj() * (SIGN[i] * SIGN[j]));
    Ok(DensityMatrix::from_trusted(flipped))
}

/// Square roots of the eigenvalues of `ρ ρ̃`, descending.
///
/// Computed from the Hermitian matrix `√ρ ρ̃ √ρ`, which has the same spectrum.
pub fn wootters_spectrum(rho: &DensityMatrix) -> Result<[f64; 4]> {
    require_two_qubit(rho)?;
    let root = psd_sqrt(rho.matrix())?;
    let flipped = spin_flip(rho)?;
    let r = &root * flipped.matrix() * &root;
    let sym = CMatrix::from_fn(4, 4, |i, j| {
        (r[(i, j)] + r[(j, i)].conj()) * Complex64::new(0.5, 0.0)
    });
    let mut vals = hermitian_eigenvalues(&sym)?;
    roundoff_floor(&mut vals);
    let mut out = [0.0; 4];
    for (o, v) in out.iter_mut().zip(vals) {
        *o = v.max(0.0).sqrt();
    }
    Ok(out)
}

/// Wootters concurrence `max(√λ₁ - √λ₂ - √λ₃ - √λ₄, 0)` of a two-qubit state.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    let s = wootters_spectrum(rho)?;
    let second = if FLIP_WOOTTERS_SIGN.load(Ordering::Relaxed) {
        -s[1]
    } else {
        s[1]
    };
    Ok((s[0] - second - s[2] - s[3]).clamp(0.0, 1.0))
}

/// Two-qubit EoF, `h((1 + √(1 - C²)) / 2)`.
pub fn eof_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    Ok(eof_from_concurrence(wootters_concurrence(rho)?))
}

/// Concurrence and EoF of one two-qubit reduction.
pub fn pair_measures(rho: &DensityMatrix) -> Result<PairMeasures> {
    let concurrence = wootters_concurrence(rho)?;
    Ok(PairMeasures {
        concurrence,
        eof: eof_from_concurrence(concurrence),
    })
}
