use num_complex::Complex64;

use super::eigen::{hermitian_deviation, hermitian_eigenvalues};
use super::CMatrix;
use crate::error::{Error, Result};

/// Tolerance used for every state invariant check.
pub const STATE_TOL: f64 = 1e-9;

/// Largest supported register.
pub const MAX_QUBITS: usize = 5;

/// Normalized pure state on `n_qubits` qubits.
///
/// Amplitudes are stored in computational-basis order with qubit 0 as the
/// most significant bit of the basis index, so `|q0 q1 ... q(n-1)>` sits at
/// index `q0·2^(n-1) + ... + q(n-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Validates length, finiteness and normalization.
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_register(n_qubits, amplitudes.len())?;
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Rescales `amplitudes` to unit norm. Fails on a zero or non-finite vector.
    pub fn normalized(n_qubits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        check_register(n_qubits, amplitudes.len())?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() {
            return Err(Error::NonFinite);
        }
        if norm_sq < 1e-300 {
            return Err(Error::NotNormalized { norm_sq });
        }
        let inv = 1.0 / norm_sq.sqrt();
        amplitudes.iter_mut().for_each(|a| *a *= inv);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(n_qubits, amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> DensityMatrix {
        let d = self.dim();
        let a = &self.amplitudes;
        DensityMatrix::from_trusted(CMatrix::from_fn(d, d, |i, j| a[i] * a[j].conj()))
    }

    /// Reduced state on the `keep` qubits, computed directly from amplitudes.
    ///
    /// The kept qubits retain their relative order.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let layout = TraceLayout::new(self.n_qubits, keep)?;
        let dk = layout.kept_dim();
        let mut rho = CMatrix::zeros(dk, dk);
        for t in 0..layout.traced_dim() {
            let base = layout.traced_offset(t);
            for i in 0..dk {
                let ai = self.amplitudes[base + layout.kept_offset(i)];
                if ai.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..dk {
                    rho[(i, j)] += ai * self.amplitudes[base + layout.kept_offset(j)].conj();
                }
            }
        }
        Ok(DensityMatrix::from_trusted(rho))
    }
}

fn check_register(n_qubits: usize, len: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::QubitCount(n_qubits));
    }
    let dim = 1usize << n_qubits;
    if len != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: len,
        });
    }
    Ok(())
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity, each within 1e-9.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.ncols(),
            });
        }
        if matrix
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let deviation = hermitian_deviation(&matrix);
        if deviation > STATE_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace: f64 = (0..dim).map(|i| matrix[(i, i)].re).sum();
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        let min = *hermitian_eigenvalues(&matrix)?
            .last()
            .expect("non-empty spectrum");
        if min < -STATE_TOL {
            return Err(Error::NotPositive { eigenvalue: min });
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix that satisfies the invariants by construction.
    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    /// Convex mixture `Σ w_i |ψ_i><ψ_i|`; weights must be nonnegative and sum to one.
    pub fn mixture(components: &[(f64, &PureState)]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let dim = first.1.dim();
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if components.iter().any(|(w, _)| *w < 0.0 || !w.is_finite()) || (total - 1.0).abs() > 1e-12
        {
            return Err(Error::InvalidParameter(format!(
                "mixture weights must be nonnegative and sum to 1 (sum {total})"
            )));
        }
        let mut m = CMatrix::zeros(dim, dim);
        for (w, psi) in components {
            if psi.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: psi.dim(),
                });
            }
            m += psi.projector().matrix * Complex64::new(*w, 0.0);
        }
        Ok(Self { matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Number of qubits if the dimension is a power of two.
    pub fn n_qubits(&self) -> Option<usize> {
        let d = self.dim();
        d.is_power_of_two().then(|| d.trailing_zeros() as usize)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Bit bookkeeping for splitting an `n`-qubit index into kept and traced parts.
struct TraceLayout {
    kept_offsets: Vec<usize>,
    traced_offsets: Vec<usize>,
}

impl TraceLayout {
    fn new(n_qubits: usize, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        let mut seen = vec![false; n_qubits];
        for &q in keep {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
            if seen[q] {
                return Err(Error::DuplicateQubit(q));
            }
            seen[q] = true;
        }
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        let traced: Vec<usize> = (0..n_qubits).filter(|q| !seen[*q]).collect();
        Ok(Self {
            kept_offsets: offsets(n_qubits, &kept),
            traced_offsets: offsets(n_qubits, &traced),
        })
    }

    fn kept_dim(&self) -> usize {
        self.kept_offsets.len()
    }

    fn traced_dim(&self) -> usize {
        self.traced_offsets.len()
    }

    fn kept_offset(&self, i: usize) -> usize {
        self.kept_offsets[i]
    }

    fn traced_offset(&self, t: usize) -> usize {
        self.traced_offsets[t]
    }
}

/// Full-register index contribution of every assignment to `qubits` (ascending).
fn offsets(n_qubits: usize, qubits: &[usize]) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|local| {
            qubits.iter().enumerate().fold(0, |acc, (m, &q)| {
                let bit = (local >> (k - 1 - m)) & 1;
                acc | (bit << (n_qubits - 1 - q))
            })
        })
        .collect()
}

/// Partial trace of an `n_qubits` density matrix onto the `keep` qubits.
pub fn partial_trace(
    rho: &DensityMatrix,
    n_qubits: usize,
    keep: &[usize],
) -> Result<DensityMatrix> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::QubitCount(n_qubits));
    }
    let dim = 1usize << n_qubits;
    if rho.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: rho.dim(),
        });
    }
    let layout = TraceLayout::new(n_qubits, keep)?;
    let dk = layout.kept_dim();
    let m = rho.matrix();
    let mut out = CMatrix::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..layout.traced_dim() {
                let base = layout.traced_offset(t);
                acc += m[(base + layout.kept_offset(i), base + layout.kept_offset(j))];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(DensityMatrix::from_trusted(out))
}

/// A 2×2 unitary acting on one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalUnitary {
    entries: [[Complex64; 2]; 2],
}

impl LocalUnitary {
    pub fn new(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        let u = Self { entries };
        let residual = u.unitarity_residual();
        if !residual.is_finite() || residual > STATE_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(u)
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            entries: [[one, zero], [zero, one]],
        }
    }

    pub fn pauli_x() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            entries: [[zero, one], [one, zero]],
        }
    }

    /// `diag(e^{iθ}, 1)`.
    pub fn phase(theta: f64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            entries: [
                [Complex64::from_polar(1.0, theta), zero],
                [zero, Complex64::new(1.0, 0.0)],
            ],
        }
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.entries
    }

    pub fn determinant(&self) -> Complex64 {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    /// Max entrywise deviation of `U†U` from the identity.
    pub fn unitarity_residual(&self) -> f64 {
        let e = &self.entries;
        let mut worst = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                let g: Complex64 = (0..2).map(|k| e[k][i].conj() * e[k][j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }

    pub fn as_matrix(&self) -> CMatrix {
        let e = &self.entries;
        CMatrix::from_row_slice(2, 2, &[e[0][0], e[0][1], e[1][0], e[1][1]])
    }
}

/// Applies `us[q]` to qubit `q` for every qubit.
pub fn apply_local_unitaries(psi: &PureState, us: &[LocalUnitary]) -> Result<PureState> {
    let n = psi.n_qubits();
    if us.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: us.len(),
        });
    }
    for u in us {
        let residual = u.unitarity_residual();
        if residual > STATE_TOL {
            return Err(Error::NotUnitary { residual });
        }
    }
    let mut amps = psi.amplitudes().to_vec();
    for (q, u) in us.iter().enumerate() {
        apply_single(&mut amps, n, q, u);
    }
    Ok(PureState {
        n_qubits: n,
        amplitudes: amps,
    })
}

fn apply_single(amps: &mut [Complex64], n_qubits: usize, qubit: usize, u: &LocalUnitary) {
    let mask = 1usize << (n_qubits - 1 - qubit);
    let e = u.entries();
    for i in 0..amps.len() {
        if i & mask != 0 {
            continue;
        }
        let (a0, a1) = (amps[i], amps[i | mask]);
        amps[i] = e[0][0] * a0 + e[0][1] * a1;
        amps[i | mask] = e[1][0] * a0 + e[1][1] * a1;
    }
}

/// Applies `U_0 ⊗ ... ⊗ U_{n-1}` by conjugation to a density matrix.
pub fn conjugate_local_unitaries(
    rho: &DensityMatrix,
    us: &[LocalUnitary],
) -> Result<DensityMatrix> {
    let n = rho.n_qubits().ok_or(Error::DimensionMismatch {
        expected: rho.dim().next_power_of_two(),
        found: rho.dim(),
    })?;
    if us.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: us.len(),
        });
    }
    let full = us
        .iter()
        .skip(1)
        .fold(us[0].as_matrix(), |acc, u| acc.kronecker(&u.as_matrix()));
    let m = &full * rho.matrix() * full.adjoint();
    Ok(DensityMatrix::from_trusted(m))
}
