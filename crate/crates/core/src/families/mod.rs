//! Parameterized three- and n-qubit state families with closed-form pair
//! measures.
//!
//! Every constructor follows the register convention of [`PureState`]:
//! qubit 0 (A) is the most significant bit, so `|100>` means A excited.

mod named;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, PureState, MAX_QUBITS};

pub use named::{build_named, FamilyName};

const PARAM_TOL: f64 = 1e-12;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sparse_state(n: usize, entries: &[(usize, Complex64)]) -> Result<PureState> {
    let mut amps = vec![real(0.0); 1 << n];
    for &(i, a) in entries {
        amps[i] += a;
    }
    PureState::new(n, amps)
}

fn check_size(n: usize) -> Result<()> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(Error::QubitCount(n));
    }
    Ok(())
}

fn check_unit(values: impl Iterator<Item = f64>, what: &str) -> Result<()> {
    let s: f64 = values.map(|x| x * x).sum();
    if (s - 1.0).abs() > PARAM_TOL {
        return Err(Error::InvalidParameter(format!(
            "{what}: squared norm {s} is not 1"
        )));
    }
    Ok(())
}

fn check_nonnegative(values: &[f64], what: &str) -> Result<()> {
    if values.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "{what}: coefficients must be finite and nonnegative"
        )));
    }
    Ok(())
}

/// Index of the basis state with only qubit `q` excited.
fn single_excitation(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

/// Equal superposition of the `n` single-excitation basis states.
pub fn w_state(n: usize) -> Result<PureState> {
    check_size(n)?;
    let a = real(1.0 / (n as f64).sqrt());
    let entries: Vec<_> = (0..n).map(|q| (single_excitation(n, q), a)).collect();
    sparse_state(n, &entries)
}

/// `(|0…0> + |1…1>)/√2`.
pub fn ghz_state(n: usize) -> Result<PureState> {
    check_size(n)?;
    let a = real(FRAC_1_SQRT_2);
    sparse_state(n, &[(0, a), ((1 << n) - 1, a)])
}

/// `r0|000> + r1|001> + r2|010> + r3|100>`, the LU-canonical W-class form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WClassParams {
    pub r: [f64; 4],
}

impl WClassParams {
    pub fn new(r: [f64; 4]) -> Result<Self> {
        check_nonnegative(&r, "W-class")?;
        check_unit(r.iter().copied(), "W-class")?;
        Ok(Self { r })
    }

    /// Rescales arbitrary real coordinates onto the constraint surface.
    pub fn project(x: &[f64]) -> Result<Self> {
        let mut r = [0.0; 4];
        for (ri, xi) in r.iter_mut().zip(x) {
            *ri = xi.abs();
        }
        let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter("W-class: zero vector".into()));
        }
        r.iter_mut().for_each(|v| *v /= norm);
        Ok(Self { r })
    }
}

pub fn wclass_state(p: &WClassParams) -> Result<PureState> {
    let [r0, r1, r2, r3] = p.r;
    sparse_state(
        3,
        &[(0, real(r0)), (1, real(r1)), (2, real(r2)), (4, real(r3))],
    )
}

/// Pair concurrences `(C_AB, C_AC, C_BC) = (2 r2 r3, 2 r1 r3, 2 r1 r2)`.
pub fn wclass_closed_form(p: &WClassParams) -> [f64; 3] {
    let [_, r1, r2, r3] = p.r;
    [2.0 * r2 * r3, 2.0 * r1 * r3, 2.0 * r1 * r2]
}

/// `l0|000> + l1 e^{iθ}|100> + l2|101> + l3|110> + l4|111>`, the generalized
/// Schmidt form that covers every three-qubit pure state up to LU.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcinParams {
    pub l: [f64; 5],
    pub theta: f64,
}

impl AcinParams {
    pub fn new(l: [f64; 5], theta: f64) -> Result<Self> {
        check_nonnegative(&l, "Acin")?;
        check_unit(l.iter().copied(), "Acin")?;
        if !(0.0..PI).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "Acin: theta {theta} outside [0, π)"
            )));
        }
        Ok(Self { l, theta })
    }

    /// Maps six free coordinates onto the manifold: `l = |x[0..5]| / ‖x[0..5]‖`,
    /// `θ = x[5] mod π`.
    pub fn project(x: &[f64]) -> Result<Self> {
        if x.len() != 6 {
            return Err(Error::DimensionMismatch {
                expected: 6,
                found: x.len(),
            });
        }
        let mut l = [0.0; 5];
        for (li, xi) in l.iter_mut().zip(x) {
            *li = xi.abs();
        }
        let norm = l.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter("Acin: zero vector".into()));
        }
        l.iter_mut().for_each(|v| *v /= norm);
        let mut theta = x[5].rem_euclid(PI);
        if theta >= PI {
            theta = 0.0;
        }
        Ok(Self { l, theta })
    }

    /// The optimum `l0 = l2 = l3 = 1/√3`, LU-equivalent to `|W>`.
    pub fn w_point() -> Self {
        let s = 1.0 / 3f64.sqrt();
        Self {
            l: [s, 0.0, s, s, 0.0],
            theta: 0.0,
        }
    }

    pub fn ghz_point() -> Self {
        Self {
            l: [FRAC_1_SQRT_2, 0.0, 0.0, 0.0, FRAC_1_SQRT_2],
            theta: 0.0,
        }
    }
}

/// Builds the Acín-form vector from raw coefficients without validating them.
///
/// Used by finite-difference probes that step off the constraint surface.
pub fn acin_state_raw(l: &[f64; 5], theta: f64) -> Result<PureState> {
    let amps = [
        (0, real(l[0])),
        (4, Complex64::from_polar(l[1], theta)),
        (5, real(l[2])),
        (6, real(l[3])),
        (7, real(l[4])),
    ];
    let mut v = vec![real(0.0); 8];
    for (i, a) in amps {
        v[i] = a;
    }
    PureState::normalized(3, v)
}

pub fn acin_state(p: &AcinParams) -> Result<PureState> {
    let psi = acin_state_raw(&p.l, p.theta)?;
    PureState::new(3, psi.into_amplitudes())
}

/// Squared pair concurrences `(C²_AB, C²_AC, C²_BC)`:
/// `4 l0² l3²`, `4 l0² l2²` and `4 |l2 l3 - e^{iθ} l1 l4|²`.
pub fn acin_closed_form(p: &AcinParams) -> [f64; 3] {
    let [l0, l1, l2, l3, l4] = p.l;
    let ab = 4.0 * l0 * l0 * l3 * l3;
    let ac = 4.0 * l0 * l0 * l2 * l2;
    let bc =
        4.0 * l2 * l2 * l3 * l3 + 4.0 * l1 * l1 * l4 * l4 - 8.0 * l1 * l2 * l3 * l4 * p.theta.cos();
    [ab.max(0.0), ac.max(0.0), bc.max(0.0)]
}

/// `M₁ ⊗ M₂ ⊗ M₃ |GHZ>` with `M_i = (u⃗_i, v⃗_i)`,
/// `u⃗_i = u_i (cos θ_i, sin θ_i)` and `v⃗_i = v_i (cos(φ_i + θ_i), sin(φ_i + θ_i))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhzClassParams {
    pub u: [f64; 3],
    pub v: [f64; 3],
    pub theta: [f64; 3],
    pub phi: [f64; 3],
}

impl GhzClassParams {
    pub fn new(u: [f64; 3], v: [f64; 3], theta: [f64; 3], phi: [f64; 3]) -> Result<Self> {
        let p = Self { u, v, theta, phi };
        if u.iter().chain(&v).any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(Error::InvalidParameter(
                "GHZ-class: u and v must be positive".into(),
            ));
        }
        if theta.iter().chain(&phi).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        for i in 0..3 {
            let det = p.determinant(i);
            if det.abs() <= 1e-10 {
                return Err(Error::InvalidParameter(format!(
                    "GHZ-class: M_{} is singular (det {det:e})",
                    i + 1
                )));
            }
        }
        Ok(p)
    }

    /// Identity factors: `u = v = 1`, `θ = 0`, `φ = π/2`.
    pub fn identity() -> Self {
        Self {
            u: [1.0; 3],
            v: [1.0; 3],
            theta: [0.0; 3],
            phi: [PI / 2.0; 3],
        }
    }

    /// `det M_i = u_i v_i sin φ_i`.
    pub fn determinant(&self, i: usize) -> f64 {
        self.u[i] * self.v[i] * self.phi[i].sin()
    }

    /// `r` with `2r = Πu/Πv + Πv/Πu`; always at least 1.
    pub fn r(&self) -> f64 {
        let ratio = self.u.iter().product::<f64>() / self.v.iter().product::<f64>();
        0.5 * (ratio + 1.0 / ratio)
    }

    fn columns(&self, i: usize) -> ([f64; 2], [f64; 2]) {
        let (st, ct) = self.theta[i].sin_cos();
        let (sv, cv) = (self.phi[i] + self.theta[i]).sin_cos();
        (
            [self.u[i] * ct, self.u[i] * st],
            [self.v[i] * cv, self.v[i] * sv],
        )
    }
}

/// Normalized `M₁ ⊗ M₂ ⊗ M₃ |GHZ>`.
pub fn ghzclass_state(p: &GhzClassParams) -> Result<PureState> {
    let cols: Vec<_> = (0..3).map(|i| p.columns(i)).collect();
    let mut amps = vec![real(0.0); 8];
    for (idx, amp) in amps.iter_mut().enumerate() {
        let bit = |q: usize| (idx >> (2 - q)) & 1;
        let us: f64 = (0..3).map(|q| cols[q].0[bit(q)]).product();
        let vs: f64 = (0..3).map(|q| cols[q].1[bit(q)]).product();
        *amp = real(us + vs);
    }
    PureState::normalized(3, amps)
}

/// `sC = (|c₁s₂s₃| + |c₂s₁s₃| + |c₃s₁s₂|) / (r + c₁c₂c₃)` with `c_i = cos φ_i`,
/// `s_i = sin φ_i`.
pub fn ghzclass_sc_closed_form(p: &GhzClassParams) -> Result<f64> {
    let (s, c): (Vec<f64>, Vec<f64>) = p.phi.iter().map(|f| f.sin_cos()).unzip();
    let denom = p.r() + c[0] * c[1] * c[2];
    if denom.abs() <= 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "GHZ-class: denominator r + c1c2c3 = {denom:e} too close to zero"
        )));
    }
    let num = (c[0] * s[1] * s[2]).abs() + (c[1] * s[0] * s[2]).abs() + (c[2] * s[0] * s[1]).abs();
    Ok(num / denom)
}

/// `√p |GW> + √(1-p) |0…0>` with `|GW> = Σ a_i |0…1_i…0>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedWParams {
    pub p: f64,
    pub a: Vec<Complex64>,
}

impl GeneralizedWParams {
    pub fn new(p: f64, a: Vec<Complex64>) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "generalized W: p = {p} outside [0, 1]"
            )));
        }
        check_size(a.len())?;
        if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        check_unit(a.iter().map(|z| z.norm()), "generalized W")?;
        Ok(Self { p, a })
    }

    /// `p = clamp(x[0], 0, 1)`, `a = x[1..] / ‖x[1..]‖` (real amplitudes).
    pub fn project(x: &[f64]) -> Result<Self> {
        let n = x.len().saturating_sub(1);
        check_size(n)?;
        let norm = x[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter("generalized W: zero vector".into()));
        }
        Ok(Self {
            p: x[0].clamp(0.0, 1.0),
            a: x[1..].iter().map(|v| real(v / norm)).collect(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.a.len()
    }
}

pub fn generalized_w_state(p: &GeneralizedWParams) -> Result<PureState> {
    let n = p.n_qubits();
    check_size(n)?;
    let sp = p.p.sqrt();
    let mut entries: Vec<_> =
        p.a.iter()
            .enumerate()
            .map(|(q, a)| (single_excitation(n, q), a * sp))
            .collect();
    entries.push((0, real((1.0 - p.p).sqrt())));
    sparse_state(n, &entries)
}

/// `C(ρ_ij) = 2p|a_i a_j|` for every pair `i < j`, lexicographic order.
pub fn generalized_w_pair_closed_form(p: &GeneralizedWParams) -> Vec<f64> {
    let n = p.n_qubits();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(2.0 * p.p * p.a[i].norm() * p.a[j].norm());
        }
    }
    out
}

/// `sC = p[(Σ|a_i|)² - 1]`.
pub fn generalized_w_sc_closed_form(p: &GeneralizedWParams) -> f64 {
    let l1: f64 = p.a.iter().map(|z| z.norm()).sum();
    p.p * (l1 * l1 - 1.0)
}

/// `(|110> + |101> + |011>)/√3`.
pub fn w_bar_state() -> PureState {
    let a = real(1.0 / 3f64.sqrt());
    sparse_state(3, &[(6, a), (5, a), (3, a)]).expect("normalized")
}

/// `p₁|W><W| + (1 - p₁)|W̄><W̄|`.
pub fn wbar_mixture(p1: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p1) {
        return Err(Error::InvalidParameter(format!(
            "mixture weight {p1} outside [0, 1]"
        )));
    }
    let w = w_state(3)?;
    let wbar = w_bar_state();
    DensityMatrix::mixture(&[(p1, &w), (1.0 - p1, &wbar)])
}

/// Each pair concurrence of the W/W̄ mixture, `(2 - 2√(p₁p₂))/3`.
pub fn wbar_mixture_closed_form(p1: f64) -> f64 {
    (2.0 - 2.0 * (p1 * (1.0 - p1)).sqrt()) / 3.0
}

/// `|100>/√2 + (|010> + |001>)/2`, the maximizer of `E_AB + E_AC`.
pub fn liu_state() -> PureState {
    sparse_state(
        3,
        &[(4, real(FRAC_1_SQRT_2)), (2, real(0.5)), (1, real(0.5))],
    )
    .expect("normalized")
}

/// Random parameter draws used by oracle cross-checks and multistart searches.
pub mod sampling {
    use super::*;
    use crate::linalg::RandomStream;

    fn unit_abs<const N: usize>(s: &mut RandomStream) -> [f64; N] {
        loop {
            let mut x = [0.0; N];
            x.iter_mut().for_each(|v| *v = s.normal().abs());
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 1e-6 {
                x.iter_mut().for_each(|v| *v /= norm);
                return x;
            }
        }
    }

    pub fn wclass(s: &mut RandomStream) -> WClassParams {
        WClassParams { r: unit_abs(s) }
    }

    pub fn acin(s: &mut RandomStream) -> AcinParams {
        let l = unit_abs(s);
        AcinParams {
            l,
            theta: PI * s.uniform(),
        }
    }

    /// Log-normal `u`, `v`; `φ` uniform on `(0, π)` away from singular factors.
    pub fn ghzclass(s: &mut RandomStream) -> GhzClassParams {
        let mut draw = || {
            let u = (0.5 * s.normal()).exp();
            let v = (0.5 * s.normal()).exp();
            let theta = 2.0 * PI * s.uniform();
            let phi = PI * (0.01 + 0.98 * s.uniform());
            (u, v, theta, phi)
        };
        let mut p = GhzClassParams::identity();
        for i in 0..3 {
            let (u, v, t, f) = draw();
            p.u[i] = u;
            p.v[i] = v;
            p.theta[i] = t;
            p.phi[i] = f;
        }
        p
    }

    /// `p` uniform on `[0, 1)`, `a` a Haar-random unit vector in `C^n`.
    pub fn generalized_w(s: &mut RandomStream, n: usize) -> Result<GeneralizedWParams> {
        check_size(n)?;
        let p = s.uniform();
        let a: Vec<Complex64> = (0..n).map(|_| s.complex_normal()).collect();
        let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        Ok(GeneralizedWParams {
            p,
            a: a.into_iter().map(|z| z / norm).collect(),
        })
    }
}

#[cfg(test)]
mod tests;
