//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a[p][q]` with a
//! diagonal unitary, then applies the classical real Jacobi rotation. The
//! accumulated product of these unitaries gives the eigenvectors.

use num_complex::Complex64;

use super::CMatrix;
use crate::error::{Error, Result};

/// Hermiticity tolerance accepted on input.
pub const HERMITIAN_TOL: f64 = 1e-8;

/// Sweeps stop once the off-diagonal Frobenius norm drops below this
/// fraction of the whole matrix's Frobenius norm.
///
/// An absolute 1e-12 is not enough: eigenvectors of nearly degenerate small
/// eigenvalues then carry errors of order `1e-12 / gap`, which square roots
/// of reduced states turn into visible concurrence errors.
pub const OFF_DIAGONAL_TOL: f64 = 1e-3 * f64::EPSILON;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `M = V diag(values) V†` with values sorted descending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors, in the same order as `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] *= self.values[j];
            }
        }
        &scaled * self.vectors.adjoint()
    }
}

/// Largest entrywise deviation `|m_ij - conj(m_ji)|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

fn off_diagonal_norm_sq(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

/// Full eigen-decomposition of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMatrix) -> Result<HermitianEigen> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.ncols(),
        });
    }
    let deviation = hermitian_deviation(m);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }

    // work on the exactly Hermitian part
    let mut a = CMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = CMatrix::identity(n, n);

    let frob_sq: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let stop = OFF_DIAGONAL_TOL * OFF_DIAGONAL_TOL * frob_sq;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm_sq(&a) <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|e| e.values)
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // U = D J with D = diag(1, conj(phase)) on (p, q) and J the real rotation
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    let n = a.nrows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// Zeroes eigenvalues at or below the solver's absolute roundoff level
/// (`dim · ε · max|λ|`), so that square roots do not amplify noise.
pub fn roundoff_floor(values: &mut [f64]) {
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let floor = values.len() as f64 * f64::EPSILON * scale;
    for v in values.iter_mut() {
        if v.abs() <= floor {
            *v = 0.0;
        }
    }
}

/// Square root of a Hermitian PSD matrix.
///
/// Eigenvalues in `[-1e-6, 0)` are treated as roundoff and clamped to zero;
/// anything more negative is rejected.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    const NEGATIVE_LIMIT: f64 = -1e-6;
    let mut eig = hermitian_eigen(m)?;
    if let Some(&min) = eig.values.last() {
        if min < NEGATIVE_LIMIT {
            return Err(Error::NotPositive { eigenvalue: min });
        }
    }
    roundoff_floor(&mut eig.values);
    let roots = HermitianEigen {
        values: eig.values.iter().map(|&x| x.max(0.0).sqrt()).collect(),
        vectors: eig.vectors,
    };
    Ok(roots.reconstruct())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn frobenius(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn half_identity() {
        let m = CMatrix::identity(2, 2) * c(0.5, 0.0);
        let vals = hermitian_eigenvalues(&m).unwrap();
        assert!((vals[0] - 0.5).abs() < 1e-15 && (vals[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn diagonal_sorted_descending() {
        let m =
            CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.3, 0.0), c(0.7, 0.0)]));
        assert_eq!(hermitian_eigenvalues(&m).unwrap(), vec![0.7, 0.3]);
    }

    #[test]
    fn complex_2x2_against_closed_form() {
        // [[a, b], [b*, d]] has eigenvalues (a+d)/2 ± sqrt(((a-d)/2)^2 + |b|^2)
        let b = c(0.3, -0.4);
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), b, b.conj(), c(-0.5, 0.0)]);
        let vals = hermitian_eigenvalues(&m).unwrap();
        let mid = 0.25;
        let rad = (0.75f64.powi(2) + b.norm_sqr()).sqrt();
        assert!((vals[0] - (mid + rad)).abs() < 1e-13);
        assert!((vals[1] - (mid - rad)).abs() < 1e-13);
    }

    #[test]
    fn reconstruction_residual_dim_8() {
        let n = 8;
        let m = CMatrix::from_fn(n, n, |i, j| {
            let (lo, hi) = (i.min(j) as f64, i.max(j) as f64);
            let im = if i < j {
                0.1 * hi
            } else if i > j {
                -0.1 * hi
            } else {
                0.0
            };
            c((lo + 1.0) / (hi + 2.0), im)
        });
        let eig = hermitian_eigen(&m).unwrap();
        let resid = frobenius(&(eig.reconstruct() - &m));
        assert!(resid <= 1e-8 * n as f64, "residual {resid}");
        let trace: f64 = (0..n).map(|i| m[(i, i)].re).sum();
        assert!((eig.values.iter().sum::<f64>() - trace).abs() < 1e-8);
        let gram = eig.vectors.adjoint() * &eig.vectors;
        assert!(frobenius(&(gram - CMatrix::identity(n, n))) < 1e-10);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            hermitian_eigen(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn sqrt_examples() {
        let id = CMatrix::identity(3, 3);
        assert!(frobenius(&(psd_sqrt(&id).unwrap() - &id)) < 1e-14);

        let m =
            CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.8, 0.0), c(0.2, 0.0)]));
        let r = psd_sqrt(&m).unwrap();
        let s5 = 5f64.sqrt();
        assert!((r[(0, 0)].re - 2.0 / s5).abs() < 1e-14);
        assert!((r[(1, 1)].re - 1.0 / s5).abs() < 1e-14);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi = [c(0.0, 0.0), c(h, 0.0), c(h, 0.0), c(0.0, 0.0)];
        let proj = CMatrix::from_fn(4, 4, |i, j| phi[i] * phi[j].conj());
        let r = psd_sqrt(&proj).unwrap();
        assert!(frobenius(&(&r - &proj)) < 1e-7);
        assert!(frobenius(&(&r * &r - &proj)) < 1e-7);
    }

    #[test]
    fn sqrt_rejects_negative() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(1.0, 0.0),
            c(-0.01, 0.0),
        ]));
        assert!(matches!(psd_sqrt(&m), Err(Error::NotPositive { .. })));
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(1.0, 0.0),
            c(-1e-10, 0.0),
        ]));
        assert!(psd_sqrt(&m).is_ok());
    }
}
