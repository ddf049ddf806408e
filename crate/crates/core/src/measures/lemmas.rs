//! Executable checks of auxiliary inequalities used in the W-state uniqueness argument.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::wootters_concurrence;
use crate::error::{Error, Result};
use crate::linalg::{
    apply_local_unitaries, hermitian_deviation, hermitian_eigenvalues, psd_sqrt, CMatrix,
    DensityMatrix, LocalUnitary, PureState,
};

const CONTRACTION_SLACK: f64 = 1e-9;

fn check_psd_contraction(m: &CMatrix, name: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Precondition(format!("{name} is not square")));
    }
    let deviation = hermitian_deviation(m);
    if deviation > CONTRACTION_SLACK {
        return Err(Error::NotHermitian { deviation });
    }
    let vals = hermitian_eigenvalues(m)?;
    let (max, min) = (vals[0], vals[vals.len() - 1]);
    if min < -CONTRACTION_SLACK {
        return Err(Error::NotPositive { eigenvalue: min });
    }
    if max > 1.0 + CONTRACTION_SLACK {
        return Err(Error::Precondition(format!(
            "{name} has eigenvalue {max} above 1"
        )));
    }
    Ok(())
}

/// Largest eigenvalue modulus of `AB` for PSD contractions `A` and `B`.
///
/// `AB` is similar to the Hermitian PSD matrix `√A B √A`, whose spectrum is
/// used instead of a general non-Hermitian eigensolve.
pub fn product_spectrum_check(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    check_psd_contraction(a, "A")?;
    check_psd_contraction(b, "B")?;
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    let root = psd_sqrt(a)?;
    let m = &root * b * &root;
    let sym = CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        (m[(i, j)] + m[(j, i)].conj()) * 0.5
    });
    Ok(hermitian_eigenvalues(&sym)?
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max))
}

const GRID: usize = 128;

/// Evaluates `f(a) + f(b) + f(c) >= f(a') + f(b') + f(c')` within 1e-12.
///
/// Preconditions: all six arguments lie in `[0, 1]`, `a + b + c >= a' + b' + c'`,
/// and `f` is increasing with positive second differences on a uniform grid
/// over `[0, 1]`.
pub fn convexity_transfer_check(
    lhs: [f64; 3],
    rhs: [f64; 3],
    f: &dyn Fn(f64) -> f64,
) -> Result<bool> {
    const TOL: f64 = 1e-12;
    if lhs
        .iter()
        .chain(&rhs)
        .any(|x| !x.is_finite() || !(0.0..=1.0).contains(x))
    {
        return Err(Error::Precondition("arguments must lie in [0, 1]".into()));
    }
    if lhs.iter().sum::<f64>() < rhs.iter().sum::<f64>() - TOL {
        return Err(Error::Precondition("a + b + c < a' + b' + c'".into()));
    }
    let samples: Vec<f64> = (0..=GRID).map(|k| f(k as f64 / GRID as f64)).collect();
    if samples.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Precondition("f is not increasing on [0, 1]".into()));
    }
    if samples.windows(3).any(|w| w[0] - 2.0 * w[1] + w[2] <= 0.0) {
        return Err(Error::Precondition(
            "f is not strictly convex on [0, 1]".into(),
        ));
    }
    let left: f64 = lhs.iter().map(|&x| f(x)).sum();
    let right: f64 = rhs.iter().map(|&x| f(x)).sum();
    Ok(left >= right - TOL)
}

/// `(|01> + |10>)/√2`.
pub fn phi_plus_01() -> PureState {
    let z = Complex64::new(0.0, 0.0);
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    PureState::new(2, vec![z, h, h, z]).expect("normalized")
}

/// Numerical rank and concurrence of one mixed pair state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankConcurrence {
    pub rank: usize,
    pub concurrence: f64,
}

impl RankConcurrence {
    /// Rank one exactly when the concurrence is one (within 1e-6).
    pub fn consistent(&self) -> bool {
        (self.rank == 1) == ((self.concurrence - 1.0).abs() <= 1e-6)
    }
}

/// For each pair `(i, j)` in `(1,2), (1,3), (2,3)` builds
/// `σ = p₁|φ+><φ+| + (1 - p₁)(U_i ⊗ U_j)|φ+><φ+|(U_i ⊗ U_j)†`
/// and reports its numerical rank (eigenvalues above 1e-8 of the largest)
/// and Wootters concurrence.
pub fn lu_rank_check(p1: f64, us: &[LocalUnitary; 3]) -> Result<[RankConcurrence; 3]> {
    if !(p1 > 0.0 && p1 < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "weight {p1} outside (0, 1)"
        )));
    }
    let phi = phi_plus_01();
    let one = |u: &LocalUnitary, v: &LocalUnitary| -> Result<RankConcurrence> {
        let rotated = apply_local_unitaries(&phi, &[*u, *v])?;
        let sigma = DensityMatrix::mixture(&[(p1, &phi), (1.0 - p1, &rotated)])?;
        let vals = hermitian_eigenvalues(sigma.matrix())?;
        let rank = vals.iter().filter(|&&l| l > 1e-8 * vals[0]).count();
        Ok(RankConcurrence {
            rank,
            concurrence: wootters_concurrence(&sigma)?,
        })
    };
    Ok([
        one(&us[0], &us[1])?,
        one(&us[0], &us[2])?,
        one(&us[1], &us[2])?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_local_unitary, RandomStream};
    use crate::measures::eof_from_concurrence;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_contraction(stream: &mut RandomStream, dim: usize) -> CMatrix {
        let g = CMatrix::from_fn(dim, dim, |_, _| stream.complex_normal());
        let psd = &g * g.adjoint();
        let top = hermitian_eigenvalues(&psd).unwrap()[0];
        psd * c(stream.uniform() / top)
    }

    /// Eigenvalues of a general complex matrix via the complex Schur form.
    fn schur_spectral_radius(m: &CMatrix) -> f64 {
        let (_, t) = m.clone().schur().unpack();
        (0..t.nrows()).map(|i| t[(i, i)].norm()).fold(0.0, f64::max)
    }

    #[test]
    fn identity_and_projectors() {
        let id = CMatrix::identity(4, 4);
        assert!((product_spectrum_check(&id, &id).unwrap() - 1.0).abs() < 1e-12);
        let p = phi_plus_01().projector().into_matrix();
        assert!((product_spectrum_check(&p, &p).unwrap() - 1.0).abs() < 1e-12);
        let q = PureState::basis(2, 0).unwrap().projector().into_matrix();
        assert!(product_spectrum_check(&p, &q).unwrap() < 1e-12);
    }

    #[test]
    fn random_contractions_agree_with_schur_and_stay_below_one() {
        for k in 0..1000 {
            let mut s = RandomStream::new(77, k);
            let a = random_contraction(&mut s, 4);
            let b = random_contraction(&mut s, 4);
            let got = product_spectrum_check(&a, &b).unwrap();
            assert!(got <= 1.0 + 1e-8);
            if k < 100 {
                let oracle = schur_spectral_radius(&(&a * &b));
                assert!((got - oracle).abs() < 1e-8, "{got} vs {oracle}");
            }
        }
    }

    #[test]
    fn contraction_precondition() {
        let big = CMatrix::identity(2, 2) * c(2.0);
        assert!(matches!(
            product_spectrum_check(&big, &CMatrix::identity(2, 2)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn convexity_transfer_examples() {
        let sq = |x: f64| x * x;
        assert!(convexity_transfer_check([1.0; 3], [0.0; 3], &sq).unwrap());
        assert!(convexity_transfer_check([0.3, 0.2, 0.9], [0.3, 0.2, 0.9], &sq).unwrap());
        // equal sums, spread versus even: the inequality does not follow
        assert!(!convexity_transfer_check([0.5, 0.5, 0.5], [1.0, 0.5, 0.0], &sq).unwrap());
    }

    #[test]
    fn convexity_transfer_preconditions() {
        let sq = |x: f64| x * x;
        assert!(convexity_transfer_check([0.1; 3], [0.2; 3], &sq).is_err());
        assert!(convexity_transfer_check([1.2, 0.0, 0.0], [0.0; 3], &sq).is_err());
        let decreasing = |x: f64| 1.0 - x * x;
        assert!(convexity_transfer_check([1.0; 3], [0.0; 3], &decreasing).is_err());
        // EoF as a function of squared concurrence is concave
        let eof_of_square = |y: f64| eof_from_concurrence(y.sqrt());
        assert!(matches!(
            convexity_transfer_check([1.0; 3], [0.0; 3], &eof_of_square),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn sorted_dominance_suffices_for_increasing_f() {
        let eof_of_square = |y: f64| eof_from_concurrence(y.sqrt());
        for k in 0..10_000 {
            let mut s = RandomStream::new(1234, k);
            let mut lhs = [s.uniform(), s.uniform(), s.uniform()];
            let mut rhs = [s.uniform(), s.uniform(), s.uniform()];
            lhs.sort_by(f64::total_cmp);
            rhs.sort_by(f64::total_cmp);
            if lhs.iter().zip(&rhs).any(|(a, b)| a < b) {
                continue;
            }
            let l: f64 = lhs.iter().map(|&x| eof_of_square(x)).sum();
            let r: f64 = rhs.iter().map(|&x| eof_of_square(x)).sum();
            assert!(l >= r - 1e-12);
        }
    }

    #[test]
    fn identity_unitaries_keep_rank_one() {
        let out = lu_rank_check(0.4, &[LocalUnitary::identity(); 3]).unwrap();
        for r in out {
            assert_eq!(r.rank, 1);
            assert!((r.concurrence - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn equal_phases_preserve_phi_plus() {
        let t = 0.83;
        let out = lu_rank_check(0.3, &[LocalUnitary::phase(t); 3]).unwrap();
        for r in out {
            assert_eq!(r.rank, 1);
            assert!((r.concurrence - 1.0).abs() < 1e-6);
        }
        // unequal phases give a different maximally entangled vector
        let us = [
            LocalUnitary::phase(0.2),
            LocalUnitary::phase(1.4),
            LocalUnitary::phase(0.2),
        ];
        let out = lu_rank_check(0.3, &us).unwrap();
        assert_eq!(out[0].rank, 2);
        assert!(out[0].concurrence < 1.0 - 1e-6);
        assert_eq!(out[1].rank, 1);
        for r in out {
            assert!(r.consistent());
        }
    }

    #[test]
    fn generic_unitaries_give_rank_two() {
        for k in 0..50 {
            let mut s = RandomStream::new(8, k);
            let us = [
                random_local_unitary(&mut s),
                random_local_unitary(&mut s),
                random_local_unitary(&mut s),
            ];
            for r in lu_rank_check(0.5, &us).unwrap() {
                assert_eq!(r.rank, 2);
                assert!(r.concurrence < 1.0);
                assert!(r.consistent());
            }
        }
    }

    #[test]
    fn weight_validated() {
        let us = [LocalUnitary::identity(); 3];
        assert!(lu_rank_check(0.0, &us).is_err());
        assert!(lu_rank_check(1.0, &us).is_err());
    }
}
