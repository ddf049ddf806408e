//! Counter-based random streams and the samplers built on them.
//!
//! Sample `k` of a run always draws from `RandomStream::new(seed, k)`, so
//! results do not depend on how work is split across threads.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::state::{LocalUnitary, PureState, MAX_QUBITS};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, counter: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(counter);
        Self { rng }
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn complex_normal(&mut self) -> Complex64 {
        Complex64::new(self.normal(), self.normal())
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Haar-random pure state: i.i.d. complex Gaussian amplitudes, normalized.
pub fn haar_random_pure(n_qubits: usize, stream: &mut RandomStream) -> Result<PureState> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::QubitCount(n_qubits));
    }
    let amps = (0..1usize << n_qubits)
        .map(|_| stream.complex_normal())
        .collect();
    PureState::normalized(n_qubits, amps)
}

/// Haar-random element of U(2).
pub fn random_local_unitary(stream: &mut RandomStream) -> LocalUnitary {
    let alpha = 2.0 * PI * stream.uniform();
    let psi = 2.0 * PI * stream.uniform();
    let chi = 2.0 * PI * stream.uniform();
    let phi = stream.uniform().sqrt().asin();
    let (s, c) = phi.sin_cos();
    let g = Complex64::from_polar(1.0, alpha);
    let ep = Complex64::from_polar(1.0, psi);
    let ec = Complex64::from_polar(1.0, chi);
    let entries = [
        [g * ep * c, g * ec * s],
        [-g * ec.conj() * s, g * ep.conj() * c],
    ];
    LocalUnitary::new(entries).expect("parametrization is unitary")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_normalized() {
        for seed in 0..20 {
            let psi = haar_random_pure(1, &mut RandomStream::new(seed, 0)).unwrap();
            assert!((psi.norm_sq() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn same_seed_same_state() {
        let a = haar_random_pure(3, &mut RandomStream::new(42, 7)).unwrap();
        let b = haar_random_pure(3, &mut RandomStream::new(42, 7)).unwrap();
        assert_eq!(a.amplitudes(), b.amplitudes());
        let c = haar_random_pure(3, &mut RandomStream::new(42, 8)).unwrap();
        assert_ne!(a.amplitudes(), c.amplitudes());
    }

    #[test]
    fn range_checked() {
        let mut s = RandomStream::new(0, 0);
        assert!(matches!(
            haar_random_pure(0, &mut s),
            Err(Error::QubitCount(0))
        ));
        assert!(matches!(
            haar_random_pure(6, &mut s),
            Err(Error::QubitCount(6))
        ));
    }

    #[test]
    fn first_amplitude_weight_is_one_eighth() {
        let n = 100_000;
        let mean: f64 = (0..n)
            .map(|k| {
                let psi = haar_random_pure(3, &mut RandomStream::new(11, k)).unwrap();
                psi.amplitudes()[0].norm_sqr()
            })
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.125).abs() < 0.005, "mean {mean}");
    }

    #[test]
    fn random_unitaries_are_unitary() {
        for k in 0..200 {
            let u = random_local_unitary(&mut RandomStream::new(5, k));
            assert!(u.unitarity_residual() <= 1e-12);
            assert!((u.determinant().norm() - 1.0).abs() <= 1e-12);
            let e = u.entries();
            let overlap = e[0][0].conj() * e[0][1] + e[1][0].conj() * e[1][1];
            assert!(overlap.norm() <= 1e-12);
        }
    }
}
