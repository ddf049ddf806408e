//! Dense complex linear algebra for registers of at most five qubits.

mod eigen;
mod random;
mod state;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub use eigen::{
    hermitian_deviation, hermitian_eigen, hermitian_eigenvalues, psd_sqrt, roundoff_floor,
    HermitianEigen, HERMITIAN_TOL, OFF_DIAGONAL_TOL,
};
pub use random::{haar_random_pure, random_local_unitary, RandomStream};
pub use state::{
    apply_local_unitaries, conjugate_local_unitaries, partial_trace, DensityMatrix, LocalUnitary,
    PureState, MAX_QUBITS, STATE_TOL,
};
