//! Discrete Dirac operators on flat tori and the round sphere, spectrum
//! computation with quaternionic multiplicities, and the eigenvalue bounds.
//!
//! Flat tori use spectral differentiation matrices twisted by the spin
//! structure phases, so computed eigenvalues match the Fourier oracle to
//! solver accuracy. The round sphere operator is assembled per azimuthal
//! half-integer mode from a Jacobi-weighted P1 discretization of the two
//! SUSY-partner first-order operators; each block is [[0, L^T], [L, 0]]
//! with L the (bidiagonal) Cholesky factor of the reduced second-order
//! operator, which keeps the matrix Hermitian with an exactly symmetric
//! spectrum and no spurious low modes.

mod assemble;
mod bounds;
mod solver;
mod sparse;
mod spectrum;

pub use assemble::{
    assemble_flat_torus, assemble_round_sphere, flat_torus_oracle, SpinStructureTorus,
};
pub use bounds::{check_eigenvalue_bound, dirac_to_holomorphic, BoundRow, HolomorphicDescriptor};
pub use sparse::CsrMatrix;
pub use spectrum::{compute_spectrum, Cluster, Spectrum};

use thiserror::Error;

/// A discrete Dirac operator: sparse complex Hermitian matrix together with
/// the surface area and genus it belongs to.
#[derive(Clone, Debug)]
pub struct DiracMatrix {
    pub matrix: CsrMatrix,
    pub area: f64,
    pub genus: u32,
}

impl DiracMatrix {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows
    }

    /// max-norm Hermiticity defect of the assembled matrix.
    pub fn hermiticity_residual(&self) -> f64 {
        self.matrix.hermiticity_residual()
    }
}

#[derive(Debug, Error)]
pub enum DiracError {
    #[error("requested {k} eigenvalues from a dimension-{dim} operator")]
    TooManyRequested { k: usize, dim: usize },
    #[error(
        "cluster at lambda = {lambda} has odd complex count {count}; cluster tolerance too tight"
    )]
    OddCluster { lambda: f64, count: usize },
    #[error("cluster tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("flat-torus Dirac grids must be odd (no Nyquist mode), got {nx} x {ny}")]
    EvenGrid { nx: usize, ny: usize },
    #[error("eigensolver failed to converge: {0} of {1} wanted pairs below tolerance")]
    NoConvergence(usize, usize),
    #[error("sparse factorization failed: {0}")]
    Factorization(String),
}
