//! Discrete Riemann-surface domains and differential forms.
//!
//! Two domains are provided: flat tori with modulus tau (uniform periodic
//! grids) and the round unit sphere (latitude-longitude grid for smooth
//! fields, icosphere mesh for area quadrature). Degree-1 forms store both
//! frame components (w(X), w(J_M X)) on an oriented orthonormal frame;
//! degree-2 forms are identified with quadratic forms via w(X) = w(X, J_M X).

mod domain;
mod form;
mod icosphere;
mod spectral;

pub use domain::{DiffMethod, Domain, DomainConfig, SphereDomain, TorusDomain};
pub use form::{
    exterior_derivative, hodge_star, integrate_2form, wedge_as_quadratic, DiscreteForm,
};
pub use icosphere::IcosphereMesh;
pub use spectral::{spectral_antiderivative, spectral_derivative_matrix};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DomainError {
    #[error("operation requires a degree-{expected} form, got degree {got}")]
    DegreeMismatch { expected: u8, got: u8 },
    #[error("forms live on incompatible domains ({0} vs {1} samples)")]
    IncompatibleDomains(usize, usize),
    #[error("torus modulus must have Im tau > 0, got {0}")]
    BadModulus(f64),
    #[error("invalid domain config: {0}")]
    BadConfig(String),
}
