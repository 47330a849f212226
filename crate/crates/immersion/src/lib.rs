//! Differential geometry of conformal immersions into R^3, viewed inside
//! the imaginary quaternions: Gauss map, curvatures, Hopf field, Willmore
//! energy, harmonic-map energy, and the A/Q splitting of the trivial
//! connection.
//!
//! Sign conventions: conformality is *df = N df on the oriented frame
//! (X, J_M X); the mean curvature is normalized so that the unit round
//! sphere with outward normal N = f has H = +1, which is exactly the
//! normalization that makes the Hopf field Q = N (dN - H df) / 2 vanish on
//! totally umbilic surfaces.

mod energy;
mod input;
mod presets;
mod shape;
mod split;

pub use energy::{degree_of_normal, harmonic_energy_and_relation, willmore_energy, EnergyReport};
pub use input::{ImmersionConfig, ImmersionKind};
pub use presets::{AnalyticImmersion, Preset};
pub use shape::{derive_shape, derive_shape_analytic, ImmersionData};
pub use split::{connection_split, hopf_field, ConnectionSplit};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImmersionError {
    #[error("df is singular (rank < 2) at {count} cells, first at index {first}")]
    SingularCells { count: usize, first: usize },
    #[error("normal field is not unit length: max | |N|-1 | = {0}")]
    NonUnitNormal(f64),
    #[error("sample count {got} does not match domain nodes {expected}")]
    SampleCount { got: usize, expected: usize },
    #[error(transparent)]
    Domain(#[from] surface_domain::DomainError),
    #[error("degree rounding gap {0} exceeds 0.1; refine the grid")]
    DegreeRounding(f64),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}
