//! Willmore connections on tori: the mu-family of flat Sl(2,C) connections
//! attached to a harmonic map into the 2-sphere, holonomy by adaptive
//! monodromy integration, branch-point detection for the spectral curve,
//! CMC reconstruction, and the energy/area bound verdicts.
//!
//! Conventions: the harmonic map N acts as the complex structure by left
//! multiplication in the trivialized bundle; A = (N dN + *dN)/4; the family
//! is nabla_mu = d + c1(mu) A + c2(mu) I *A with c1 = (mu + 1/mu - 2)/2,
//! c2 = (1/mu - mu)/2 and I the right multiplication by i, which is the
//! scalar i in the complex doubling. Parallel transport solves
//! dPsi = -omega_mu(gamma') Psi.

mod branch;
mod cmc;
mod family;
mod harmonic;
mod holonomy;
mod input;
mod verdict;

pub use branch::{branch_detect, BranchPoint, SpectralSummary};
pub use cmc::{integrate_cmc, CmcReconstruction};
pub use family::{connection_family, curvature_residual, ConnectionFamilySample};
pub use harmonic::{DelaunayUnduloid, EquatorGeodesic, HarmonicMap, HarmonicTorusData, SampledMap};
pub use holonomy::{holonomy, Generator, HolonomySample};
pub use input::{HarmonicConfig, HarmonicPresetConfig};
pub use verdict::{energy_area_bound, s3_willmore_convert, small_energy_verdict, SurfaceKind, Verdict};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("mu must be nonzero")]
    ZeroMu,
    #[error("monodromy step controller failed: step {step:.3e} below floor at loop parameter {t:.6}")]
    Integration { t: f64, step: f64 },
    #[error("A has a zero on the grid (min |A| = {0:.3e}); the immersion condition fails")]
    BranchPointOfA(f64),
    #[error(transparent)]
    Immersion(#[from] immersion::ImmersionError),
    #[error("unknown harmonic preset `{0}`")]
    UnknownPreset(String),
    #[error("sample field has wrong length: {got} vs {expected}")]
    SampleCount { got: usize, expected: usize },
}
