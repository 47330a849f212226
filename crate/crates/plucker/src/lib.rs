//! Vanishing orders, prolongations in the explicit jet model, Weierstrass
//! gap sequences, the Pluecker relation with its Willmore lower bounds, and
//! a numerical Riemann-Roch index check.
//!
//! Sections are polynomials in a centered holomorphic coordinate and its
//! conjugate with quaternion coefficients, given per chart. Orders and gap
//! sequences are rank decisions made with explicit relative thresholds.

mod gaps;
mod jet;
mod poly;
mod riemann_roch;
mod section;
mod verify;

pub use gaps::{order_h, weierstrass_gaps, wronskian_roots, GapData};
pub use jet::{prolong, AdaptedConnection, JetElement};
pub use poly::BiPoly;
pub use riemann_roch::{riemann_roch_index_check, IndexReport};
pub use section::{vanishing_order, AnalyticSection, LinearSystemH};
pub use verify::{plucker_verify, willmore_lower_bound};

use thiserror::Error;

/// Default Taylor depth cap; doubled automatically up to [`MAX_DEPTH`].
pub const DEFAULT_DEPTH: usize = 24;
pub const MAX_DEPTH: usize = 96;
/// Relative magnitude threshold for rank decisions in order detection.
pub const RANK_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum PluckerError {
    #[error("all Taylor coefficients vanish below depth {0}; section is (numerically) zero")]
    DepthExceeded(usize),
    #[error("leading Taylor block at order {order} is not purely holomorphic (|mixed| = {mixed})")]
    MixedLeadingBlock { order: usize, mixed: f64 },
    #[error("coefficient matrix is rank deficient beyond the depth cap at gap level {0}")]
    RankDeficient(usize),
    #[error("basis sections must live on the same number of charts")]
    ChartMismatch,
    #[error("chart index {0} out of range")]
    BadChart(usize),
    #[error("singular-value gap {0:.2e} too small to decide kernel dimensions")]
    IndeterminateKernel(f64),
    #[error("root finding did not converge")]
    RootFinding,
}
