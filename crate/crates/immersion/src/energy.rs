use quatlinalg::Quaternion;
use surface_domain::{hodge_star, wedge_as_quadratic, DiscreteForm, Domain};

use crate::split::{connection_split, hopf_field};
use crate::{ImmersionData, ImmersionError};

/// Willmore energy by the curvature formula, W = integral (H^2 - K) |df|^2.
///
/// Requires a closed immersion (no translational periods); use
/// [`willmore_integrals_over_cell`] for period-cell cross checks.
pub fn willmore_energy(data: &ImmersionData) -> Result<f64, ImmersionError> {
    if !data.closed {
        return Err(ImmersionError::SampleCount {
            got: 0,
            expected: data.domain.node_count(),
        });
    }
    Ok(willmore_integrals_over_cell(data).0)
}

/// Both Willmore quadratures over one period cell of the domain:
/// the (H^2 - K) formula and 2 integral <Q ^ *Q> built from the Hopf field.
pub fn willmore_integrals_over_cell(data: &ImmersionData) -> (f64, f64) {
    let domain = &data.domain;
    let curvature: f64 = (0..domain.node_count())
        .map(|i| {
            (data.mean_curvature[i].powi(2) - data.gauss_curvature[i])
                * data.metric_density[i]
                * domain.cell_area(i)
        })
        .sum();
    let q = hopf_field(data);
    let hopf = 2.0 * trace_energy(&q, domain);
    (curvature, hopf)
}

/// integral of <w ^ *w> for an End_-(V)-valued form given by left
/// multiplication with (near-)imaginary quaternion values.
fn trace_energy(w: &DiscreteForm, domain: &Domain) -> f64 {
    let sw = hodge_star(w).expect("degree-1 form");
    let dens = wedge_as_quadratic(w, &sw).expect("compatible forms");
    match surface_domain::integrate_2form(&dens, domain) {
        Ok(total) => total.w,
        Err(_) => f64::NAN,
    }
}

#[derive(Clone, Debug)]
pub struct EnergyReport {
    /// Dirichlet energy E(S) = 1/2 integral |dN|^2
    pub energy: f64,
    /// Willmore energy of the Kbar part of the splitting
    pub willmore: f64,
    pub degree: i64,
    pub degree_gap: f64,
    /// |E - 2W - 4 pi deg|
    pub relation_residual: f64,
}

/// Dirichlet energy of a sphere-valued map together with the energy
/// identity E = 2 W + 4 pi deg.
pub fn harmonic_energy_and_relation(
    n_field: &[Quaternion],
    domain: &Domain,
) -> Result<EnergyReport, ImmersionError> {
    let split = connection_split(n_field, domain)?;
    let (dn_x, dn_jx) = domain.frame_derivatives_quat(n_field);
    let energy: f64 = (0..n_field.len())
        .map(|i| 0.5 * (dn_x[i].norm_sq() + dn_jx[i].norm_sq()) * domain.cell_area(i))
        .sum();
    let willmore = 2.0 * trace_energy(&split.q, domain);
    let (degree, degree_gap) = degree_of_normal_raw(n_field, domain)?;
    let relation_residual =
        (energy - 2.0 * willmore - 4.0 * std::f64::consts::PI * degree as f64).abs();
    Ok(EnergyReport {
        energy,
        willmore,
        degree,
        degree_gap,
        relation_residual,
    })
}

/// Mapping degree of a unit-sphere-valued field: the pulled-back area form
/// integrated and divided by 4 pi, then rounded.
pub fn degree_of_normal(n_field: &[Quaternion], domain: &Domain) -> Result<i64, ImmersionError> {
    let (deg, gap) = degree_of_normal_raw(n_field, domain)?;
    if gap > 0.1 {
        return Err(ImmersionError::DegreeRounding(gap));
    }
    Ok(deg)
}

fn degree_of_normal_raw(
    n_field: &[Quaternion],
    domain: &Domain,
) -> Result<(i64, f64), ImmersionError> {
    let defect = n_field
        .iter()
        .map(|q| (q.norm() - 1.0).abs().max(q.w.abs()))
        .fold(0.0, f64::max);
    if defect > 1e-8 {
        return Err(ImmersionError::NonUnitNormal(defect));
    }
    let (dn_x, dn_jx) = domain.frame_derivatives_quat(n_field);
    let signed_area: f64 = (0..n_field.len())
        .map(|i| {
            let cross = Quaternion::from_imag((dn_x[i] * dn_jx[i]).imag());
            n_field[i].dot(cross) * domain.cell_area(i)
        })
        .sum();
    let raw = signed_area / (4.0 * std::f64::consts::PI);
    let deg = raw.round();
    Ok((deg as i64, (raw - deg).abs()))
}
