use crate::Spectrum;

/// One row of the eigenvalue-bound report: lambda^2 area >= 4 pi m^2 in
/// genus 0 and (pi/g)(m^2 - g^2) in genus g >= 1.
#[derive(Clone, Copy, Debug)]
pub struct BoundRow {
    pub lambda: f64,
    pub mult_quat: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

/// Evaluate the eigenvalue bound for every cluster. `rel_slack` absorbs the
/// discretization error of lambda in the pass verdict (the bounds are sharp
/// on the round sphere, where lhs = rhs exactly).
pub fn check_eigenvalue_bound(
    spectrum: &Spectrum,
    area: f64,
    genus: u32,
    rel_slack: f64,
) -> Vec<BoundRow> {
    spectrum
        .clusters
        .iter()
        .map(|c| {
            let m = c.mult_quat as f64;
            let lhs = c.lambda * c.lambda * area;
            let rhs = if genus == 0 {
                4.0 * std::f64::consts::PI * m * m
            } else {
                let g = genus as f64;
                std::f64::consts::PI / g * (m * m - g * g)
            };
            let slack = rel_slack * lhs.abs().max(rhs.abs()).max(1e-12);
            BoundRow {
                lambda: c.lambda,
                mult_quat: c.mult_quat,
                lhs,
                rhs,
                margin: lhs - rhs,
                pass: lhs >= rhs - slack,
            }
        })
        .collect()
}

/// The holomorphic-structure data attached to a Dirac eigenvalue: the
/// eigenvalue equation is the holomorphicity condition for delbar + lambda Q
/// on the spin bundle (degree g - 1), with Willmore energy lambda^2 area and
/// h^0 equal to the quaternionic multiplicity.
#[derive(Clone, Copy, Debug)]
pub struct HolomorphicDescriptor {
    pub degree: i64,
    pub genus: u32,
    pub willmore: f64,
    pub h0: usize,
}

pub fn dirac_to_holomorphic(
    lambda: f64,
    area: f64,
    genus: u32,
    mult_quat: usize,
) -> HolomorphicDescriptor {
    HolomorphicDescriptor {
        degree: genus as i64 - 1,
        genus,
        willmore: lambda * lambda * area,
        h0: mult_quat,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Cluster;

    fn spectrum(rows: &[(f64, usize)]) -> Spectrum {
        Spectrum {
            clusters: rows
                .iter()
                .map(|&(lambda, mult_quat)| Cluster {
                    lambda,
                    mult_quat,
                    complex_count: 2 * mult_quat,
                    gap: 1e-6,
                })
                .collect(),
        }
    }

    #[test]
    fn sphere_bound_is_sharp_at_lambda_one() {
        let s = spectrum(&[(1.0, 1)]);
        let rows = check_eigenvalue_bound(&s, 4.0 * std::f64::consts::PI, 0, 1e-9);
        assert!(rows[0].pass);
        assert!(rows[0].margin.abs() < 1e-9);
    }

    #[test]
    fn kernel_cluster_passes_degenerate_bound() {
        for g in 1..4u32 {
            let s = spectrum(&[(0.0, g as usize)]);
            let rows = check_eigenvalue_bound(&s, 2.0, g, 1e-9);
            assert!(rows[0].pass);
            assert!(rows[0].rhs.abs() < 1e-12);
        }
    }

    #[test]
    fn square_torus_half_half_bound() {
        // lambda_min = 1/sqrt(2), quaternionic multiplicity 2, area 4 pi^2
        let s = spectrum(&[(0.5f64.sqrt(), 2)]);
        let rows = check_eigenvalue_bound(&s, 4.0 * std::f64::consts::PI.powi(2), 1, 1e-9);
        let r = &rows[0];
        assert!((r.lhs - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-9);
        assert!((r.rhs - 3.0 * std::f64::consts::PI).abs() < 1e-9);
        assert!(r.pass);
    }

    #[test]
    fn descriptor_examples() {
        let d = dirac_to_holomorphic(0.0, 7.0, 1, 1);
        assert_eq!(d.degree, 0);
        assert!(d.willmore.abs() < 1e-15);
        let d = dirac_to_holomorphic(2.0, 4.0 * std::f64::consts::PI, 0, 2);
        assert_eq!(d.degree, -1);
        assert_eq!(d.h0, 2);
        assert!((d.willmore - 16.0 * std::f64::consts::PI).abs() < 1e-12);
        // quadratic scaling in lambda
        let d1 = dirac_to_holomorphic(1.5, 2.0, 0, 1);
        let d2 = dirac_to_holomorphic(3.0, 2.0, 0, 1);
        assert!((d2.willmore - 4.0 * d1.willmore).abs() < 1e-12);
    }
}
