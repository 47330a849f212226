use quatlinalg::Quaternion;
use surface_domain::{DiscreteForm, Domain};

use crate::{ImmersionData, ImmersionError};

/// The A/Q splitting of the trivial connection in the trivialization where
/// the complex structure acts by left multiplication with the unit normal:
/// A = (N dN + *dN)/4 and Q = (N dN - *dN)/4, so that
/// 2*A = (N *dN - dN)/2 and 2*Q = (N *dN + dN)/2.
#[derive(Clone, Debug)]
pub struct ConnectionSplit {
    pub a: DiscreteForm,
    pub q: DiscreteForm,
    /// complex-structure samples (the unit normal / harmonic map)
    pub s: Vec<Quaternion>,
}

/// Build the splitting from unit sphere-valued samples on a domain.
pub fn connection_split(
    n_field: &[Quaternion],
    domain: &Domain,
) -> Result<ConnectionSplit, ImmersionError> {
    let defect = n_field
        .iter()
        .map(|q| (q.norm() - 1.0).abs().max(q.w.abs()))
        .fold(0.0, f64::max);
    if defect > 1e-8 {
        return Err(ImmersionError::NonUnitNormal(defect));
    }
    let (dn_x, dn_jx) = domain.frame_derivatives_quat(n_field);
    let n = n_field.len();
    let mut a_x = Vec::with_capacity(n);
    let mut a_jx = Vec::with_capacity(n);
    let mut q_x = Vec::with_capacity(n);
    let mut q_jx = Vec::with_capacity(n);
    for i in 0..n {
        let nn = n_field[i];
        // (*dN)(X) = dN(JX), (*dN)(JX) = -dN(X)
        a_x.push((nn * dn_x[i] + dn_jx[i]).scale(0.25));
        a_jx.push((nn * dn_jx[i] - dn_x[i]).scale(0.25));
        q_x.push((nn * dn_x[i] - dn_jx[i]).scale(0.25));
        q_jx.push((nn * dn_jx[i] + dn_x[i]).scale(0.25));
    }
    Ok(ConnectionSplit {
        a: DiscreteForm::one_from_components(a_x, a_jx),
        q: DiscreteForm::one_from_components(q_x, q_jx),
        s: n_field.to_vec(),
    })
}

impl ConnectionSplit {
    /// Pointwise residual of the type relations *A = SA = -AS and
    /// *Q = -SQ = QS, S acting by left multiplication.
    pub fn type_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        if let (
            DiscreteForm::One { on_x: ax, on_jx: aj },
            DiscreteForm::One { on_x: qx, on_jx: qj },
        ) = (&self.a, &self.q)
        {
            for i in 0..self.s.len() {
                let s = self.s[i];
                // *A(X) = A(JX) must equal (SA)(X) = s a_x and -(AS)(X)
                worst = worst.max((aj[i] - s * ax[i]).norm());
                worst = worst.max((-ax[i] - s * aj[i]).norm());
                worst = worst.max((qj[i] + s * qx[i]).norm());
                worst = worst.max((-qx[i] + s * qj[i]).norm());
            }
        }
        worst
    }

    /// Residual of the reconstruction 2*(A+Q) = N *dN.
    pub fn reconstruction_residual(&self, domain: &Domain) -> f64 {
        let (dn_x, dn_jx) = domain.frame_derivatives_quat(&self.s);
        let mut worst = 0.0f64;
        if let (
            DiscreteForm::One { on_x: ax, on_jx: aj },
            DiscreteForm::One { on_x: qx, on_jx: qj },
        ) = (&self.a, &self.q)
        {
            for i in 0..self.s.len() {
                let s = self.s[i];
                // 2*(A+Q)(X) = 2 (A+Q)(JX); (N *dN)(X) = N dN(JX)
                let lhs_x = (aj[i] + qj[i]).scale(2.0);
                let rhs_x = s * dn_jx[i];
                let lhs_jx = (ax[i] + qx[i]).scale(-2.0);
                let rhs_jx = -(s * dn_x[i]);
                worst = worst.max((lhs_x - rhs_x).norm());
                worst = worst.max((lhs_jx - rhs_jx).norm());
            }
        }
        worst
    }

    /// Max norm of A wedge Q and Q wedge A (zero by type for exact data).
    pub fn wedge_residual(&self) -> f64 {
        let aq = surface_domain::wedge_as_quadratic(&self.a, &self.q).unwrap();
        let qa = surface_domain::wedge_as_quadratic(&self.q, &self.a).unwrap();
        aq.max_norm().max(qa.max_norm())
    }

    /// Area-weighted L2 norm of d^nabla *A on the trivialized bundle, which
    /// vanishes exactly when the sphere-valued map is harmonic. In the
    /// trivialization d^nabla of a left-multiplication-valued form is the
    /// plain exterior derivative of its quaternion values.
    pub fn harmonicity_residual(&self, domain: &Domain) -> f64 {
        let star_a = surface_domain::hodge_star(&self.a).unwrap();
        let d = surface_domain::exterior_derivative(&star_a, domain).unwrap();
        if let DiscreteForm::Two(v) = &d {
            v.iter()
                .enumerate()
                .map(|(i, q)| q.norm_sq() * domain.cell_area(i))
                .sum::<f64>()
                .sqrt()
        } else {
            unreachable!()
        }
    }
}

/// The Hopf field of an immersion, Q = N (dN - H df) / 2, stored on the
/// frame. Satisfies *Q = -N Q pointwise.
pub fn hopf_field(data: &ImmersionData) -> DiscreteForm {
    let n = data.domain.node_count();
    let (dn_x, dn_jx) = match &data.dn {
        DiscreteForm::One { on_x, on_jx } => (on_x, on_jx),
        _ => unreachable!(),
    };
    let (fx, fjx) = match &data.df {
        DiscreteForm::One { on_x, on_jx } => (on_x, on_jx),
        _ => unreachable!(),
    };
    let mut on_x = Vec::with_capacity(n);
    let mut on_jx = Vec::with_capacity(n);
    for i in 0..n {
        let h = data.mean_curvature[i];
        let nn = data.normal[i];
        on_x.push((nn * (dn_x[i] - fx[i].scale(h))).scale(0.5));
        on_jx.push((nn * (dn_jx[i] - fjx[i].scale(h))).scale(0.5));
    }
    DiscreteForm::one_from_components(on_x, on_jx)
}

/// Max relative residual of the anticommutation *Q = -N Q.
pub fn hopf_anticommutation_residual(data: &ImmersionData, q: &DiscreteForm) -> f64 {
    if let DiscreteForm::One { on_x, on_jx } = q {
        let mut worst = 0.0f64;
        for i in 0..on_x.len() {
            let nn = data.normal[i];
            let scale = on_x[i].norm().max(on_jx[i].norm()).max(1e-300);
            let r1 = (on_jx[i] + nn * on_x[i]).norm();
            let r2 = (-on_x[i] + nn * on_jx[i]).norm();
            worst = worst.max(r1.max(r2) / scale.max(1e-12));
        }
        worst
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{derive_shape_analytic, Preset};
    use surface_domain::TorusDomain;

    #[test]
    fn round_sphere_hopf_field_vanishes() {
        let data = derive_shape_analytic(&Preset::Sphere { radius: 1.0 }, 4).unwrap();
        let q = hopf_field(&data);
        assert!(q.max_norm() < 1e-9, "umbilic Hopf field {}", q.max_norm());
    }

    #[test]
    fn hopf_anticommutes_on_the_revolution_torus() {
        let data = derive_shape_analytic(
            &Preset::RevolutionTorus {
                big: std::f64::consts::SQRT_2,
                small: 1.0,
            },
            3,
        )
        .unwrap();
        let q = hopf_field(&data);
        assert!(hopf_anticommutation_residual(&data, &q) < 1e-10);
    }

    #[test]
    fn constant_normal_has_zero_split() {
        let domain = Domain::Torus(TorusDomain::square(16, 1.0));
        let field = vec![Quaternion::I; domain.node_count()];
        let split = connection_split(&field, &domain).unwrap();
        assert!(split.a.max_norm() < 1e-13);
        assert!(split.q.max_norm() < 1e-13);
    }

    #[test]
    fn equator_split_properties() {
        let t = TorusDomain::square(32, 2.0 * std::f64::consts::PI);
        let domain = Domain::Torus(t.clone());
        let field: Vec<Quaternion> = (0..domain.node_count())
            .map(|i| {
                let x = t.position(i).re;
                Quaternion::from_imag([x.cos(), x.sin(), 0.0])
            })
            .collect();
        let split = connection_split(&field, &domain).unwrap();
        assert!(split.type_residual() < 1e-10);
        assert!(split.reconstruction_residual(&domain) < 1e-10);
        assert!(split.wedge_residual() < 1e-10);
        // geodesics are harmonic
        assert!(split.harmonicity_residual(&domain) < 1e-9);
    }

    #[test]
    fn non_unit_normals_are_rejected() {
        let domain = Domain::Torus(TorusDomain::square(8, 1.0));
        let field = vec![Quaternion::from_imag([0.5, 0.0, 0.0]); domain.node_count()];
        assert!(matches!(
            connection_split(&field, &domain),
            Err(ImmersionError::NonUnitNormal(_))
        ));
    }
}
