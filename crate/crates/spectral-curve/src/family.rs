use num_complex::Complex64;
use quatlinalg::Quaternion;

use crate::harmonic::{a_form_at, HarmonicMap};
use crate::SpectralError;

/// 2x2 complex matrix in row-major order.
pub type Mat2 = [Complex64; 4];

pub(crate) fn mat_zero() -> Mat2 {
    [Complex64::new(0.0, 0.0); 4]
}

pub(crate) fn mat_id() -> Mat2 {
    [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    ]
}

pub(crate) fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

pub(crate) fn mat_add(a: &Mat2, b: &Mat2) -> Mat2 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

pub(crate) fn mat_scale(a: &Mat2, c: Complex64) -> Mat2 {
    [a[0] * c, a[1] * c, a[2] * c, a[3] * c]
}

pub(crate) fn mat_sub(a: &Mat2, b: &Mat2) -> Mat2 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

pub(crate) fn mat_norm(a: &Mat2) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn mat_det(a: &Mat2) -> Complex64 {
    a[0] * a[3] - a[1] * a[2]
}

pub(crate) fn mat_trace(a: &Mat2) -> Complex64 {
    a[0] + a[3]
}

pub(crate) fn rep(q: Quaternion) -> Mat2 {
    q.rep()
}

/// Family coefficients c1 = (mu + 1/mu - 2)/2 and c2 = (1/mu - mu)/2.
pub(crate) fn coefficients(mu: Complex64) -> (Complex64, Complex64) {
    let inv = Complex64::new(1.0, 0.0) / mu;
    (
        0.5 * (mu + inv - Complex64::new(2.0, 0.0)),
        0.5 * (inv - mu),
    )
}

/// The connection form of nabla_mu at a chart point, on the frame (X, JX):
/// omega(V) = c1 rep(A(V)) + i c2 rep((*A)(V)).
pub(crate) fn omega_at(
    map: &dyn HarmonicMap,
    mu: Complex64,
    s: f64,
    t: f64,
) -> (Mat2, Mat2) {
    let (c1, c2) = coefficients(mu);
    let (ax, ajx) = a_form_at(map, s, t);
    let i = Complex64::new(0.0, 1.0);
    // (*A)(X) = A(JX), (*A)(JX) = -A(X)
    let wx = mat_add(
        &mat_scale(&rep(ax), c1),
        &mat_scale(&rep(ajx), i * c2),
    );
    let wjx = mat_add(
        &mat_scale(&rep(ajx), c1),
        &mat_scale(&rep(ax), -i * c2),
    );
    (wx, wjx)
}

/// Sampled connection form of nabla_mu on the torus grid.
pub struct ConnectionFamilySample {
    pub mu: Complex64,
    pub on_x: Vec<Mat2>,
    pub on_jx: Vec<Mat2>,
}

pub fn connection_family(
    data: &crate::HarmonicTorusData,
    mu: Complex64,
) -> Result<ConnectionFamilySample, SpectralError> {
    if mu.norm() == 0.0 {
        return Err(SpectralError::ZeroMu);
    }
    let d = data.domain();
    let n = d.node_count();
    let mut on_x = Vec::with_capacity(n);
    let mut on_jx = Vec::with_capacity(n);
    for i in 0..n {
        let (s, t) = d.grid_coords(i);
        let (wx, wjx) = omega_at(data.map.as_ref(), mu, s, t);
        on_x.push(wx);
        on_jx.push(wjx);
    }
    Ok(ConnectionFamilySample { mu, on_x, on_jx })
}

impl ConnectionFamilySample {
    /// Max deviation of the form from su(2) (anti-Hermitian, traceless),
    /// which characterizes the unitary branch |mu| = 1.
    pub fn unitarity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for w in self.on_x.iter().chain(&self.on_jx) {
            // anti-Hermitian: w + w^H = 0
            worst = worst.max((w[0] + w[0].conj()).norm());
            worst = worst.max((w[3] + w[3].conj()).norm());
            worst = worst.max((w[1] + w[2].conj()).norm());
        }
        worst
    }
}

/// Area-weighted L2 norm of the curvature dR + R ^ R of the sampled family
/// connection, by centered differences of the frame components on the grid.
/// O(h^2) small exactly when the underlying map is harmonic.
pub fn curvature_residual(data: &crate::HarmonicTorusData, mu: Complex64) -> Result<f64, SpectralError> {
    let sample = connection_family(data, mu)?;
    let d = data.domain();
    let (nx, ny) = (d.nx, d.ny);
    let l = d.scale;
    let (t1, t2) = (d.tau.re, d.tau.im);
    let hx = 1.0 / nx as f64;
    let hy = 1.0 / ny as f64;
    let idx = |a: usize, b: usize| (b % ny) * nx + (a % nx);
    let mut total = 0.0f64;
    for b in 0..ny {
        for a in 0..nx {
            // grid-direction derivatives of the component matrices
            let dxw = |field: &Vec<Mat2>, along_s: bool| -> Mat2 {
                let (p, m) = if along_s {
                    (field[idx(a + 1, b)], field[idx(a + nx - 1, b)])
                } else {
                    (field[idx(a, b + 1)], field[idx(a, b + ny - 1)])
                };
                let h = if along_s { hx } else { hy };
                mat_scale(&mat_sub(&p, &m), Complex64::new(1.0 / (2.0 * h), 0.0))
            };
            // frame derivatives via the lattice chain rule:
            // d_X = ds / L, d_JX = (dt - tau1 ds) / (L tau2)
            let ds_wjx = dxw(&sample.on_jx, true);
            let ds_wx = dxw(&sample.on_x, true);
            let dt_wx = dxw(&sample.on_x, false);
            let dx_wjx = mat_scale(&ds_wjx, Complex64::new(1.0 / l, 0.0));
            let djx_wx = mat_scale(
                &mat_sub(&dt_wx, &mat_scale(&ds_wx, Complex64::new(t1, 0.0))),
                Complex64::new(1.0 / (l * t2), 0.0),
            );
            let i = idx(a, b);
            let comm = mat_sub(
                &mat_mul(&sample.on_x[i], &sample.on_jx[i]),
                &mat_mul(&sample.on_jx[i], &sample.on_x[i]),
            );
            let r = mat_add(&mat_sub(&dx_wjx, &djx_wx), &comm);
            total += mat_norm(&r).powi(2) * d.cell_area();
        }
    }
    Ok(total.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{DelaunayUnduloid, EquatorGeodesic, HarmonicTorusData};

    #[test]
    fn family_at_one_is_the_base_connection() {
        let data = HarmonicTorusData::new(Box::new(EquatorGeodesic::square_2pi(16)));
        let s = connection_family(&data, Complex64::new(1.0, 0.0)).unwrap();
        for w in s.on_x.iter().chain(&s.on_jx) {
            assert!(mat_norm(w) < 1e-14);
        }
    }

    #[test]
    fn unit_circle_forms_are_su2() {
        let data = HarmonicTorusData::new(Box::new(EquatorGeodesic::square_2pi(16)));
        for th in [0.3, 1.2, 2.9] {
            let mu = Complex64::from_polar(1.0, th);
            let s = connection_family(&data, mu).unwrap();
            assert!(s.unitarity_residual() < 1e-12, "theta = {th}");
        }
        // off the circle the form is genuinely non-unitary
        let s = connection_family(&data, Complex64::new(0.5, 0.0)).unwrap();
        assert!(s.unitarity_residual() > 1e-3);
    }

    #[test]
    fn zero_mu_is_rejected() {
        let data = HarmonicTorusData::new(Box::new(EquatorGeodesic::square_2pi(8)));
        assert!(matches!(
            connection_family(&data, Complex64::new(0.0, 0.0)),
            Err(SpectralError::ZeroMu)
        ));
    }

    #[test]
    fn curvature_vanishes_at_second_order_for_harmonic_maps() {
        // the sampled-form curvature is a centered-difference residual, so
        // harmonicity shows as O(h^2) decay under grid refinement
        for mu in [
            Complex64::new(0.3, 0.0),
            Complex64::new(-1.7, 0.4),
            Complex64::new(0.2, -0.9),
        ] {
            let r24 = curvature_residual(
                &HarmonicTorusData::new(Box::new(EquatorGeodesic::square_2pi(24))),
                mu,
            )
            .unwrap();
            let r48 = curvature_residual(
                &HarmonicTorusData::new(Box::new(EquatorGeodesic::square_2pi(48))),
                mu,
            )
            .unwrap();
            let slope = (r24 / r48).log2();
            assert!(slope > 1.9, "mu = {mu}: slope {slope} ({r24} -> {r48})");
        }
        let r24 = curvature_residual(
            &HarmonicTorusData::new(Box::new(DelaunayUnduloid::new(0.4, 24))),
            Complex64::new(-1.5, 0.2),
        )
        .unwrap();
        let r48 = curvature_residual(
            &HarmonicTorusData::new(Box::new(DelaunayUnduloid::new(0.4, 48))),
            Complex64::new(-1.5, 0.2),
        )
        .unwrap();
        let slope = (r24 / r48).log2();
        assert!(slope > 1.8, "unduloid slope {slope} ({r24} -> {r48})");
    }

    #[test]
    fn non_harmonic_perturbation_leaves_a_curvature_floor() {
        // N + eps bump is no longer harmonic: at mu = -1 the curvature
        // residual has an O(eps) floor that refinement does not remove
        struct Perturbed {
            base: EquatorGeodesic,
            eps: f64,
        }
        impl crate::HarmonicMap for Perturbed {
            fn domain(&self) -> &surface_domain::TorusDomain {
                self.base.domain()
            }
            fn n_at(&self, s: f64, t: f64) -> quatlinalg::Quaternion {
                let n = self.base.n_at(s, t);
                let bump = self.eps
                    * (2.0 * std::f64::consts::PI * s).sin()
                    * (2.0 * std::f64::consts::PI * t).cos();
                let v = [n.x, n.y, bump];
                let nrm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                quatlinalg::Quaternion::from_imag([v[0] / nrm, v[1] / nrm, v[2] / nrm])
            }
            fn dn_at(&self, s: f64, t: f64) -> (quatlinalg::Quaternion, quatlinalg::Quaternion) {
                let h = 1e-6;
                let l = self.domain().scale;
                let dx = (self.n_at(s + h, t) - self.n_at(s - h, t)).scale(1.0 / (2.0 * h * l));
                let djx = (self.n_at(s, t + h) - self.n_at(s, t - h)).scale(1.0 / (2.0 * h * l));
                (dx, djx)
            }
        }
        let mu = Complex64::new(-1.0, 0.0);
        let mut floors = Vec::new();
        for n in [24, 48] {
            let data = HarmonicTorusData::new(Box::new(Perturbed {
                base: EquatorGeodesic::square_2pi(n),
                eps: 0.05,
            }));
            floors.push(curvature_residual(&data, mu).unwrap());
        }
        assert!(floors[0] > 1e-4, "no floor: {:?}", floors);
        // refinement does not remove the floor (stays the same order)
        assert!(floors[1] > 0.3 * floors[0], "{:?}", floors);
    }
}
