use quatlinalg::Quaternion;
use surface_domain::{DiscreteForm, Domain};

use crate::presets::{imag, AnalyticImmersion};
use crate::ImmersionError;

/// A sampled immersion with its derived shape data.
///
/// All frame quantities refer to the oriented orthonormal frame (X, J_M X)
/// of the domain. `metric_density` is the induced area density
/// sqrt(EG - F^2) (equal to |df(X)|^2 for conformal samples), so that
/// integral(g) = sum g_i density_i cellarea_i.
#[derive(Clone, Debug)]
pub struct ImmersionData {
    pub domain: Domain,
    pub f: Vec<Quaternion>,
    pub df: DiscreteForm,
    pub normal: Vec<Quaternion>,
    pub mean_curvature: Vec<f64>,
    pub gauss_curvature: Vec<f64>,
    pub metric_density: Vec<f64>,
    /// max over samples of |*df - N df| / |df|
    pub conformality_residual: f64,
    /// whether f itself closes up over the domain (no translational periods)
    pub closed: bool,
    /// second frame derivatives of N, cached for the harmonicity checks
    pub dn: DiscreteForm,
}

struct FrameJet {
    fx: Quaternion,
    fjx: Quaternion,
    fxx: Quaternion,
    fxjx: Quaternion,
    fjxjx: Quaternion,
}

fn shape_from_jets(
    domain: Domain,
    f: Vec<Quaternion>,
    jets: Vec<FrameJet>,
    closed: bool,
) -> Result<ImmersionData, ImmersionError> {
    let n = domain.node_count();
    let mut normal = Vec::with_capacity(n);
    let mut mean = Vec::with_capacity(n);
    let mut gauss = Vec::with_capacity(n);
    let mut density = Vec::with_capacity(n);
    let mut on_x = Vec::with_capacity(n);
    let mut on_jx = Vec::with_capacity(n);
    let mut dn_x_v = Vec::with_capacity(n);
    let mut dn_jx_v = Vec::with_capacity(n);
    let mut conf_res = 0.0f64;
    let mut singular = Vec::new();

    for (i, jet) in jets.iter().enumerate() {
        let e = jet.fx.norm_sq();
        let g = jet.fjx.norm_sq();
        let ff = jet.fx.dot(jet.fjx);
        let det = e * g - ff * ff;
        let scale = (e + g) * 0.5;
        if det <= 1e-24 * scale * scale {
            singular.push(i);
            continue;
        }
        // cross product of imaginary quaternions = imaginary part of product
        let cross = {
            let p = jet.fx * jet.fjx;
            Quaternion::from_imag(p.imag())
        };
        let nrm = cross.norm();
        let nq = cross / nrm;
        // conformality residual |*df - N df| relative to |df|
        let r1 = (jet.fjx - nq * jet.fx).norm();
        let r2 = (-jet.fx - nq * jet.fjx).norm();
        conf_res = conf_res.max(r1.max(r2) / (e + g).sqrt());
        // second fundamental form against the normal
        let l = jet.fxx.dot(nq);
        let m = jet.fxjx.dot(nq);
        let nn = jet.fjxjx.dot(nq);
        // H sign: unit round sphere with outward normal has H = +1
        let h = -(g * l - 2.0 * ff * m + e * nn) / (2.0 * det);
        let k = (l * nn - m * m) / det;
        normal.push(nq);
        mean.push(h);
        gauss.push(k);
        density.push(det.sqrt());
        // Weingarten: dN is tangent, with <dN(X), df(Y)> = -II(X, Y); solve
        // the 2x2 metric system for the frame coefficients. This keeps dN
        // algebraically consistent with df and II at every sample.
        let solve = |b1: f64, b2: f64| -> Quaternion {
            let alpha = (g * b1 - ff * b2) / det;
            let beta = (e * b2 - ff * b1) / det;
            jet.fx.scale(alpha) + jet.fjx.scale(beta)
        };
        dn_x_v.push(solve(-l, -m));
        dn_jx_v.push(solve(-m, -nn));
        on_x.push(jet.fx);
        on_jx.push(jet.fjx);
    }
    if !singular.is_empty() {
        return Err(ImmersionError::SingularCells {
            count: singular.len(),
            first: singular[0],
        });
    }

    let df = DiscreteForm::one_from_components(on_x, on_jx);
    let dn = DiscreteForm::one_from_components(dn_x_v, dn_jx_v);
    Ok(ImmersionData {
        domain,
        f,
        df,
        normal,
        mean_curvature: mean,
        gauss_curvature: gauss,
        metric_density: density,
        conformality_residual: conf_res,
        closed,
        dn,
    })
}

/// Shape extraction from raw position samples; derivatives are taken by the
/// domain's differentiation method, so samples must descend to the closed
/// domain (torus-periodic immersions, closed sphere immersions).
pub fn derive_shape(samples: &[[f64; 3]], domain: &Domain) -> Result<ImmersionData, ImmersionError> {
    if samples.len() != domain.node_count() {
        return Err(ImmersionError::SampleCount {
            got: samples.len(),
            expected: domain.node_count(),
        });
    }
    let f: Vec<Quaternion> = samples.iter().map(|v| imag(*v)).collect();
    let (fx, fjx) = domain.frame_derivatives_quat(&f);
    let (fxx, fxjx_a) = domain.frame_derivatives_quat(&fx);
    let (fxjx_b, fjxjx) = domain.frame_derivatives_quat(&fjx);
    // average the two mixed stencils; on the sphere frame they differ by
    // tangential terms that the second-form projection discards anyway
    let jets = (0..f.len())
        .map(|i| FrameJet {
            fx: fx[i],
            fjx: fjx[i],
            fxx: fxx[i],
            fxjx: (fxjx_a[i] + fxjx_b[i]).scale(0.5),
            fjxjx: fjxjx[i],
        })
        .collect();
    shape_from_jets(domain.clone(), f, jets, true)
}

/// Shape extraction from an analytic immersion with exact chart derivatives;
/// quadrature is then the only source of numerical error.
pub fn derive_shape_analytic(
    surface: &dyn AnalyticImmersion,
    resolution: u32,
) -> Result<ImmersionData, ImmersionError> {
    let domain = surface.domain(resolution);
    let n = domain.node_count();
    let mut f = Vec::with_capacity(n);
    let mut jets = Vec::with_capacity(n);
    match &domain {
        Domain::Torus(t) => {
            let l = t.scale;
            let (t1, t2) = (t.tau.re, t.tau.im);
            for i in 0..n {
                let (s, tt) = t.grid_coords(i);
                f.push(imag(surface.value(s, tt)));
                let (fs, ft) = surface.d1(s, tt);
                let (fss, fst, ftt) = surface.d2(s, tt);
                let [fs, ft, fss, fst, ftt] =
                    [imag(fs), imag(ft), imag(fss), imag(fst), imag(ftt)];
                // chain rule: s = x/L - t1 y/(L t2), t = y/(L t2)
                let fx = fs / l;
                let fjx = (ft - fs.scale(t1)) / (l * t2);
                let fxx = fss / (l * l);
                let fxjx = (fst - fss.scale(t1)) / (l * l * t2);
                let fjxjx =
                    (fss.scale(t1 * t1) - fst.scale(2.0 * t1) + ftt) / (l * l * t2 * t2);
                jets.push(FrameJet {
                    fx,
                    fjx,
                    fxx,
                    fxjx,
                    fjxjx,
                });
            }
        }
        Domain::Sphere(s) => {
            for i in 0..n {
                let (th, ph) = s.angles(i);
                f.push(imag(surface.value(th, ph)));
                let (fu, fv) = surface.d1(th, ph);
                let (fuu, fuv, fvv) = surface.d2(th, ph);
                let sin = th.sin();
                jets.push(FrameJet {
                    fx: imag(fu),
                    fjx: imag(fv) / sin,
                    fxx: imag(fuu),
                    fxjx: imag(fuv) / sin,
                    fjxjx: imag(fvv) / (sin * sin),
                });
            }
        }
    }
    shape_from_jets(domain, f, jets, surface.is_closed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Preset;

    #[test]
    fn unit_sphere_is_umbilic_with_h_and_k_one() {
        let data = derive_shape_analytic(&Preset::Sphere { radius: 1.0 }, 4).unwrap();
        for i in 0..data.domain.node_count() {
            assert!((data.mean_curvature[i] - 1.0).abs() < 1e-10);
            assert!((data.gauss_curvature[i] - 1.0).abs() < 1e-10);
            assert!((data.normal[i].norm() - 1.0).abs() < 1e-12);
            // outward normal equals the position for the unit sphere
            assert!((data.normal[i] - data.f[i]).norm() < 1e-10);
        }
        assert!(data.conformality_residual < 1e-12);
    }

    #[test]
    fn sampled_sphere_curvatures_converge() {
        let preset = Preset::Sphere { radius: 1.0 };
        let domain = preset.domain(5);
        let samples: Vec<[f64; 3]> = match &domain {
            Domain::Sphere(s) => (0..s.node_count()).map(|i| s.position(i)).collect(),
            _ => unreachable!(),
        };
        let data = derive_shape(&samples, &domain).unwrap();
        let worst_h = data
            .mean_curvature
            .iter()
            .map(|h| (h - 1.0).abs())
            .fold(0.0, f64::max);
        let worst_k = data
            .gauss_curvature
            .iter()
            .map(|k| (k - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(worst_h < 0.01, "H error {worst_h}");
        assert!(worst_k < 0.01, "K error {worst_k}");
    }

    #[test]
    fn cylinder_has_h_one_and_k_zero() {
        let data = derive_shape_analytic(&Preset::Cylinder { radius: 0.5 }, 2).unwrap();
        for i in 0..data.domain.node_count() {
            assert!((data.mean_curvature[i] - 1.0).abs() < 1e-11);
            assert!(data.gauss_curvature[i].abs() < 1e-11);
        }
        assert!(!data.closed);
        assert!(data.conformality_residual < 1e-12);
    }

    #[test]
    fn revolution_torus_is_conformal_with_sign_changing_k() {
        let data = derive_shape_analytic(
            &Preset::RevolutionTorus {
                big: std::f64::consts::SQRT_2,
                small: 1.0,
            },
            3,
        )
        .unwrap();
        assert!(data.conformality_residual < 1e-11);
        let kmin = data.gauss_curvature.iter().cloned().fold(f64::MAX, f64::min);
        let kmax = data.gauss_curvature.iter().cloned().fold(f64::MIN, f64::max);
        assert!(kmin < -0.1 && kmax > 0.1);
        // Gauss-Bonnet: total curvature vanishes in genus 1
        let total: f64 = (0..data.domain.node_count())
            .map(|i| {
                data.gauss_curvature[i] * data.metric_density[i] * data.domain.cell_area(i)
            })
            .sum();
        let area: f64 = (0..data.domain.node_count())
            .map(|i| data.metric_density[i] * data.domain.cell_area(i))
            .sum();
        assert!(total.abs() / area < 0.01, "Gauss-Bonnet residual {total}");
    }

    #[test]
    fn degenerate_samples_are_reported() {
        let domain = Preset::Sphere { radius: 1.0 }.domain(2);
        let samples = vec![[0.0, 0.0, 0.0]; domain.node_count()];
        match derive_shape(&samples, &domain) {
            Err(ImmersionError::SingularCells { count, .. }) => assert!(count > 0),
            other => panic!("expected singular-cell error, got {other:?}"),
        }
    }
}
