use num_complex::Complex64;
use quatlinalg::Quaternion;
use surface_domain::{Domain, SphereDomain, TorusDomain};

use crate::ImmersionError;

/// An immersion given in closed form on the chart coordinates of a domain.
///
/// Chart coordinates are the grid coordinates (s, t) in [0,1)^2 on a torus
/// and the angles (theta, phi) on the sphere. Implementors supply exact
/// first and second partial derivatives in chart coordinates; the frame
/// conversion happens in `derive_shape_analytic`.
pub trait AnalyticImmersion {
    fn domain(&self, resolution: u32) -> Domain;
    fn value(&self, u: f64, v: f64) -> [f64; 3];
    /// (f_u, f_v)
    fn d1(&self, u: f64, v: f64) -> ([f64; 3], [f64; 3]);
    /// (f_uu, f_uv, f_vv)
    fn d2(&self, u: f64, v: f64) -> ([f64; 3], [f64; 3], [f64; 3]);
    /// Whether f itself descends to the closed domain (no translational
    /// periods). Derived quantities are always periodic.
    fn is_closed(&self) -> bool {
        true
    }
}

/// Bundled analytic immersions used by the test suites and the CLI.
#[derive(Clone, Debug)]
pub enum Preset {
    /// Round sphere of the given radius, outward normal, H = 1/radius.
    Sphere { radius: f64 },
    /// Straight cylinder of the given radius about the z-axis, outward
    /// normal; conformal chart (x, y) = (scale s, scale t), H = 1/(2 radius).
    Cylinder { radius: f64 },
    /// Torus of revolution with radii (big, small), realized as the
    /// stereographic image of a flat torus in S^3; conformal chart.
    RevolutionTorus { big: f64, small: f64 },
}

impl Preset {
    pub fn by_name(name: &str, params: &std::collections::HashMap<String, f64>) -> Result<Self, ImmersionError> {
        let get = |k: &str, d: f64| params.get(k).copied().unwrap_or(d);
        match name {
            "sphere" => Ok(Preset::Sphere {
                radius: get("radius", 1.0),
            }),
            "cylinder" => Ok(Preset::Cylinder {
                radius: get("radius", 0.5),
            }),
            "revolution-torus" => Ok(Preset::RevolutionTorus {
                big: get("R", std::f64::consts::SQRT_2),
                small: get("r", 1.0),
            }),
            other => Err(ImmersionError::UnknownPreset(other.to_string())),
        }
    }

    fn torus_params(big: f64, small: f64) -> (f64, f64, f64, f64) {
        // c = R/r; the flat torus (nu cos a, nu sin a, xi cos b, xi sin b)
        // in S^3 stereographs to the (R, r) torus of revolution after
        // scaling by s = r sqrt(c^2-1).
        let c = big / small;
        let xi = 1.0 / c;
        let nu = (1.0 - xi * xi).sqrt();
        let w = (c * c - 1.0).sqrt();
        let s = small * w;
        (c, nu, xi, s)
    }
}

impl AnalyticImmersion for Preset {
    fn domain(&self, resolution: u32) -> Domain {
        match *self {
            Preset::Sphere { .. } => Domain::Sphere(SphereDomain::new(resolution)),
            Preset::Cylinder { radius } => {
                // one circumference 2 pi radius along x, same period in y
                let side = 2.0 * std::f64::consts::PI * radius;
                Domain::Torus(TorusDomain::square(8 << resolution, side))
            }
            Preset::RevolutionTorus { big, small } => {
                let (_, nu, xi, _) = Self::torus_params(big, small);
                let n = 8usize << resolution;
                let tau = Complex64::new(0.0, xi / nu);
                Domain::Torus(
                    TorusDomain::new(tau, n, n)
                        .unwrap()
                        .with_scale(2.0 * std::f64::consts::PI * nu),
                )
            }
        }
    }

    fn value(&self, u: f64, v: f64) -> [f64; 3] {
        match *self {
            Preset::Sphere { radius } => [
                radius * u.sin() * v.cos(),
                radius * u.sin() * v.sin(),
                radius * u.cos(),
            ],
            Preset::Cylinder { radius } => {
                // chart (s, t): x = 2 pi radius s, y = 2 pi radius t
                let ang = 2.0 * std::f64::consts::PI * u;
                [
                    radius * ang.cos(),
                    radius * ang.sin(),
                    2.0 * std::f64::consts::PI * radius * v,
                ]
            }
            Preset::RevolutionTorus { big, small } => {
                let (c, _, _, s) = Self::torus_params(big, small);
                let (a, b) = (2.0 * std::f64::consts::PI * u, 2.0 * std::f64::consts::PI * v);
                let w = (c * c - 1.0).sqrt();
                let g = 1.0 / (c - b.sin());
                [s * w * a.cos() * g, s * w * a.sin() * g, s * b.cos() * g]
            }
        }
    }

    fn d1(&self, u: f64, v: f64) -> ([f64; 3], [f64; 3]) {
        match *self {
            Preset::Sphere { radius } => (
                [
                    radius * u.cos() * v.cos(),
                    radius * u.cos() * v.sin(),
                    -radius * u.sin(),
                ],
                [-radius * u.sin() * v.sin(), radius * u.sin() * v.cos(), 0.0],
            ),
            Preset::Cylinder { radius } => {
                let tp = 2.0 * std::f64::consts::PI;
                let ang = tp * u;
                (
                    [-radius * tp * ang.sin(), radius * tp * ang.cos(), 0.0],
                    [0.0, 0.0, tp * radius],
                )
            }
            Preset::RevolutionTorus { big, small } => {
                let (c, _, _, s) = Self::torus_params(big, small);
                let tp = 2.0 * std::f64::consts::PI;
                let (a, b) = (tp * u, tp * v);
                let w = (c * c - 1.0).sqrt();
                let g = 1.0 / (c - b.sin());
                let gp = b.cos() * g * g; // d g / d b
                let fa = [-s * w * a.sin() * g * tp, s * w * a.cos() * g * tp, 0.0];
                let fb = [
                    s * w * a.cos() * gp * tp,
                    s * w * a.sin() * gp * tp,
                    s * (-b.sin() * g + b.cos() * gp) * tp,
                ];
                (fa, fb)
            }
        }
    }

    fn d2(&self, u: f64, v: f64) -> ([f64; 3], [f64; 3], [f64; 3]) {
        match *self {
            Preset::Sphere { radius } => {
                let (st, ct, sp, cp) = (u.sin(), u.cos(), v.sin(), v.cos());
                (
                    [-radius * st * cp, -radius * st * sp, -radius * ct],
                    [-radius * ct * sp, radius * ct * cp, 0.0],
                    [-radius * st * cp, -radius * st * sp, 0.0],
                )
            }
            Preset::Cylinder { radius } => {
                let tp = 2.0 * std::f64::consts::PI;
                let ang = tp * u;
                (
                    [
                        -radius * tp * tp * ang.cos(),
                        -radius * tp * tp * ang.sin(),
                        0.0,
                    ],
                    [0.0, 0.0, 0.0],
                    [0.0, 0.0, 0.0],
                )
            }
            Preset::RevolutionTorus { big, small } => {
                let (c, _, _, s) = Self::torus_params(big, small);
                let tp = 2.0 * std::f64::consts::PI;
                let (a, b) = (tp * u, tp * v);
                let w = (c * c - 1.0).sqrt();
                let g = 1.0 / (c - b.sin());
                let gp = b.cos() * g * g;
                let gpp = -b.sin() * g * g + 2.0 * b.cos() * g * gp;
                let faa = [
                    -s * w * a.cos() * g * tp * tp,
                    -s * w * a.sin() * g * tp * tp,
                    0.0,
                ];
                let fab = [
                    -s * w * a.sin() * gp * tp * tp,
                    s * w * a.cos() * gp * tp * tp,
                    0.0,
                ];
                let fbb = [
                    s * w * a.cos() * gpp * tp * tp,
                    s * w * a.sin() * gpp * tp * tp,
                    s * (-b.cos() * g - 2.0 * b.sin() * gp + b.cos() * gpp) * tp * tp,
                ];
                (faa, fab, fbb)
            }
        }
    }

    fn is_closed(&self) -> bool {
        !matches!(self, Preset::Cylinder { .. })
    }
}

pub(crate) fn imag(v: [f64; 3]) -> Quaternion {
    Quaternion::from_imag(v)
}
