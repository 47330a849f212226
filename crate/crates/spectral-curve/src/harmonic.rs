use num_complex::Complex64;
use quatlinalg::Quaternion;
use surface_domain::{Domain, TorusDomain};

use crate::SpectralError;

/// A sphere-valued map on a flat torus that can be evaluated (with its
/// frame derivatives) at arbitrary chart points, as needed by the loop
/// integrals. Chart coordinates are the grid coordinates (s, t) in [0,1)^2.
pub trait HarmonicMap {
    fn domain(&self) -> &TorusDomain;
    fn n_at(&self, s: f64, t: f64) -> Quaternion;
    /// frame derivatives (d_X N, d_JX N) at a chart point
    fn dn_at(&self, s: f64, t: f64) -> (Quaternion, Quaternion);
}

/// Harmonic-map data bundled with its grid samples.
pub struct HarmonicTorusData {
    pub map: Box<dyn HarmonicMap>,
    pub samples: Vec<Quaternion>,
}

impl HarmonicTorusData {
    pub fn new(map: Box<dyn HarmonicMap>) -> Self {
        let d = map.domain().clone();
        let samples = (0..d.node_count())
            .map(|i| {
                let (s, t) = d.grid_coords(i);
                map.n_at(s, t)
            })
            .collect();
        Self { map, samples }
    }

    pub fn domain(&self) -> &TorusDomain {
        self.map.domain()
    }

    /// The A/Q splitting on the grid.
    pub fn split(&self) -> Result<immersion::ConnectionSplit, SpectralError> {
        let domain = Domain::Torus(self.domain().clone());
        Ok(immersion::connection_split(&self.samples, &domain)?)
    }

    /// Dirichlet energy, Willmore energy of the Kbar part, degree and the
    /// E = 2W + 4 pi deg residual.
    pub fn energy_report(&self) -> Result<immersion::EnergyReport, SpectralError> {
        let domain = Domain::Torus(self.domain().clone());
        Ok(immersion::harmonic_energy_and_relation(
            &self.samples,
            &domain,
        )?)
    }
}

/// The A-form values at an arbitrary chart point:
/// A(X) = (N dN_X + dN_JX)/4, A(JX) = (N dN_JX - dN_X)/4.
pub(crate) fn a_form_at(map: &dyn HarmonicMap, s: f64, t: f64) -> (Quaternion, Quaternion) {
    let n = map.n_at(s, t);
    let (dx, djx) = map.dn_at(s, t);
    let ax = (n * dx + djx).scale(0.25);
    let ajx = (n * djx - dx).scale(0.25);
    (ax, ajx)
}

/// Geodesic (equator) map N = (cos 2 pi s, sin 2 pi s, 0): a homomorphism
/// of the torus onto a great circle; harmonic with spectral genus zero.
pub struct EquatorGeodesic {
    domain: TorusDomain,
}

impl EquatorGeodesic {
    pub fn new(domain: TorusDomain) -> Self {
        Self { domain }
    }

    pub fn square_2pi(n: usize) -> Self {
        Self::new(TorusDomain::square(n, 2.0 * std::f64::consts::PI))
    }
}

impl HarmonicMap for EquatorGeodesic {
    fn domain(&self) -> &TorusDomain {
        &self.domain
    }

    fn n_at(&self, s: f64, _t: f64) -> Quaternion {
        let a = 2.0 * std::f64::consts::PI * s;
        Quaternion::from_imag([a.cos(), a.sin(), 0.0])
    }

    fn dn_at(&self, s: f64, _t: f64) -> (Quaternion, Quaternion) {
        // d/ds = L d/dX along the first euclidean direction
        let a = 2.0 * std::f64::consts::PI * s;
        let rate = 2.0 * std::f64::consts::PI / self.domain.scale;
        (
            Quaternion::from_imag([-a.sin() * rate, a.cos() * rate, 0.0]),
            Quaternion::zero(),
        )
    }
}

/// Gauss map of the Delaunay unduloid of constant mean curvature one with
/// neck radius `a` in (0, 1/2). The profile solves rho' = cos psi,
/// z' = sin psi, psi' = 2 - sin psi / rho from the neck; its arclength
/// period S and the conformal period X = int ds/rho fix the rectangular
/// torus X x 2 pi. The inward normal angle equals psi, so
/// N = (sin psi cos theta, sin psi sin theta, cos psi).
pub struct DelaunayUnduloid {
    domain: TorusDomain,
    neck: f64,
    /// dense profile samples over one period: (rho, z, psi, x) at uniform s
    states: Vec<[f64; 4]>,
    derivs: Vec<[f64; 4]>,
    period_s: f64,
    period_x: f64,
}

const PROFILE_STEPS: usize = 4096;

impl DelaunayUnduloid {
    pub fn new(neck: f64, grid: usize) -> Self {
        assert!(neck > 0.0 && neck < 0.5, "neck radius must be in (0, 1/2)");
        // integrate one full period; psi falls through pi/2 at the next neck
        let rhs = |y: [f64; 4]| -> [f64; 4] {
            let (rho, psi) = (y[0], y[2]);
            [psi.cos(), psi.sin(), 2.0 - psi.sin() / rho, 1.0 / rho]
        };
        // locate the period with a fixed fine RK4 grid plus bisection
        let y0 = [neck, 0.0, std::f64::consts::FRAC_PI_2, 0.0];
        let coarse_h = 1e-4;
        let mut y = y0;
        let mut s = 0.0;
        let mut bracket = None;
        let mut prev = (s, y);
        for _ in 0..200_000 {
            prev = (s, y);
            y = rk4_step(&rhs, y, coarse_h);
            s += coarse_h;
            if s > 2.0 * coarse_h && prev.1[2] >= std::f64::consts::FRAC_PI_2 && y[2] < std::f64::consts::FRAC_PI_2
            {
                bracket = Some((prev.0, prev.1));
                break;
            }
        }
        let (mut lo_s, mut lo_y) = bracket.expect("period bracket");
        let mut hi = coarse_h;
        for _ in 0..80 {
            let mid = hi / 2.0;
            let ym = rk4_step(&rhs, lo_y, mid);
            if ym[2] >= std::f64::consts::FRAC_PI_2 {
                lo_y = ym;
                lo_s += mid;
                hi -= mid;
            } else {
                hi = mid;
            }
        }
        let period_s = lo_s + hi / 2.0;

        // dense uniform resampling over [0, S)
        let h = period_s / PROFILE_STEPS as f64;
        let mut states = Vec::with_capacity(PROFILE_STEPS + 1);
        let mut derivs = Vec::with_capacity(PROFILE_STEPS + 1);
        let mut y = y0;
        for _ in 0..=PROFILE_STEPS {
            states.push(y);
            derivs.push(rhs(y));
            y = rk4_step(&rhs, y, h);
        }
        let period_x = states[PROFILE_STEPS][3]
            + derivs[PROFILE_STEPS][3] * 0.0; // x at s = S
        let domain = TorusDomain::new(
            Complex64::new(0.0, 2.0 * std::f64::consts::PI / period_x),
            grid,
            grid,
        )
        .unwrap()
        .with_scale(period_x);
        Self {
            domain,
            neck,
            states,
            derivs,
            period_s,
            period_x,
        }
    }

    pub fn neck(&self) -> f64 {
        self.neck
    }

    pub fn arclength_period(&self) -> f64 {
        self.period_s
    }

    pub fn conformal_period(&self) -> f64 {
        self.period_x
    }

    /// profile state (rho, z, psi, x) at arclength s (cubic Hermite on the
    /// dense table)
    fn state_at_s(&self, s: f64) -> [f64; 4] {
        let s = s.rem_euclid(self.period_s);
        let h = self.period_s / PROFILE_STEPS as f64;
        let cell = ((s / h) as usize).min(PROFILE_STEPS - 1);
        let u = (s - cell as f64 * h) / h;
        let (y0, y1) = (self.states[cell], self.states[cell + 1]);
        let (d0, d1) = (self.derivs[cell], self.derivs[cell + 1]);
        let mut out = [0.0; 4];
        let (h00, h10, h01, h11) = hermite_weights(u);
        for i in 0..4 {
            out[i] = h00 * y0[i] + h10 * h * d0[i] + h01 * y1[i] + h11 * h * d1[i];
        }
        // the x component must not wrap; it is monotone on [0, S)
        out
    }

    /// arclength s corresponding to conformal coordinate x (by bisection on
    /// the monotone x(s) table)
    fn s_of_x(&self, x: f64) -> f64 {
        let x = x.rem_euclid(self.period_x);
        let (mut lo, mut hi) = (0.0, self.period_s);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.state_at_s(mid)[3] <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

fn hermite_weights(u: f64) -> (f64, f64, f64, f64) {
    (
        (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u),
        u * (1.0 - u) * (1.0 - u),
        u * u * (3.0 - 2.0 * u),
        u * u * (u - 1.0),
    )
}

fn rk4_step(rhs: &impl Fn([f64; 4]) -> [f64; 4], y: [f64; 4], h: f64) -> [f64; 4] {
    let add = |a: [f64; 4], b: [f64; 4], c: f64| {
        [
            a[0] + c * b[0],
            a[1] + c * b[1],
            a[2] + c * b[2],
            a[3] + c * b[3],
        ]
    };
    let k1 = rhs(y);
    let k2 = rhs(add(y, k1, h / 2.0));
    let k3 = rhs(add(y, k2, h / 2.0));
    let k4 = rhs(add(y, k3, h));
    let mut out = y;
    for i in 0..4 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

impl HarmonicMap for DelaunayUnduloid {
    fn domain(&self) -> &TorusDomain {
        &self.domain
    }

    fn n_at(&self, s: f64, t: f64) -> Quaternion {
        let x = s * self.period_x;
        let th = 2.0 * std::f64::consts::PI * t;
        let st = self.state_at_s(self.s_of_x(x));
        let psi = st[2];
        Quaternion::from_imag([psi.sin() * th.cos(), psi.sin() * th.sin(), psi.cos()])
    }

    fn dn_at(&self, s: f64, t: f64) -> (Quaternion, Quaternion) {
        let x = s * self.period_x;
        let th = 2.0 * std::f64::consts::PI * t;
        let st = self.state_at_s(self.s_of_x(x));
        let (rho, psi) = (st[0], st[2]);
        // d psi / dx = rho dpsi/ds; the chart x is euclidean along X
        let dpsi_dx = rho * (2.0 - psi.sin() / rho);
        let dn_x = Quaternion::from_imag([
            dpsi_dx * psi.cos() * th.cos(),
            dpsi_dx * psi.cos() * th.sin(),
            -dpsi_dx * psi.sin(),
        ]);
        // J X is the theta direction scaled to unit length: the metric on
        // the chart is euclidean (x, theta up to the rectangle), so
        // e_JX = d/dy with y = theta (rectangle side 2 pi)
        let dn_jx = Quaternion::from_imag([-psi.sin() * th.sin(), psi.sin() * th.cos(), 0.0]);
        (dn_x, dn_jx)
    }
}

/// Sphere-valued samples on a torus grid, interpolated along grid lines by
/// trigonometric (spectral) evaluation for the loop integrals.
pub struct SampledMap {
    domain: TorusDomain,
    samples: Vec<Quaternion>,
    dn_x: Vec<Quaternion>,
    dn_jx: Vec<Quaternion>,
}

impl SampledMap {
    pub fn new(domain: TorusDomain, samples: Vec<Quaternion>) -> Result<Self, SpectralError> {
        if samples.len() != domain.node_count() {
            return Err(SpectralError::SampleCount {
                got: samples.len(),
                expected: domain.node_count(),
            });
        }
        let d = Domain::Torus(domain.clone());
        let (dn_x, dn_jx) = d.frame_derivatives_quat(&samples);
        Ok(Self {
            domain,
            samples,
            dn_x,
            dn_jx,
        })
    }

    /// bilinear-with-trig fallback evaluation (adequate for smooth fields
    /// on the fine grids used in tests); loop integrals stay on grid lines
    /// where this is a 1-d trigonometric sum
    fn eval(&self, field: &[Quaternion], s: f64, t: f64) -> Quaternion {
        let (nx, ny) = (self.domain.nx, self.domain.ny);
        // spectral evaluation along s for the two bracketing t-rows, then
        // linear blend (rows coincide on grid lines)
        let tb = t.rem_euclid(1.0) * ny as f64;
        let b0 = tb.floor() as usize % ny;
        let b1 = (b0 + 1) % ny;
        let w = tb - tb.floor();
        let row = |b: usize| -> Quaternion {
            let mut acc = Quaternion::zero();
            // direct evaluation of the trigonometric interpolant
            for a in 0..nx {
                let v = field[b * nx + a];
                acc += v.scale(dirichlet_weight(s * nx as f64 - a as f64, nx));
            }
            acc
        };
        row(b0).scale(1.0 - w) + row(b1).scale(w)
    }
}

/// periodic sinc (Dirichlet) interpolation weight for odd-ish grids
fn dirichlet_weight(d: f64, n: usize) -> f64 {
    let x = std::f64::consts::PI * d / n as f64;
    if x.abs() < 1e-14 {
        return 1.0;
    }
    if n % 2 == 1 {
        ((n as f64) * x).sin() / ((n as f64) * x.sin())
    } else {
        ((n as f64) * x).sin() / ((n as f64) * x.tan())
    }
}

impl HarmonicMap for SampledMap {
    fn domain(&self) -> &TorusDomain {
        &self.domain
    }

    fn n_at(&self, s: f64, t: f64) -> Quaternion {
        let q = self.eval(&self.samples, s, t);
        // renormalize to the sphere
        let v = q.imag();
        let nrm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        Quaternion::from_imag([v[0] / nrm, v[1] / nrm, v[2] / nrm])
    }

    fn dn_at(&self, s: f64, t: f64) -> (Quaternion, Quaternion) {
        (self.eval(&self.dn_x, s, t), self.eval(&self.dn_jx, s, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equator_split_is_harmonic_and_typed() {
        let data = HarmonicTorusData::new(Box::new(EquatorGeodesic::square_2pi(32)));
        let split = data.split().unwrap();
        let domain = Domain::Torus(data.domain().clone());
        assert!(split.type_residual() < 1e-10);
        assert!(split.reconstruction_residual(&domain) < 1e-10);
        assert!(split.harmonicity_residual(&domain) < 1e-9);
    }

    #[test]
    fn delaunay_period_is_pi_and_normals_are_consistent() {
        let und = DelaunayUnduloid::new(0.4, 24);
        assert!(
            (und.arclength_period() - std::f64::consts::PI).abs() < 1e-7,
            "S = {}",
            und.arclength_period()
        );
        // chart consistency: finite-difference dN matches dn_at
        let (s, t) = (0.237, 0.411);
        let h = 1e-6;
        let num_x = (und.n_at(s + h, t) - und.n_at(s - h, t))
            .scale(1.0 / (2.0 * h * und.conformal_period()));
        let (dx, djx) = und.dn_at(s, t);
        assert!((num_x - dx).norm() < 1e-5, "{:?} vs {:?}", num_x, dx);
        let ht = 1e-6;
        let rect_y = 2.0 * std::f64::consts::PI; // second side length
        let num_t =
            (und.n_at(s, t + ht) - und.n_at(s, t - ht)).scale(1.0 / (2.0 * ht * rect_y));
        assert!((num_t - djx).norm() < 1e-5);
    }

    #[test]
    fn delaunay_split_is_harmonic_on_the_grid() {
        let und = DelaunayUnduloid::new(0.4, 32);
        let data = HarmonicTorusData::new(Box::new(und));
        let split = data.split().unwrap();
        let domain = Domain::Torus(data.domain().clone());
        assert!(split.type_residual() < 1e-9);
        let res = split.harmonicity_residual(&domain);
        assert!(res < 1e-4, "d nabla *A residual {res}");
    }

    #[test]
    fn delaunay_energy_approaches_two_pi_squared() {
        let near = HarmonicTorusData::new(Box::new(DelaunayUnduloid::new(0.45, 32)));
        let e = near.energy_report().unwrap();
        let target = 2.0 * std::f64::consts::PI.powi(2);
        assert!((e.energy - target).abs() / target < 0.01, "E = {}", e.energy);
        assert_eq!(e.degree, 0);
        // E = 2W for degree zero
        assert!((e.energy - 2.0 * e.willmore).abs() / e.energy < 1e-3);
    }

    #[test]
    fn sampled_equator_matches_analytic_on_lines() {
        let exact = EquatorGeodesic::square_2pi(33);
        let d = exact.domain().clone();
        let samples: Vec<Quaternion> = (0..d.node_count())
            .map(|i| {
                let (s, t) = d.grid_coords(i);
                exact.n_at(s, t)
            })
            .collect();
        let sampled = SampledMap::new(d, samples).unwrap();
        for &s in &[0.0, 0.31, 0.62] {
            let a = exact.n_at(s, 0.0);
            let b = sampled.n_at(s, 0.0);
            assert!((a - b).norm() < 1e-9, "{a:?} vs {b:?}");
            let (dax, _) = exact.dn_at(s, 0.0);
            let (dbx, _) = sampled.dn_at(s, 0.0);
            assert!((dax - dbx).norm() < 1e-8);
        }
    }
}
