use num_complex::Complex64;
use quatlinalg::Quaternion;
use serde::{Deserialize, Serialize};

use crate::icosphere::IcosphereMesh;
use crate::spectral::spectral_derivative;
use crate::DomainError;

/// Differentiation backend for grid fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DiffMethod {
    /// Fourier differentiation; near machine precision for smooth data on
    /// uniform periodic grids.
    #[default]
    Spectral,
    /// Second-order centered differences (one-sided at sphere pole rows).
    FiniteDifference,
}

/// Flat torus C / (scale Z + scale tau Z) sampled on an nx x ny grid.
///
/// Grid coordinates (s, t) in [0,1)^2 map to z = scale (s + t tau). The
/// oriented orthonormal frame is X = direction 1, J_M X = direction i.
#[derive(Clone, Debug)]
pub struct TorusDomain {
    pub tau: Complex64,
    pub nx: usize,
    pub ny: usize,
    /// Euclidean length of the first lattice generator (default 1).
    pub scale: f64,
    pub method: DiffMethod,
}

impl TorusDomain {
    pub fn new(tau: Complex64, nx: usize, ny: usize) -> Result<Self, DomainError> {
        if tau.im <= 0.0 {
            return Err(DomainError::BadModulus(tau.im));
        }
        Ok(Self {
            tau,
            nx,
            ny,
            scale: 1.0,
            method: DiffMethod::Spectral,
        })
    }

    pub fn square(n: usize, side: f64) -> Self {
        let mut d = Self::new(Complex64::new(0.0, 1.0), n, n).unwrap();
        d.scale = side;
        d
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_method(mut self, method: DiffMethod) -> Self {
        self.method = method;
        self
    }

    pub fn node_count(&self) -> usize {
        self.nx * self.ny
    }

    pub fn index(&self, a: usize, b: usize) -> usize {
        (b % self.ny) * self.nx + (a % self.nx)
    }

    /// Grid coordinates (s, t) in [0,1)^2 of a node.
    pub fn grid_coords(&self, idx: usize) -> (f64, f64) {
        let a = idx % self.nx;
        let b = idx / self.nx;
        (a as f64 / self.nx as f64, b as f64 / self.ny as f64)
    }

    /// Position in the plane, z = scale (s + t tau).
    pub fn position(&self, idx: usize) -> Complex64 {
        let (s, t) = self.grid_coords(idx);
        self.scale * (Complex64::new(s, 0.0) + self.tau * t)
    }

    pub fn cell_area(&self) -> f64 {
        self.scale * self.scale * self.tau.im / (self.nx * self.ny) as f64
    }

    pub fn total_area(&self) -> f64 {
        self.scale * self.scale * self.tau.im
    }

    fn diff_s(&self, field: &[f64]) -> Vec<f64> {
        self.diff_lattice(field, true)
    }

    fn diff_t(&self, field: &[f64]) -> Vec<f64> {
        self.diff_lattice(field, false)
    }

    /// Derivative with respect to the grid coordinate s (along_s) or t,
    /// with unit period.
    fn diff_lattice(&self, field: &[f64], along_s: bool) -> Vec<f64> {
        let (nx, ny) = (self.nx, self.ny);
        let mut out = vec![0.0; field.len()];
        match self.method {
            DiffMethod::Spectral => {
                if along_s {
                    let mut line = vec![Complex64::default(); nx];
                    for b in 0..ny {
                        for a in 0..nx {
                            line[a] = Complex64::new(field[b * nx + a], 0.0);
                        }
                        let d = spectral_derivative(&line, 1.0);
                        for a in 0..nx {
                            out[b * nx + a] = d[a].re;
                        }
                    }
                } else {
                    let mut line = vec![Complex64::default(); ny];
                    for a in 0..nx {
                        for b in 0..ny {
                            line[b] = Complex64::new(field[b * nx + a], 0.0);
                        }
                        let d = spectral_derivative(&line, 1.0);
                        for b in 0..ny {
                            out[b * nx + a] = d[b].re;
                        }
                    }
                }
            }
            DiffMethod::FiniteDifference => {
                if along_s {
                    let h = 1.0 / nx as f64;
                    for b in 0..ny {
                        for a in 0..nx {
                            let p = field[b * nx + (a + 1) % nx];
                            let m = field[b * nx + (a + nx - 1) % nx];
                            out[b * nx + a] = (p - m) / (2.0 * h);
                        }
                    }
                } else {
                    let h = 1.0 / ny as f64;
                    for b in 0..ny {
                        for a in 0..nx {
                            let p = field[((b + 1) % ny) * nx + a];
                            let m = field[((b + ny - 1) % ny) * nx + a];
                            out[b * nx + a] = (p - m) / (2.0 * h);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Round unit sphere. Latitude-longitude grid with pole rows excluded
/// (theta sampled at cell midpoints); an icosphere mesh of the same
/// subdivision level is available for triangle quadrature.
#[derive(Clone, Debug)]
pub struct SphereDomain {
    pub subdiv: u32,
    pub n_theta: usize,
    pub n_phi: usize,
    pub method: DiffMethod,
}

impl SphereDomain {
    pub fn new(subdiv: u32) -> Self {
        let n_theta = 4usize << subdiv.min(12);
        Self {
            subdiv,
            n_theta,
            n_phi: 2 * n_theta,
            method: DiffMethod::FiniteDifference,
        }
    }

    pub fn with_method(mut self, method: DiffMethod) -> Self {
        self.method = method;
        self
    }

    pub fn node_count(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn theta(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * std::f64::consts::PI / self.n_theta as f64
    }

    pub fn phi(&self, j: usize) -> f64 {
        2.0 * std::f64::consts::PI * j as f64 / self.n_phi as f64
    }

    pub fn angles(&self, idx: usize) -> (f64, f64) {
        (self.theta(idx / self.n_phi), self.phi(idx % self.n_phi))
    }

    /// Unit position vector of a node.
    pub fn position(&self, idx: usize) -> [f64; 3] {
        let (th, ph) = self.angles(idx);
        [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]
    }

    pub fn cell_area(&self, idx: usize) -> f64 {
        let (th, _) = self.angles(idx);
        let h_th = std::f64::consts::PI / self.n_theta as f64;
        let h_ph = 2.0 * std::f64::consts::PI / self.n_phi as f64;
        th.sin() * h_th * h_ph
    }

    pub fn icosphere(&self) -> IcosphereMesh {
        IcosphereMesh::new(self.subdiv)
    }

    fn diff_theta(&self, field: &[f64]) -> Vec<f64> {
        let (nt, np) = (self.n_theta, self.n_phi);
        let h = std::f64::consts::PI / nt as f64;
        let mut out = vec![0.0; field.len()];
        for j in 0..np {
            for i in 0..nt {
                let v = |ii: usize| field[ii * np + j];
                out[i * np + j] = if i == 0 {
                    // second-order one-sided at the pole row
                    (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h)
                } else if i == nt - 1 {
                    (3.0 * v(nt - 1) - 4.0 * v(nt - 2) + v(nt - 3)) / (2.0 * h)
                } else {
                    (v(i + 1) - v(i - 1)) / (2.0 * h)
                };
            }
        }
        out
    }

    fn diff_phi(&self, field: &[f64]) -> Vec<f64> {
        let (nt, np) = (self.n_theta, self.n_phi);
        let period = 2.0 * std::f64::consts::PI;
        let mut out = vec![0.0; field.len()];
        match self.method {
            DiffMethod::Spectral => {
                let mut line = vec![Complex64::default(); np];
                for i in 0..nt {
                    for j in 0..np {
                        line[j] = Complex64::new(field[i * np + j], 0.0);
                    }
                    let d = spectral_derivative(&line, period);
                    for j in 0..np {
                        out[i * np + j] = d[j].re;
                    }
                }
            }
            DiffMethod::FiniteDifference => {
                let h = period / np as f64;
                for i in 0..nt {
                    for j in 0..np {
                        let p = field[i * np + (j + 1) % np];
                        let m = field[i * np + (j + np - 1) % np];
                        out[i * np + j] = (p - m) / (2.0 * h);
                    }
                }
            }
        }
        out
    }
}

/// A discretized surface domain.
#[derive(Clone, Debug)]
pub enum Domain {
    Torus(TorusDomain),
    Sphere(SphereDomain),
}

impl Domain {
    pub fn node_count(&self) -> usize {
        match self {
            Domain::Torus(t) => t.node_count(),
            Domain::Sphere(s) => s.node_count(),
        }
    }

    pub fn cell_area(&self, idx: usize) -> f64 {
        match self {
            Domain::Torus(t) => t.cell_area(),
            Domain::Sphere(s) => s.cell_area(idx),
        }
    }

    pub fn total_area(&self) -> f64 {
        match self {
            Domain::Torus(t) => t.total_area(),
            Domain::Sphere(s) => (0..s.node_count()).map(|i| s.cell_area(i)).sum(),
        }
    }

    pub fn genus(&self) -> u32 {
        match self {
            Domain::Torus(_) => 1,
            Domain::Sphere(_) => 0,
        }
    }

    /// Derivative of a scalar field along the oriented orthonormal frame
    /// (X, J_M X). On the sphere the frame is (e_theta, e_phi).
    pub fn frame_derivatives(&self, field: &[f64]) -> (Vec<f64>, Vec<f64>) {
        assert_eq!(field.len(), self.node_count());
        match self {
            Domain::Torus(t) => {
                let ds = t.diff_s(field);
                let dt = t.diff_t(field);
                let l = t.scale;
                let (t1, t2) = (t.tau.re, t.tau.im);
                let dx: Vec<f64> = ds.iter().map(|v| v / l).collect();
                let djx: Vec<f64> = dt
                    .iter()
                    .zip(&ds)
                    .map(|(vt, vs)| (vt - t1 * vs) / (l * t2))
                    .collect();
                (dx, djx)
            }
            Domain::Sphere(s) => {
                let dth = s.diff_theta(field);
                let dph = s.diff_phi(field);
                let np = s.n_phi;
                let djx: Vec<f64> = dph
                    .iter()
                    .enumerate()
                    .map(|(idx, v)| v / s.theta(idx / np).sin())
                    .collect();
                (dth, djx)
            }
        }
    }

    /// Frame derivatives of a quaternion field, componentwise.
    pub fn frame_derivatives_quat(
        &self,
        field: &[Quaternion],
    ) -> (Vec<Quaternion>, Vec<Quaternion>) {
        let n = field.len();
        let comp = |f: fn(&Quaternion) -> f64| -> Vec<f64> { field.iter().map(f).collect() };
        let parts = [
            self.frame_derivatives(&comp(|q| q.w)),
            self.frame_derivatives(&comp(|q| q.x)),
            self.frame_derivatives(&comp(|q| q.y)),
            self.frame_derivatives(&comp(|q| q.z)),
        ];
        let mut dx = vec![Quaternion::zero(); n];
        let mut djx = vec![Quaternion::zero(); n];
        for i in 0..n {
            dx[i] = Quaternion::new(parts[0].0[i], parts[1].0[i], parts[2].0[i], parts[3].0[i]);
            djx[i] = Quaternion::new(parts[0].1[i], parts[1].1[i], parts[2].1[i], parts[3].1[i]);
        }
        (dx, djx)
    }
}

/// JSON description of a domain, as used by the command-line tools.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DomainConfig {
    Torus {
        tau_re: f64,
        tau_im: f64,
        nx: usize,
        ny: usize,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    Sphere {
        subdiv: u32,
    },
}

fn default_scale() -> f64 {
    1.0
}

impl DomainConfig {
    pub fn build(&self) -> Result<Domain, DomainError> {
        match *self {
            DomainConfig::Torus {
                tau_re,
                tau_im,
                nx,
                ny,
                scale,
            } => {
                if nx < 4 || ny < 4 {
                    return Err(DomainError::BadConfig(format!(
                        "grid too small: {nx} x {ny}"
                    )));
                }
                if !(scale > 0.0) {
                    return Err(DomainError::BadConfig(format!("scale must be > 0: {scale}")));
                }
                Ok(Domain::Torus(
                    TorusDomain::new(Complex64::new(tau_re, tau_im), nx, ny)?.with_scale(scale),
                ))
            }
            DomainConfig::Sphere { subdiv } => {
                if subdiv > 9 {
                    return Err(DomainError::BadConfig(format!(
                        "subdivision level {subdiv} too large"
                    )));
                }
                Ok(Domain::Sphere(SphereDomain::new(subdiv)))
            }
        }
    }
}
