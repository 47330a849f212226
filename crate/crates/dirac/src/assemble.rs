use num_complex::Complex64;
use surface_domain::{spectral_derivative_matrix, SphereDomain, TorusDomain};

use crate::{CsrMatrix, DiracError, DiracMatrix};

/// One of the four Riemannian spin structures on a torus: boundary phases
/// (0 or 1/2) along the two lattice generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpinStructureTorus {
    pub eps1: bool,
    pub eps2: bool,
}

impl SpinStructureTorus {
    pub const ALL: [SpinStructureTorus; 4] = [
        SpinStructureTorus { eps1: false, eps2: false },
        SpinStructureTorus { eps1: true, eps2: false },
        SpinStructureTorus { eps1: false, eps2: true },
        SpinStructureTorus { eps1: true, eps2: true },
    ];

    pub fn phases(self) -> (f64, f64) {
        (
            if self.eps1 { 0.5 } else { 0.0 },
            if self.eps2 { 0.5 } else { 0.0 },
        )
    }
}

/// Flat-torus Dirac operator D = i d_X + j d_JX (left multiplications in
/// the doubling), with the spin structure entering as twisted boundary
/// phases of the spectral differentiation matrices. Hermitian by
/// construction; translation invariant.
///
/// Grids must be odd: the Nyquist mode of an even grid differentiates to
/// zero and would inject spurious kernel modes.
pub fn assemble_flat_torus(
    domain: &TorusDomain,
    eps: SpinStructureTorus,
) -> Result<DiracMatrix, DiracError> {
    let (nx, ny) = (domain.nx, domain.ny);
    if nx % 2 == 0 || ny % 2 == 0 {
        return Err(DiracError::EvenGrid { nx, ny });
    }
    let n = nx * ny;
    let (e1, e2) = eps.phases();
    // derivative along grid coordinate s (unit period) with twist e1
    let ds = spectral_derivative_matrix(nx, 1.0, e1);
    let dt = spectral_derivative_matrix(ny, 1.0, e2);
    let l = domain.scale;
    let (t1, t2) = (domain.tau.re, domain.tau.im);

    // frame derivatives: d_X = ds / l, d_JX = (dt - t1 ds) / (l t2)
    // rep(i) = diag(i, -i), rep(j) = [[0,-1],[1,0]] per site.
    let mut trips: Vec<(usize, usize, Complex64)> = Vec::new();
    let site = |a: usize, b: usize| b * nx + a;
    for b in 0..ny {
        for a in 0..nx {
            let row_site = site(a, b);
            // s-direction couplings (same b)
            for a2 in 0..nx {
                let v = ds[a * nx + a2];
                if v.norm() == 0.0 {
                    continue;
                }
                let col_site = site(a2, b);
                let dx = v / l;
                let djx = -t1 * v / (l * t2);
                push_block(&mut trips, row_site, col_site, dx, djx);
            }
            // t-direction couplings (same a)
            for b2 in 0..ny {
                let v = dt[b * ny + b2];
                if v.norm() == 0.0 {
                    continue;
                }
                let col_site = site(a, b2);
                let djx = v / (l * t2);
                push_block(&mut trips, row_site, col_site, Complex64::default(), djx);
            }
        }
    }
    let matrix = CsrMatrix::from_triplets(2 * n, 2 * n, &trips);
    Ok(DiracMatrix {
        matrix,
        area: domain.total_area(),
        genus: 1,
    })
}

/// rep(i) * dx + rep(j) * djx contribution of one site pair.
fn push_block(
    trips: &mut Vec<(usize, usize, Complex64)>,
    row_site: usize,
    col_site: usize,
    dx: Complex64,
    djx: Complex64,
) {
    let i = Complex64::new(0.0, 1.0);
    let (r0, r1) = (2 * row_site, 2 * row_site + 1);
    let (c0, c1) = (2 * col_site, 2 * col_site + 1);
    if dx.norm() > 0.0 {
        trips.push((r0, c0, i * dx));
        trips.push((r1, c1, -i * dx));
    }
    if djx.norm() > 0.0 {
        trips.push((r0, c1, -djx));
        trips.push((r1, c0, djx));
    }
}

/// Exact eigenvalues (with complex multiplicities) of the flat-torus Dirac
/// below `cutoff`, from the plane-wave decomposition: each lattice mode
/// xi in Z^2 contributes one +|k| and one -|k| with
/// k . v_a = 2 pi (xi_a + eps_a) for the lattice generators v_a.
pub fn flat_torus_oracle(
    domain: &TorusDomain,
    eps: SpinStructureTorus,
    cutoff: f64,
) -> Vec<(f64, usize)> {
    let (e1, e2) = eps.phases();
    let l = domain.scale;
    let (t1, t2) = (domain.tau.re, domain.tau.im);
    let mut lambdas: Vec<f64> = Vec::new();
    let bound = (cutoff * l * (1.0 + t1.abs() + t2) / std::f64::consts::PI) as i64 + 3;
    for x1 in -bound..=bound {
        for x2 in -bound..=bound {
            let k1 = 2.0 * std::f64::consts::PI * (x1 as f64 + e1) / l;
            let k2 = (2.0 * std::f64::consts::PI * (x2 as f64 + e2) - k1 * l * t1) / (l * t2);
            let lam = (k1 * k1 + k2 * k2).sqrt();
            if lam <= cutoff {
                lambdas.push(lam);
            }
        }
    }
    lambdas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // merge exact duplicates into (lambda, complex multiplicity); each mode
    // gives a +lambda and a -lambda complex eigenvalue
    let mut merged: Vec<(f64, usize)> = Vec::new();
    for lam in lambdas {
        match merged.last_mut() {
            Some((l0, c)) if (lam - *l0).abs() < 1e-9 * (1.0 + lam) => *c += 1,
            _ => merged.push((lam, 1)),
        }
    }
    merged
}

/// Round-sphere Dirac operator on the latitude grid of the domain,
/// block-assembled over the azimuthal half-integer modes m (the matrix is
/// expressed in the Fourier basis along phi, where it is block diagonal).
///
/// Per mode, eigencomponents factor through the weight
/// w_m^2 = (sin t/2)^{2p+1} (cos t/2)^{2q+1}, p = |m-1/2|, q = |m+1/2|; the
/// remaining smooth part satisfies a weighted Neumann problem whose P1
/// matrix (lumped mass) is S_m. The Dirac block is [[0, L^T],[L, 0]] with
/// L L^T = S_m + n_m^2, n_m = |m|+1/2, so its spectrum is
/// +- sqrt(n_m^2 + eig(S_m)), converging at second order to +-(n_m + k).
pub fn assemble_round_sphere(domain: &SphereDomain) -> DiracMatrix {
    let n_int = domain.n_theta; // number of theta intervals
    let m_max = domain.n_phi / 2; // modes m = +-(1/2), ..., +-(m_max - 1/2)
    let nodes = n_int + 1;
    let mut trips: Vec<(usize, usize, Complex64)> = Vec::new();
    let mut offset = 0usize;
    for mm in 0..m_max {
        let m = mm as f64 + 0.5;
        let l = cholesky_block(m, n_int);
        for sign in [1.0f64, -1.0] {
            // -m has the theta-reflected weight, hence an identical block
            let _ = sign;
            // block [[0, L^T],[L, 0]] on 2*nodes unknowns
            for (r, c, v) in &l {
                // L in the lower-left corner
                trips.push((offset + nodes + r, offset + c, Complex64::new(*v, 0.0)));
                trips.push((offset + c, offset + nodes + r, Complex64::new(*v, 0.0)));
            }
            offset += 2 * nodes;
        }
    }
    let dim = offset;
    let matrix = CsrMatrix::from_triplets(dim, dim, &trips);
    DiracMatrix {
        matrix,
        area: 4.0 * std::f64::consts::PI,
        genus: 0,
    }
}

/// Lower-bidiagonal Cholesky factor entries (r, c, value) of
/// M^{-1/2} K M^{-1/2} + n_m^2 for mode m on `n` uniform theta intervals.
///
/// The weights (sin t/2)^{2p+1} (cos t/2)^{2q+1} underflow catastrophically
/// for large m, so all quadrature sums are accumulated in log space with a
/// per-node max factored out; only the scale-free ratios diag/mass and
/// off/sqrt(mass mass), which stay O(1/h^2), ever leave log space.
fn cholesky_block(m: f64, n: usize) -> Vec<(usize, usize, f64)> {
    let p = (m - 0.5).abs();
    let q = (m + 0.5).abs();
    let nm = m.abs() + 0.5;
    let nodes = n + 1;
    let h = std::f64::consts::PI / n as f64;
    let lnw2 = |t: f64| (2.0 * p + 1.0) * (t / 2.0).sin().ln() + (2.0 * q + 1.0) * (t / 2.0).cos().ln();
    let gauss = [0.5 - 0.5 / 3.0f64.sqrt(), 0.5 + 0.5 / 3.0f64.sqrt()];
    // log-weight at the two Gauss points of each interval
    let mut lw = vec![[0.0f64; 2]; n];
    for i in 0..n {
        let a = i as f64 * h;
        for (g, slot) in gauss.iter().zip(0..2) {
            lw[i][slot] = lnw2(a + g * h);
        }
    }
    let node_max = |i: usize| -> f64 {
        let mut best = f64::NEG_INFINITY;
        if i > 0 {
            best = best.max(lw[i - 1][0]).max(lw[i - 1][1]);
        }
        if i < n {
            best = best.max(lw[i][0]).max(lw[i][1]);
        }
        best
    };
    // normalized stiffness-diagonal and mass sums per node: contributions
    // exp(lw - L_i) * (d^2 | phi) with d = 1/h
    let mut sd = vec![0.0f64; nodes];
    let mut lmass = vec![0.0f64; nodes]; // log of the lumped mass
    for i in 0..nodes {
        let li = node_max(i);
        let mut num = 0.0f64; // stiffness part
        let mut den = 0.0f64; // mass part
        let d2 = 1.0 / (h * h);
        for g in 0..2 {
            if i > 0 {
                let e = (lw[i - 1][g] - li).exp() * 0.5 * h;
                num += e * d2;
                den += e * gauss[g];
            }
            if i < n {
                let e = (lw[i][g] - li).exp() * 0.5 * h;
                num += e * d2;
                den += e * (1.0 - gauss[g]);
            }
        }
        sd[i] = num / den + nm * nm;
        lmass[i] = li + den.ln();
    }
    let mut so = vec![0.0f64; n];
    for i in 0..n {
        let mi = lw[i][0].max(lw[i][1]);
        let mut num = 0.0f64;
        for g in 0..2 {
            num += (lw[i][g] - mi).exp() * 0.5 * h / (h * h);
        }
        let expo = mi - 0.5 * (lmass[i] + lmass[i + 1]);
        so[i] = -num * expo.exp();
    }
    // Cholesky of the tridiagonal: L lower bidiagonal
    let mut ld = vec![0.0f64; nodes];
    let mut ls = vec![0.0f64; n];
    ld[0] = sd[0].sqrt();
    for i in 0..n {
        ls[i] = so[i] / ld[i];
        ld[i + 1] = (sd[i + 1] - ls[i] * ls[i]).sqrt();
    }
    let mut out = Vec::with_capacity(2 * nodes);
    for i in 0..nodes {
        out.push((i, i, ld[i]));
        if i < n {
            out.push((i + 1, i, ls[i]));
        }
    }
    out
}
