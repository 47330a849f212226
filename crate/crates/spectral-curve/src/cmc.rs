use quatlinalg::Quaternion;
use surface_domain::{exterior_derivative, hodge_star, wedge_as_quadratic, DiscreteForm, Domain};

use crate::{HarmonicTorusData, SpectralError};

/// The CMC immersion integrated from harmonic data: f with df = 2*A on the
/// universal cover, its translational periods per generator, and the
/// conformality / constant-mean-curvature residuals.
#[derive(Clone, Debug)]
pub struct CmcReconstruction {
    pub f: Vec<Quaternion>,
    /// translational periods along the generators 1 and tau
    pub periods: (Quaternion, Quaternion),
    pub conformality_residual: f64,
    pub cmc_residual: f64,
    /// same residual for the parallel surface g = f + N
    pub parallel_cmc_residual: f64,
}

/// Integrate nabla f = 2 * A by composite Simpson quadrature along grid
/// lines (first along the s-axis at t = 0, then along t), and report the
/// defining residuals. Fails if A has a zero on the grid.
pub fn integrate_cmc(data: &HarmonicTorusData) -> Result<CmcReconstruction, SpectralError> {
    let split = data.split()?;
    let d = data.domain();
    let domain = Domain::Torus(d.clone());
    let (nx, ny) = (d.nx, d.ny);

    // df = 2 * A as a form on the frame
    let star_a = hodge_star(&split.a).expect("degree 1");
    let df = star_a.scaled(2.0);
    let (df_x, df_jx) = match &df {
        DiscreteForm::One { on_x, on_jx } => (on_x.clone(), on_jx.clone()),
        _ => unreachable!(),
    };

    // immersion condition: |A| bounded away from zero
    let min_a = (0..d.node_count())
        .map(|i| (df_x[i].norm_sq() + df_jx[i].norm_sq()).sqrt())
        .fold(f64::INFINITY, f64::min);
    let mean_a = (0..d.node_count())
        .map(|i| (df_x[i].norm_sq() + df_jx[i].norm_sq()).sqrt())
        .sum::<f64>()
        / d.node_count() as f64;
    if min_a <= 1e-12 + 1e-8 * mean_a {
        return Err(SpectralError::BranchPointOfA(min_a));
    }

    // df along the lattice directions: d/ds = L X, d/dt = L (t1 X + t2 JX)
    let l = d.scale;
    let (t1, t2) = (d.tau.re, d.tau.im);
    let along_s = |i: usize| df_x[i].scale(l);
    let along_t = |i: usize| df_x[i].scale(l * t1) + df_jx[i].scale(l * t2);

    // spectral line integration: the rows/columns of the closed form are
    // smooth periodic samples, so the FFT antiderivative is near exact
    let idx = |a: usize, b: usize| (b % ny) * nx + (a % nx);
    let mut f = vec![Quaternion::zero(); d.node_count()];
    let integrate_line = |g: &[Quaternion]| -> (Vec<Quaternion>, Quaternion) {
        let n = g.len();
        let mut out = vec![Quaternion::zero(); n];
        let mut period = Quaternion::zero();
        for comp in 0..4 {
            let pick = |q: &Quaternion| match comp {
                0 => q.w,
                1 => q.x,
                2 => q.y,
                _ => q.z,
            };
            let line: Vec<num_complex::Complex64> = g
                .iter()
                .map(|q| num_complex::Complex64::new(pick(q), 0.0))
                .collect();
            let anti = surface_domain::spectral_antiderivative(&line, 1.0);
            let mean: f64 = line.iter().map(|z| z.re).sum::<f64>() / n as f64;
            for (j, v) in anti.iter().enumerate() {
                match comp {
                    0 => out[j].w = v.re,
                    1 => out[j].x = v.re,
                    2 => out[j].y = v.re,
                    _ => out[j].z = v.re,
                }
            }
            match comp {
                0 => period.w = mean,
                1 => period.x = mean,
                2 => period.y = mean,
                _ => period.z = mean,
            }
        }
        (out, period)
    };
    // first row along s at t = 0
    let row0: Vec<Quaternion> = (0..nx).map(|a| along_s(idx(a, 0))).collect();
    let (frow, period1) = integrate_line(&row0);
    for a in 0..nx {
        f[idx(a, 0)] = frow[a];
    }
    // columns along t
    let mut period2 = Quaternion::zero();
    for a in 0..nx {
        let col: Vec<Quaternion> = (0..ny).map(|b| along_t(idx(a, b))).collect();
        let (fcol, p2) = integrate_line(&col);
        for b in 1..ny {
            f[idx(a, b)] = f[idx(a, 0)] + fcol[b];
        }
        if a == 0 {
            period2 = p2;
        }
    }

    // conformality residual |*df - N df| / |df|
    let mut conf = 0.0f64;
    for i in 0..d.node_count() {
        let n = split.s[i];
        let scale = (df_x[i].norm_sq() + df_jx[i].norm_sq()).sqrt();
        let r1 = (df_jx[i] - n * df_x[i]).norm();
        let r2 = (-df_x[i] - n * df_jx[i]).norm();
        conf = conf.max(r1.max(r2) / scale);
    }

    let cmc_residual = cmc_equation_residual(&df, &domain);
    // parallel surface: dg = df + dN = 2*Q
    let star_q = hodge_star(&split.q).expect("degree 1");
    let dg = star_q.scaled(2.0);
    let parallel_cmc_residual = cmc_equation_residual(&dg, &domain);

    Ok(CmcReconstruction {
        f,
        periods: (period1, period2),
        conformality_residual: conf,
        cmc_residual,
        parallel_cmc_residual,
    })
}

/// Area-weighted L2 norm of d*df + df ^ df (the CMC-one condition).
fn cmc_equation_residual(df: &DiscreteForm, domain: &Domain) -> f64 {
    let star = hodge_star(df).expect("degree 1");
    let dstar = exterior_derivative(&star, domain).expect("degree 1");
    let wedge = wedge_as_quadratic(df, df).expect("compatible");
    match (dstar, wedge) {
        (DiscreteForm::Two(a), DiscreteForm::Two(b)) => a
            .iter()
            .zip(&b)
            .enumerate()
            .map(|(i, (x, y))| (*x + *y).norm_sq() * domain.cell_area(i))
            .sum::<f64>()
            .sqrt(),
        _ => unreachable!(),
    }
}
