use num_complex::Complex64;
use serde::Serialize;

use crate::family::{mat_id, mat_norm, mat_scale, mat_sub, mat_trace, Mat2};
use crate::holonomy::{holonomy_sample, HolonomySample};
use crate::{HarmonicTorusData, SpectralError};

/// A detected branch point of the spectral curve, with the +-Id sign of
/// the (unipotent) holonomy recorded per generator.
#[derive(Clone, Debug, Serialize)]
pub struct BranchPoint {
    pub mu_re: f64,
    pub mu_im: f64,
    pub sign1: i8,
    pub sign2: i8,
}

impl BranchPoint {
    pub fn mu(&self) -> Complex64 {
        Complex64::new(self.mu_re, self.mu_im)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralSummary {
    pub branch_points: Vec<BranchPoint>,
    /// indices into branch_points paired under mu -> 1/conj(mu)
    pub pairs: Vec<(usize, usize)>,
    pub genus: usize,
    /// unresolved candidates (location, reason); when nonempty the genus is
    /// only known to lie in [genus, genus + flagged/2]
    pub flagged: Vec<(f64, f64, String)>,
    pub annulus: (f64, f64),
    pub grid: usize,
}

/// Holonomy traces sampled over a log-polar annulus grid.
pub struct TraceScan {
    pub mus: Vec<Complex64>,
    pub samples: Vec<HolonomySample>,
    pub n_radial: usize,
    pub n_angular: usize,
}

pub fn scan_traces(
    data: &HarmonicTorusData,
    annulus: (f64, f64),
    n: usize,
) -> Result<TraceScan, SpectralError> {
    let (r0, r1) = annulus;
    let n_radial = n;
    let n_angular = n;
    let mut mus = Vec::with_capacity(n_radial * n_angular);
    let mut samples = Vec::with_capacity(n_radial * n_angular);
    for i in 0..n_radial {
        let rho = (r0.ln()) + (r1.ln() - r0.ln()) * i as f64 / (n_radial - 1) as f64;
        for j in 0..n_angular {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n_angular as f64;
            let mu = Complex64::from_polar(rho.exp(), phi);
            samples.push(holonomy_sample(data.map.as_ref(), mu)?);
            mus.push(mu);
        }
    }
    Ok(TraceScan {
        mus,
        samples,
        n_radial,
        n_angular,
    })
}

impl TraceScan {
    /// max discrete Cauchy-Riemann residual of the trace functions in
    /// log-polar coordinates (centered differences on interior nodes),
    /// normalized by the max trace magnitude.
    pub fn cauchy_riemann_residual(&self) -> f64 {
        let (nr, na) = (self.n_radial, self.n_angular);
        let h_rho = (self.mus[(nr - 1) * na].norm() / self.mus[0].norm()).ln() / (nr - 1) as f64;
        let h_phi = 2.0 * std::f64::consts::PI / na as f64;
        let at = |i: usize, j: usize| &self.samples[i * na + (j % na)];
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for i in 1..nr - 1 {
            for j in 0..na {
                for pick in 0..2 {
                    let f = |s: &HolonomySample| if pick == 0 { s.t1 } else { s.t2 };
                    let d_rho = (f(at(i + 1, j)) - f(at(i - 1, j))) / (2.0 * h_rho);
                    let d_phi = (f(at(i, j + 1)) - f(at(i, j + na - 1))) / (2.0 * h_phi);
                    let cr = 0.5 * (d_rho + Complex64::new(0.0, 1.0) * d_phi);
                    worst = worst.max(cr.norm());
                    scale = scale.max(f(at(i, j)).norm());
                }
            }
        }
        worst / scale.max(1.0)
    }
}

const NEWTON_TOL: f64 = 1e-11;
const BOTH_GEN_TOL: f64 = 1e-6;
const CIRCLE_TOL: f64 = 1e-4;
const PAIR_TOL: f64 = 1e-6;

/// Detect the branch set of the spectral curve inside the annulus:
/// zeros of the discriminants t_k^2 - 4 common to both generators, off the
/// unit circle, of odd order (argument-principle parity on a small loop),
/// without two common distinct eigenlines, paired under mu -> 1/conj(mu).
pub fn branch_detect(
    data: &HarmonicTorusData,
    scan: &TraceScan,
) -> Result<SpectralSummary, SpectralError> {
    let (nr, na) = (scan.n_radial, scan.n_angular);
    let annulus = (scan.mus[0].norm(), scan.mus[(nr - 1) * na].norm());

    // candidate seeds: local minima of |t1^2 - 4| + |t2^2 - 4| on the grid
    let disc = |s: &HolonomySample| -> f64 {
        let d1 = s.t1 * s.t1 - Complex64::new(4.0, 0.0);
        let d2 = s.t2 * s.t2 - Complex64::new(4.0, 0.0);
        d1.norm() + d2.norm()
    };
    let vals: Vec<f64> = scan.samples.iter().map(disc).collect();
    let mut seeds = Vec::new();
    for i in 0..nr {
        for j in 0..na {
            let v = vals[i * na + j];
            let mut is_min = true;
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let ii = i as i64 + di;
                    if ii < 0 || ii >= nr as i64 {
                        continue;
                    }
                    let jj = ((j as i64 + dj).rem_euclid(na as i64)) as usize;
                    if vals[ii as usize * na + jj] < v {
                        is_min = false;
                    }
                }
            }
            if is_min {
                seeds.push(scan.mus[i * na + j]);
            }
        }
    }

    let mut found: Vec<(Complex64, HolonomySample)> = Vec::new();
    let mut flagged: Vec<(f64, f64, String)> = Vec::new();
    for seed in seeds {
        // Newton on d(mu) = t1^2 - 4 (holomorphic), numerical derivative
        let mut mu = seed;
        let mut converged = false;
        for _ in 0..40 {
            let s = holonomy_sample(data.map.as_ref(), mu)?;
            let d = s.t1 * s.t1 - Complex64::new(4.0, 0.0);
            if d.norm() < NEWTON_TOL * (1.0 + s.t1.norm_sqr()) {
                converged = true;
                break;
            }
            let h = 1e-6 * mu.norm().max(0.05);
            let sp = holonomy_sample(data.map.as_ref(), mu + Complex64::new(h, 0.0))?;
            let sm = holonomy_sample(data.map.as_ref(), mu - Complex64::new(h, 0.0))?;
            let dp = sp.t1 * sp.t1 - Complex64::new(4.0, 0.0);
            let dm = sm.t1 * sm.t1 - Complex64::new(4.0, 0.0);
            let deriv = (dp - dm) / Complex64::new(2.0 * h, 0.0);
            if deriv.norm() < 1e-14 {
                break;
            }
            let step = d / deriv;
            mu -= step;
            if mu.norm() < 1e-6 {
                break; // ran toward the puncture at 0
            }
            if step.norm() < 1e-13 * mu.norm() {
                let s = holonomy_sample(data.map.as_ref(), mu)?;
                let d = s.t1 * s.t1 - Complex64::new(4.0, 0.0);
                converged = d.norm() < 1e-8 * (1.0 + s.t1.norm_sqr());
                break;
            }
        }
        if !converged {
            continue;
        }
        // keep zeros inside (a slight margin of) the annulus
        let r = mu.norm();
        if r < annulus.0 * 0.9 || r > annulus.1 * 1.1 {
            continue;
        }
        // dedupe
        if found
            .iter()
            .any(|(m, _)| (m - mu).norm() < 1e-7 * (1.0 + mu.norm()))
        {
            continue;
        }
        let s = holonomy_sample(data.map.as_ref(), mu)?;
        // condition (1): both generators have coinciding eigenvalues
        let d2 = s.t2 * s.t2 - Complex64::new(4.0, 0.0);
        if d2.norm() > BOTH_GEN_TOL * (1.0 + s.t2.norm_sqr()) {
            continue;
        }
        // unit-circle exclusion
        if (mu.norm() - 1.0).abs() < CIRCLE_TOL {
            continue;
        }
        found.push((mu, s));
    }

    // parity and eigenline filters
    let mut accepted: Vec<BranchPoint> = Vec::new();
    for (mu, s) in found {
        match odd_order(data, mu)? {
            Some(true) => {}
            Some(false) => continue,
            None => {
                flagged.push((mu.re, mu.im, "parity undecidable at tolerance".into()));
                continue;
            }
        }
        match common_eigenline_signs(&s) {
            Some((s1, s2)) => accepted.push(BranchPoint {
                mu_re: mu.re,
                mu_im: mu.im,
                sign1: s1,
                sign2: s2,
            }),
            None => {
                flagged.push((
                    mu.re,
                    mu.im,
                    "holonomies have two common distinct eigenlines".into(),
                ));
            }
        }
    }

    // pair under mu -> 1 / conj(mu)
    let mut pairs = Vec::new();
    let mut used = vec![false; accepted.len()];
    for i in 0..accepted.len() {
        if used[i] {
            continue;
        }
        let partner = Complex64::new(1.0, 0.0) / accepted[i].mu().conj();
        let hit = (0..accepted.len()).find(|&j| {
            j != i && !used[j] && (accepted[j].mu() - partner).norm() < PAIR_TOL * (1.0 + partner.norm())
        });
        match hit {
            Some(j) => {
                used[i] = true;
                used[j] = true;
                pairs.push((i, j));
            }
            None => {
                // self-paired points sit on the unit circle and were
                // excluded; an unpaired point is unresolved
                if (accepted[i].mu() - partner).norm() < PAIR_TOL * (1.0 + partner.norm()) {
                    used[i] = true;
                    pairs.push((i, i));
                } else {
                    used[i] = true;
                    flagged.push((
                        accepted[i].mu_re,
                        accepted[i].mu_im,
                        "no mu -> 1/conj(mu) partner found".into(),
                    ));
                }
            }
        }
    }

    let genus = pairs.len();
    Ok(SpectralSummary {
        branch_points: accepted,
        pairs,
        genus,
        flagged,
        annulus,
        grid: nr,
    })
}

/// Argument-principle parity of the discriminant t1^2 - 4 on a small circle
/// around mu0: Some(true) for odd order, Some(false) for even, None when
/// the winding is numerically undecidable.
fn odd_order(data: &HarmonicTorusData, mu0: Complex64) -> Result<Option<bool>, SpectralError> {
    for &delta_rel in &[1e-3, 3e-3, 1e-2] {
        let delta = delta_rel * mu0.norm().max(0.05);
        let m = 24;
        let mut args = Vec::with_capacity(m + 1);
        let mut min_mag = f64::INFINITY;
        for k in 0..=m {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            let mu = mu0 + Complex64::from_polar(delta, phi);
            let s = holonomy_sample(data.map.as_ref(), mu)?;
            let d = s.t1 * s.t1 - Complex64::new(4.0, 0.0);
            min_mag = min_mag.min(d.norm());
            args.push(d.arg());
        }
        if min_mag < 1e-12 {
            continue; // circle hits another zero; try a different radius
        }
        let mut winding = 0.0f64;
        let mut ok = true;
        for w in args.windows(2) {
            let mut da = w[1] - w[0];
            while da > std::f64::consts::PI {
                da -= 2.0 * std::f64::consts::PI;
            }
            while da < -std::f64::consts::PI {
                da += 2.0 * std::f64::consts::PI;
            }
            if da.abs() > 2.5 {
                ok = false; // under-resolved argument step
            }
            winding += da;
        }
        if !ok {
            continue;
        }
        let turns = winding / (2.0 * std::f64::consts::PI);
        let rounded = turns.round();
        if (turns - rounded).abs() < 0.2 && rounded.abs() > 0.5 {
            return Ok(Some((rounded as i64).rem_euclid(2) == 1));
        }
        if (turns - rounded).abs() < 0.2 && rounded.abs() < 0.5 {
            // winding zero: the zero is not enclosed (spurious candidate)
            return Ok(Some(false));
        }
    }
    Ok(None)
}

/// Recover the +-Id signs of the two (commuting) holonomies at a branch
/// candidate, rejecting candidates where both are scalar (two common
/// distinct eigenlines). Returns None in the rejected case.
fn common_eigenline_signs(s: &HolonomySample) -> Option<(i8, i8)> {
    let classify = |h: &Mat2, t: Complex64| -> (i8, f64, Mat2) {
        let sign = if t.re >= 0.0 { 1i8 } else { -1 };
        let n = mat_sub(h, &mat_scale(&mat_id(), Complex64::new(sign as f64, 0.0)));
        (sign, mat_norm(&n), n)
    };
    let (s1, n1, m1) = classify(&s.h1, s.t1);
    let (s2, n2, m2) = classify(&s.h2, s.t2);
    let scale = 1.0 + mat_norm(&s.h1).max(mat_norm(&s.h2));
    if n1 < 1e-4 * scale && n2 < 1e-4 * scale {
        // both holonomies are scalar: every line is a common eigenline
        return None;
    }
    // the non-scalar one has a unique eigenline; check the other fixes it
    let (n_big, n_small) = if n1 >= n2 { (m1, m2) } else { (m2, m1) };
    let v = kernel_direction(&n_big);
    let w = [
        n_small[0] * v[0] + n_small[1] * v[1],
        n_small[2] * v[0] + n_small[3] * v[1],
    ];
    let wn = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
    if wn < 1e-3 * scale {
        Some((s1, s2))
    } else {
        None
    }
}

fn kernel_direction(n: &Mat2) -> [Complex64; 2] {
    // kernel of a (numerically) rank-one 2x2 matrix: orthogonal to the
    // larger row
    let r0 = n[0].norm_sqr() + n[1].norm_sqr();
    let r1 = n[2].norm_sqr() + n[3].norm_sqr();
    let (a, b) = if r0 >= r1 { (n[0], n[1]) } else { (n[2], n[3]) };
    let v = [-b.conj(), a.conj()];
    let nn = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt().max(1e-300);
    [v[0] / nn, v[1] / nn]
}
