use num_complex::Complex64;

use crate::family::{mat_det, mat_id, mat_mul, mat_norm, mat_scale, mat_sub, omega_at, Mat2};
use crate::harmonic::HarmonicMap;
use crate::SpectralError;

/// The two generators of the torus fundamental group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// the lattice direction 1
    One,
    /// the lattice direction tau
    Tau,
}

/// A holonomy sample at one mu: the two generator matrices and traces.
#[derive(Clone, Debug)]
pub struct HolonomySample {
    pub mu: Complex64,
    pub h1: Mat2,
    pub h2: Mat2,
    pub t1: Complex64,
    pub t2: Complex64,
    pub det_defect: f64,
    pub commutator: f64,
}

/// Parallel transport of nabla_mu around a generator loop based at the
/// origin: solves d Psi/dt = -omega_mu(gamma'(t)) Psi with an adaptive
/// Dormand-Prince 5(4) controller at per-loop tolerance 1e-10. The
/// determinant is renormalized once at the end of the loop (the correction
/// is reported by [`holonomy_with_defect`]).
pub fn holonomy(
    map: &dyn HarmonicMap,
    mu: Complex64,
    generator: Generator,
) -> Result<Mat2, SpectralError> {
    holonomy_with_defect(map, mu, generator).map(|(h, _)| h)
}

pub fn holonomy_with_defect(
    map: &dyn HarmonicMap,
    mu: Complex64,
    generator: Generator,
) -> Result<(Mat2, f64), SpectralError> {
    if mu.norm() == 0.0 {
        return Err(SpectralError::ZeroMu);
    }
    let d = map.domain();
    let l = d.scale;
    let (t1, t2) = (d.tau.re, d.tau.im);
    // omega_mu(gamma'(t)) along the loop, gamma parameterized on [0, 1]
    let rhs = |t: f64, psi: &Mat2| -> Mat2 {
        let (s, tt) = match generator {
            Generator::One => (t, 0.0),
            Generator::Tau => (0.0, t),
        };
        let (wx, wjx) = omega_at(map, mu, s, tt);
        // gamma' = L X for generator 1; L (tau1 X + tau2 JX) for tau
        let w = match generator {
            Generator::One => mat_scale(&wx, Complex64::new(l, 0.0)),
            Generator::Tau => {
                let a = mat_scale(&wx, Complex64::new(l * t1, 0.0));
                let b = mat_scale(&wjx, Complex64::new(l * t2, 0.0));
                [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
            }
        };
        mat_scale(&mat_mul(&w, psi), Complex64::new(-1.0, 0.0))
    };

    let mut psi = mat_id();
    let mut t = 0.0f64;
    let mut h = 1e-3f64;
    let tol = 1e-10;
    let mut steps = 0usize;
    while t < 1.0 {
        if h < 1e-12 {
            return Err(SpectralError::Integration { t, step: h });
        }
        if t + h > 1.0 {
            h = 1.0 - t;
        }
        let (next, err) = dopri5_step(&rhs, t, &psi, h);
        let scale = mat_norm(&psi).max(1.0);
        if err <= tol * scale || h <= 1e-12 {
            psi = next;
            t += h;
            steps += 1;
            if steps > 2_000_000 {
                return Err(SpectralError::Integration { t, step: h });
            }
        }
        // PI-free step update with safety factor
        let ratio = (tol * scale / err.max(1e-300)).powf(0.2);
        h *= 0.9 * ratio.clamp(0.2, 5.0);
    }
    // det renormalization (logged once per loop)
    let det = mat_det(&psi);
    let defect = (det - Complex64::new(1.0, 0.0)).norm();
    let corr = det.sqrt();
    let psi = mat_scale(&psi, Complex64::new(1.0, 0.0) / corr);
    Ok((psi, defect))
}

/// Both generator holonomies with their invariant diagnostics.
pub fn holonomy_sample(
    map: &dyn HarmonicMap,
    mu: Complex64,
) -> Result<HolonomySample, SpectralError> {
    let (h1, d1) = holonomy_with_defect(map, mu, Generator::One)?;
    let (h2, d2) = holonomy_with_defect(map, mu, Generator::Tau)?;
    let comm = mat_norm(&mat_sub(&mat_mul(&h1, &h2), &mat_mul(&h2, &h1)));
    Ok(HolonomySample {
        mu,
        t1: h1[0] + h1[3],
        t2: h2[0] + h2[3],
        h1,
        h2,
        det_defect: d1.max(d2),
        commutator: comm,
    })
}

/// One adaptive step of the Dormand-Prince 5(4) pair; returns the 5th-order
/// solution and an error estimate.
fn dopri5_step(
    rhs: &impl Fn(f64, &Mat2) -> Mat2,
    t: f64,
    y: &Mat2,
    h: f64,
) -> (Mat2, f64) {
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const E: [f64; 7] = [
        35.0 / 384.0 - 5179.0 / 57600.0,
        0.0,
        500.0 / 1113.0 - 7571.0 / 16695.0,
        125.0 / 192.0 - 393.0 / 640.0,
        -2187.0 / 6784.0 + 92097.0 / 339200.0,
        11.0 / 84.0 - 187.0 / 2100.0,
        -1.0 / 40.0,
    ];
    let mut k: [Mat2; 7] = [[Complex64::new(0.0, 0.0); 4]; 7];
    for stage in 0..7 {
        let mut ys = *y;
        for j in 0..stage {
            let a = A[stage][j];
            if a != 0.0 {
                for m in 0..4 {
                    ys[m] += Complex64::new(h * a, 0.0) * k[j][m];
                }
            }
        }
        k[stage] = rhs(t + C[stage] * h, &ys);
    }
    // 5th order solution uses row 6 of A (the FSAL layout)
    let mut y5 = *y;
    for j in 0..6 {
        let a = A[6][j];
        if a != 0.0 {
            for m in 0..4 {
                y5[m] += Complex64::new(h * a, 0.0) * k[j][m];
            }
        }
    }
    let mut err = [Complex64::new(0.0, 0.0); 4];
    for (j, e) in E.iter().enumerate() {
        if *e != 0.0 {
            for m in 0..4 {
                err[m] += Complex64::new(h * e, 0.0) * k[j][m];
            }
        }
    }
    (y5, mat_norm(&err))
}

#[cfg(test)]
mod tests {
    use super::*;
    
    use crate::family::mat_trace;
    use crate::harmonic::{DelaunayUnduloid, EquatorGeodesic, HarmonicTorusData};

    #[test]
    fn base_connection_has_trivial_holonomy() {
        let data = HarmonicTorusData::new(Box::new(EquatorGeodesic::square_2pi(16)));
        for gen in [Generator::One, Generator::Tau] {
            let h = holonomy(data.map.as_ref(), Complex64::new(1.0, 0.0), gen).unwrap();
            let defect = mat_norm(&mat_sub(&h, &mat_id()));
            assert!(defect < 1e-10, "{gen:?}: {defect}");
        }
    }

    #[test]
    fn equator_theta_trace_matches_the_closed_form() {
        // along the tau generator of the square 2 pi torus the equator
        // holonomy has constant coefficient matrix with eigen-exponents
        // +- (pi/2) sqrt(2 c1), i.e. trace 2 cosh((pi/2)(sqrt mu - 1/sqrt mu))
        let data = HarmonicTorusData::new(Box::new(EquatorGeodesic::square_2pi(16)));
        for mu in [
            Complex64::new(0.4, 0.0),
            Complex64::new(2.3, 0.0),
            Complex64::new(0.5, 0.8),
        ] {
            let h = holonomy(data.map.as_ref(), mu, Generator::Tau).unwrap();
            let root = mu.sqrt();
            let arg = std::f64::consts::FRAC_PI_2 * (root - 1.0 / root);
            let expect = 2.0 * arg.cosh();
            let got = mat_trace(&h);
            assert!(
                (got - expect).norm() < 1e-8 * (1.0 + expect.norm()),
                "mu = {mu}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn determinant_symmetry_and_commutator_invariants() {
        let data = HarmonicTorusData::new(Box::new(DelaunayUnduloid::new(0.4, 16)));
        let c = Complex64::new(0.0, -1.0); // rep(j)-conjugation data
        for mu in [Complex64::new(-0.7, 0.2), Complex64::new(1.4, -0.6)] {
            let s = holonomy_sample(data.map.as_ref(), mu).unwrap();
            assert!(s.det_defect < 1e-8, "det defect {}", s.det_defect);
            assert!(s.commutator < 1e-6, "commutator {}", s.commutator);
            // H_{1/conj(mu)} = J H_mu J^{-1} with J v = C conj(v),
            // C = [[0,-1],[1,0]]: so H' = C conj(H) C^{-1}
            let mu_ref = Complex64::new(1.0, 0.0) / mu.conj();
            let sr = holonomy_sample(data.map.as_ref(), mu_ref).unwrap();
            let conj_h = [
                s.h1[0].conj(),
                s.h1[1].conj(),
                s.h1[2].conj(),
                s.h1[3].conj(),
            ];
            // C M C^{-1} for C = [[0,-1],[1,0]]: [[m11, -m10], [-m01, m00]]
            let transported = [conj_h[3], -conj_h[2], -conj_h[1], conj_h[0]];
            let diff = mat_norm(&mat_sub(&sr.h1, &transported));
            assert!(diff < 1e-6, "symmetry residual {diff} at mu = {mu}");
            let _ = c;
        }
    }

    #[test]
    fn unit_circle_holonomies_are_unitary() {
        let data = HarmonicTorusData::new(Box::new(DelaunayUnduloid::new(0.4, 16)));
        for th in [0.7, 2.1] {
            let mu = Complex64::from_polar(1.0, th);
            let s = holonomy_sample(data.map.as_ref(), mu).unwrap();
            for h in [s.h1, s.h2] {
                // H H^dagger = Id
                let hh = [
                    h[0] * h[0].conj() + h[1] * h[1].conj(),
                    h[0] * h[2].conj() + h[1] * h[3].conj(),
                    h[2] * h[0].conj() + h[3] * h[1].conj(),
                    h[2] * h[2].conj() + h[3] * h[3].conj(),
                ];
                let defect = mat_norm(&mat_sub(&hh, &mat_id()));
                assert!(defect < 1e-6, "unitarity defect {defect}");
            }
        }
    }

    #[test]
    fn delaunay_branch_values_have_trace_minus_two() {
        // closed form: the unduloid branch pair sits at -b/a and -a/b
        let a = 0.4;
        let data = HarmonicTorusData::new(Box::new(DelaunayUnduloid::new(a, 16)));
        let b = 1.0 - a;
        for mu0 in [-b / a, -a / b] {
            let s = holonomy_sample(data.map.as_ref(), Complex64::new(mu0, 0.0)).unwrap();
            assert!(
                (s.t1 + 2.0).norm() < 1e-5,
                "t1 at {mu0}: {}",
                s.t1
            );
            assert!(
                (s.t2 + 2.0).norm() < 1e-5,
                "t2 at {mu0}: {}",
                s.t2
            );
        }
    }
}
