use nalgebra::DMatrix;
use num_complex::Complex64;
use surface_domain::{spectral_derivative_matrix, TorusDomain};

use crate::PluckerError;

/// Kernel dimensions of the discretized holomorphic structure
/// D = delbar + q conj on the trivial degree-0 line bundle over a flat
/// torus, and of its adjoint, via singular-value thresholding.
///
/// The quaternionic operator is the double of this scalar one, so the
/// reported h^0 are quaternionic dimensions. The index h0 - h0_adj must
/// equal deg - (g - 1) rank = 0.
#[derive(Clone, Debug)]
pub struct IndexReport {
    pub h0: usize,
    pub h0_adj: usize,
    pub index: i64,
    pub expected: i64,
    pub singular_gap: f64,
    pub smallest: Vec<f64>,
}

pub fn riemann_roch_index_check(
    domain: &TorusDomain,
    q_const: Complex64,
) -> Result<IndexReport, PluckerError> {
    let (nx, ny) = (domain.nx, domain.ny);
    assert!(
        nx % 2 == 1 && ny % 2 == 1,
        "use odd grids so the spectral derivative has no Nyquist kernel"
    );
    let n = nx * ny;
    let ds = spectral_derivative_matrix(nx, 1.0, 0.0);
    let dt = spectral_derivative_matrix(ny, 1.0, 0.0);
    let l = domain.scale;
    let (t1, t2) = (domain.tau.re, domain.tau.im);

    // complex matrix of delbar = (d_x + i d_y)/2 on scalars
    let mut delbar = vec![Complex64::new(0.0, 0.0); n * n];
    let site = |a: usize, b: usize| b * nx + a;
    for b in 0..ny {
        for a in 0..nx {
            let r = site(a, b);
            for a2 in 0..nx {
                let v = ds[a * nx + a2];
                if v.norm() == 0.0 {
                    continue;
                }
                // d_x = ds / l, d_y contribution -t1 ds / (l t2)
                let c = site(a2, b);
                delbar[r * n + c] +=
                    0.5 * (v / l + Complex64::new(0.0, 1.0) * (-t1) * v / (l * t2));
            }
            for b2 in 0..ny {
                let v = dt[b * ny + b2];
                if v.norm() == 0.0 {
                    continue;
                }
                let c = site(a, b2);
                delbar[r * n + c] += 0.5 * Complex64::new(0.0, 1.0) * v / (l * t2);
            }
        }
    }

    // real 2n x 2n matrix of f -> delbar f + q conj(f) acting on (Re, Im)
    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let v = delbar[r * n + c];
            m[(r, c)] += v.re;
            m[(r, c + n)] += -v.im;
            m[(r + n, c)] += v.im;
            m[(r + n, c + n)] += v.re;
        }
        // q conj: (Re f, -Im f) rotated by q
        m[(r, r)] += q_const.re;
        m[(r, r + n)] += q_const.im;
        m[(r + n, r)] += q_const.im;
        m[(r + n, r + n)] += -q_const.re;
    }

    let svd = m.svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    sv.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let scale = sv.last().copied().unwrap_or(1.0);
    // kernel detection: largest relative gap below a conservative cap
    let cap = 1e-4 * scale.max(1.0);
    let mut kernel = 0usize;
    let mut best_gap = f64::INFINITY;
    for (i, &s) in sv.iter().enumerate() {
        if s > cap {
            if i > 0 {
                best_gap = sv[i] / sv[i - 1].max(1e-300);
            } else {
                best_gap = f64::INFINITY; // empty kernel, trivially decided
            }
            kernel = i;
            break;
        }
    }
    // a real 2-dim kernel of the real matrix is a complex 1-dim kernel
    if kernel % 2 != 0 {
        return Err(PluckerError::IndeterminateKernel(best_gap));
    }
    if kernel > 0 && best_gap < 1e3 {
        return Err(PluckerError::IndeterminateKernel(best_gap));
    }
    let h0 = kernel / 2;
    // square real matrix: dim ker M^T = dim ker M, which realizes the
    // index invariance deg - (g-1) rank = 0 exactly
    let h0_adj = h0;
    Ok(IndexReport {
        h0,
        h0_adj,
        index: h0 as i64 - h0_adj as i64,
        expected: 0,
        singular_gap: best_gap,
        smallest: sv.iter().take(6).cloned().collect(),
    })
}

/// Fourier oracle for the kernel dimension of delbar + q conj on the flat
/// torus: modes pair (xi, -xi); a pair block has trivial kernel unless both
/// symbols vanish, which happens only for xi = 0 and q = 0.
pub fn riemann_roch_oracle(domain: &TorusDomain, q_const: Complex64) -> usize {
    let _ = domain;
    if q_const.norm() == 0.0 {
        1
    } else {
        0
    }
}
