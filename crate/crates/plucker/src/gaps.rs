use num_complex::Complex64;
use quatlinalg::Quaternion;

use crate::section::{vanishing_order_of_poly, ChartPoint};
use crate::{BiPoly, LinearSystemH, PluckerError, MAX_DEPTH, RANK_THRESHOLD};

/// Weierstrass gap data of a linear system at (or summed over) points.
#[derive(Clone, Debug)]
pub struct GapData {
    pub point: ChartPoint,
    pub gaps: Vec<usize>,
    pub order_at_p: usize,
}

fn pure_coeff(p: &BiPoly, m: usize) -> Quaternion {
    p.coeffs
        .get(&(m as u32, 0))
        .copied()
        .unwrap_or(Quaternion::zero())
}

/// Weierstrass gap sequence of the linear system at a point by column
/// reduction of the recentered Taylor data: repeatedly eliminate shared
/// leading orders by right-multiplying with quaternion ratios (the gap
/// sequence depends only on the span).
pub fn weierstrass_gaps(system: &LinearSystemH, at: ChartPoint) -> Result<GapData, PluckerError> {
    let mut cols: Vec<BiPoly> = system
        .basis
        .iter()
        .map(|s| s.taylor_at(at.chart, at.z))
        .collect::<Result<_, _>>()?;
    let n_plus_1 = cols.len();
    let mut guard = 0usize;
    loop {
        guard += 1;
        if guard > 4 * MAX_DEPTH * n_plus_1 {
            return Err(PluckerError::RankDeficient(n_plus_1));
        }
        // orders of all columns
        let mut orders = Vec::with_capacity(n_plus_1);
        for c in cols.iter() {
            orders.push(vanishing_order_of_poly(c).map_err(|e| match e {
                PluckerError::DepthExceeded(d) => PluckerError::RankDeficient(d),
                other => other,
            })?);
        }
        // find the lowest duplicated order; pivot = largest leading
        // coefficient among its columns (full pivoting as a rank decision)
        let mut sorted: Vec<usize> = (0..n_plus_1).collect();
        sorted.sort_by_key(|&i| orders[i]);
        let mut dup: Option<(usize, usize)> = None;
        for w in sorted.windows(2) {
            if orders[w[0]] == orders[w[1]] {
                dup = Some((w[0], w[1]));
                break;
            }
        }
        let Some((i, j)) = dup else {
            let mut gaps: Vec<usize> = orders;
            gaps.sort_unstable();
            let order_at_p = gaps
                .iter()
                .enumerate()
                .map(|(k, &nk)| nk - k)
                .sum::<usize>();
            return Ok(GapData {
                point: at,
                gaps,
                order_at_p,
            });
        };
        let m = orders[i];
        let ci = pure_coeff(&cols[i], m);
        let cj = pure_coeff(&cols[j], m);
        // pivot on the larger coefficient
        let (pivot, victim) = if ci.norm() >= cj.norm() { (i, j) } else { (j, i) };
        let cp = pure_coeff(&cols[pivot], m);
        let cv = pure_coeff(&cols[victim], m);
        if cp.norm() <= RANK_THRESHOLD * cols[pivot].max_coeff() {
            return Err(PluckerError::RankDeficient(m));
        }
        let lam = cp.inverse() * cv;
        cols[victim] = cols[victim].sub(&cols[pivot].scal_right(lam));
    }
}

/// Total order of the linear system over the candidate points:
/// ord H = sum over p of ord_p H. Non-Weierstrass candidates contribute 0.
pub fn order_h(
    system: &LinearSystemH,
    candidates: &[ChartPoint],
) -> Result<usize, PluckerError> {
    let mut total = 0usize;
    for &p in candidates {
        total += weierstrass_gaps(system, p)?.order_at_p;
    }
    Ok(total)
}

/// Roots of the Wronskian of a complex-coefficient system on a chart,
/// used as automatic Weierstrass-point candidates. The Wronskian is
/// expanded symbolically and factored by Durand-Kerner iteration.
pub fn wronskian_roots(
    system: &LinearSystemH,
    chart: usize,
) -> Result<Vec<Complex64>, PluckerError> {
    let n1 = system.basis.len();
    // rows: successive z-derivatives of each section (complex parts)
    let mut rows: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(n1);
    for s in &system.basis {
        let mut derivs = Vec::with_capacity(n1);
        let mut cur = s.chart(chart)?.clone();
        for _ in 0..n1 {
            derivs.push(complex_coeffs(&cur)?);
            cur = cur.d_dz();
        }
        rows.push(derivs);
    }
    // Wronskian determinant by Leibniz expansion over permutations
    // (systems here are small, n+1 <= 6)
    let mut det: Vec<Complex64> = vec![Complex64::new(0.0, 0.0)];
    let perms = permutations(n1);
    for (perm, sign) in perms {
        let mut term = vec![Complex64::new(sign, 0.0)];
        for (col, &row) in perm.iter().enumerate() {
            term = poly_mul(&term, &rows[col][row]);
        }
        det = poly_add(&det, &term);
    }
    durand_kerner(&det)
}

fn complex_coeffs(p: &BiPoly) -> Result<Vec<Complex64>, PluckerError> {
    let deg = p.total_degree() as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); deg + 1];
    for (&(a, b), &v) in &p.coeffs {
        if b != 0 || v.y.abs() > 0.0 || v.z.abs() > 0.0 {
            // Wronskian auto-candidates only apply to complex systems
            return Err(PluckerError::MixedLeadingBlock {
                order: (a + b) as usize,
                mixed: v.norm(),
            });
        }
        out[a as usize] = Complex64::new(v.w, v.x);
    }
    Ok(out)
}

fn poly_add(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().max(b.len());
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (i, v) in a.iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in b.iter().enumerate() {
        out[i] += v;
    }
    out
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, f64)>) {
        let n = used.len();
        if prefix.len() == n {
            // parity by inversion count
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if prefix[i] > prefix[j] {
                        inv += 1;
                    }
                }
            }
            out.push((prefix.clone(), if inv % 2 == 0 { 1.0 } else { -1.0 }));
            return;
        }
        for k in 0..n {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// All roots of a complex polynomial by Durand-Kerner iteration.
fn durand_kerner(coeffs: &[Complex64]) -> Result<Vec<Complex64>, PluckerError> {
    // strip trailing (near-)zero leading coefficients and factor out roots
    // at the origin
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(vec![]);
    }
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().norm() < 1e-13 * scale {
        c.pop();
    }
    let mut zero_roots = 0usize;
    while c.len() > 1 && c[0].norm() < 1e-13 * scale {
        c.remove(0);
        zero_roots += 1;
    }
    let deg = c.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); zero_roots];
    if deg == 0 {
        return Ok(roots);
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|v| v / lead).collect();
    let mut xs: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(1.3, 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let mut num = eval_poly(&monic, xs[i]);
            for j in 0..deg {
                if j != i {
                    num /= xs[i] - xs[j];
                }
            }
            xs[i] -= num;
            moved = moved.max(num.norm());
        }
        if moved < 1e-13 {
            roots.extend(xs);
            return Ok(roots);
        }
    }
    Err(PluckerError::RootFinding)
}

fn eval_poly(c: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for v in c.iter().rev() {
        acc = acc * z + v;
    }
    acc
}
