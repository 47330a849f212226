/// Residual of the Pluecker relation
/// (W - W*)/(4 pi) = (n+1)(n(1-g) - d) + ord H.
/// For complex inputs (W = W* = 0) the residual is an exact integer
/// identity and must vanish exactly.
pub fn plucker_verify(d: i64, g: u32, n: i64, ord_h: u64, w: f64, w_star: f64) -> f64 {
    let lhs = (w - w_star) / (4.0 * std::f64::consts::PI);
    let rhs = ((n + 1) * (n * (1 - g as i64) - d)) as f64 + ord_h as f64;
    lhs - rhs
}

/// Lower bound on the Willmore energy of a degree-d line bundle over genus
/// g with an (n+1)-dimensional linear system, from the Pluecker estimate:
/// the secant family W >= 4 pi (k+1)(n - d - k g), 0 <= k <= n, applied to
/// the system and to its Riemann-Roch paired bundle. Outside the validity
/// regions this degenerates to the trivial bound 0. In genus 0 this is
/// 4 pi (n+1)(n-d); over the square torus (d = 0, g = 1) it reproduces the
/// special values pi (n+1)^2 for odd n and pi ((n+1)^2 - 1) for even n.
pub fn willmore_lower_bound(n: i64, d: i64, g: u32) -> f64 {
    let mut best = 0.0f64;
    let secants = |n: i64, d: i64| -> f64 {
        let mut m = 0i64;
        if n < 0 {
            return 0.0;
        }
        for k in 0..=n {
            m = m.max((k + 1) * (n - d - k * g as i64));
        }
        4.0 * std::f64::consts::PI * m as f64
    };
    best = best.max(secants(n, d));
    // Riemann-Roch paired system: n~ + 1 = n - d + g, d~ = 2g - 2 - d
    let n_pair = n - d + g as i64 - 1;
    let d_pair = 2 * g as i64 - 2 - d;
    best = best.max(secants(n_pair, d_pair));
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn classical_cuspidal_cubic_closes_exactly() {
        // n = 2, g = 0, d = 3, ord H = 3, W = W* = 0
        assert_eq!(plucker_verify(3, 0, 2, 3, 0.0, 0.0), 0.0);
    }

    #[test]
    fn rational_normal_curves_close_exactly() {
        for n in 1..=5i64 {
            assert_eq!(plucker_verify(n, 0, n, 0, 0.0, 0.0), 0.0);
        }
    }

    #[test]
    fn dirac_sphere_equality_case() {
        // lambda = n eigenclusters: h^0 = n sections, so the system
        // dimension is n_sys = n - 1; d = -1, g = 0, W = 4 pi n^2, W* = 0
        for n in 1..=3i64 {
            let w = 4.0 * PI * (n * n) as f64;
            let r = plucker_verify(-1, 0, n - 1, 0, w, 0.0);
            assert!(r.abs() < 1e-12, "n = {n}: residual {r}");
        }
    }

    #[test]
    fn bound_examples() {
        assert!((willmore_lower_bound(0, -1, 0) - 4.0 * PI).abs() < 1e-12);
        // torus, d = 0: odd n gives pi (n+1)^2
        assert!((willmore_lower_bound(1, 0, 1) - 4.0 * PI).abs() < 1e-12);
        assert!((willmore_lower_bound(3, 0, 1) - 16.0 * PI).abs() < 1e-12);
        // even n gives pi ((n+1)^2 - 1)
        assert!((willmore_lower_bound(2, 0, 1) - 8.0 * PI).abs() < 1e-12);
        assert!((willmore_lower_bound(4, 0, 1) - 24.0 * PI).abs() < 1e-12);
        // genus 0 general formula
        assert!((willmore_lower_bound(2, -1, 0) - 4.0 * PI * 9.0).abs() < 1e-12);
        // trivial outside the regions
        assert_eq!(willmore_lower_bound(1, 5, 0), 0.0);
    }

    #[test]
    fn spin_degree_agreement_of_the_two_branches() {
        // at d = g - 1 the paired system has the same (n, d); both secant
        // families coincide, so the bound equals the single-family value
        for g in 1..=3u32 {
            let d = g as i64 - 1;
            for n in (g as i64 - 1).max(0)..=6 {
                let full = willmore_lower_bound(n, d, g);
                let single = {
                    let mut m = 0i64;
                    for k in 0..=n {
                        m = m.max((k + 1) * (n - d - k * g as i64));
                    }
                    4.0 * PI * m as f64
                };
                assert!((full - single).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bound_is_monotone_in_n() {
        for g in 0..=3u32 {
            for d in -3..=3i64 {
                let mut prev = -1.0;
                for n in 0..=8i64 {
                    let b = willmore_lower_bound(n, d, g);
                    assert!(b >= prev - 1e-12, "n={n} d={d} g={g}");
                    prev = b;
                }
            }
        }
    }
}
