use std::collections::BTreeMap;

use num_complex::Complex64;
use quatlinalg::Quaternion;

/// Polynomial in z and conj(z) with quaternion coefficients, indexed by
/// (a, b) for z^a conj(z)^b.
#[derive(Clone, Debug, Default)]
pub struct BiPoly {
    pub coeffs: BTreeMap<(u32, u32), Quaternion>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(q: Quaternion) -> Self {
        let mut p = Self::default();
        if q.norm() > 0.0 {
            p.coeffs.insert((0, 0), q);
        }
        p
    }

    /// Monomial q z^a conj(z)^b.
    pub fn monomial(a: u32, b: u32, q: Quaternion) -> Self {
        let mut p = Self::default();
        if q.norm() > 0.0 {
            p.coeffs.insert((a, b), q);
        }
        p
    }

    /// Holomorphic polynomial from complex coefficients c_0 + c_1 z + ...
    pub fn from_complex_coeffs(coeffs: &[Complex64]) -> Self {
        let mut p = Self::default();
        for (a, c) in coeffs.iter().enumerate() {
            if c.norm() > 0.0 {
                p.coeffs.insert((a as u32, 0), Quaternion::from_complex(*c));
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|q| q.norm() == 0.0)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.values().map(|q| q.norm()).fold(0.0, f64::max)
    }

    pub fn total_degree(&self) -> u32 {
        self.coeffs.keys().map(|&(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, &v) in &other.coeffs {
            let e = out.coeffs.entry(k).or_insert(Quaternion::zero());
            *e += v;
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, &v) in &other.coeffs {
            let e = out.coeffs.entry(k).or_insert(Quaternion::zero());
            *e -= v;
        }
        out.prune();
        out
    }

    /// Right multiplication by a quaternion scalar (module structure).
    pub fn scal_right(&self, q: Quaternion) -> Self {
        let mut out = Self::default();
        for (&k, &v) in &self.coeffs {
            out.coeffs.insert(k, v * q);
        }
        out.prune();
        out
    }

    /// Left multiplication by a quaternion scalar (endomorphism action).
    pub fn scal_left(&self, q: Quaternion) -> Self {
        let mut out = Self::default();
        for (&k, &v) in &self.coeffs {
            out.coeffs.insert(k, q * v);
        }
        out.prune();
        out
    }

    /// Product with another polynomial, coefficients multiplied in order
    /// (self * other).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (&(a1, b1), &v1) in &self.coeffs {
            for (&(a2, b2), &v2) in &other.coeffs {
                let e = out
                    .coeffs
                    .entry((a1 + a2, b1 + b2))
                    .or_insert(Quaternion::zero());
                *e += v1 * v2;
            }
        }
        out.prune();
        out
    }

    /// Partial derivative with respect to z.
    pub fn d_dz(&self) -> Self {
        let mut out = Self::default();
        for (&(a, b), &v) in &self.coeffs {
            if a > 0 {
                out.coeffs.insert((a - 1, b), v.scale(a as f64));
            }
        }
        out
    }

    /// Partial derivative with respect to conj(z).
    pub fn d_dzbar(&self) -> Self {
        let mut out = Self::default();
        for (&(a, b), &v) in &self.coeffs {
            if b > 0 {
                out.coeffs.insert((a, b - 1), v.scale(b as f64));
            }
        }
        out
    }

    /// Recenter at p: returns the polynomial in u with z = p + u,
    /// conj(z) = conj(p) + conj(u).
    pub fn recenter(&self, p: Complex64) -> Self {
        let mut out = Self::default();
        let pq = Quaternion::from_complex(p);
        let pbq = Quaternion::from_complex(p.conj());
        for (&(a, b), &v) in &self.coeffs {
            // expand (p + u)^a (pbar + ubar)^b
            for i in 0..=a {
                for j in 0..=b {
                    let c = binom(a, i) * binom(b, j);
                    let factor = pow_q(pq, a - i) * pow_q(pbq, b - j);
                    let e = out.coeffs.entry((i, j)).or_insert(Quaternion::zero());
                    // complex scalars commute with each other; keep them on
                    // the left of the quaternion coefficient
                    *e += (factor * v).scale(c);
                }
            }
        }
        out.prune();
        out
    }

    pub fn eval(&self, z: Complex64) -> Quaternion {
        let zq = Quaternion::from_complex(z);
        let zbq = Quaternion::from_complex(z.conj());
        let mut acc = Quaternion::zero();
        for (&(a, b), &v) in &self.coeffs {
            acc += pow_q(zq, a) * pow_q(zbq, b) * v;
        }
        acc
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, q| q.norm() > 0.0);
    }
}

fn binom(n: u32, k: u32) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

fn pow_q(q: Quaternion, n: u32) -> Quaternion {
    let mut acc = Quaternion::one();
    for _ in 0..n {
        acc = acc * q;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recentering_shifts_roots() {
        // (z - 2)^3 recentered at 2 is u^3
        let p = BiPoly::from_complex_coeffs(&[
            Complex64::new(-8.0, 0.0),
            Complex64::new(12.0, 0.0),
            Complex64::new(-6.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let r = p.recenter(Complex64::new(2.0, 0.0));
        for (&(a, b), &v) in &r.coeffs {
            if (a, b) == (3, 0) {
                assert!((v - Quaternion::one()).norm() < 1e-12);
            } else {
                assert!(v.norm() < 1e-12, "unexpected coeff at ({a},{b}): {v:?}");
            }
        }
    }

    #[test]
    fn derivative_and_product() {
        let z3 = BiPoly::monomial(3, 0, Quaternion::one());
        let d = z3.d_dz();
        assert_eq!(d.coeffs.len(), 1);
        assert!((d.coeffs[&(2, 0)] - Quaternion::from_real(3.0)).norm() < 1e-15);
        let zb = BiPoly::monomial(0, 1, Quaternion::J);
        let prod = z3.mul(&zb);
        assert!((prod.coeffs[&(3, 1)] - Quaternion::J).norm() < 1e-15);
    }
}
