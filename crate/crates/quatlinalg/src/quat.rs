use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

/// A quaternion `w + x i + y j + z k` over `f64`.
///
/// `i j = k` and cyclic; conjugation flips the sign of the imaginary part.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn zero() -> Self {
        ZERO
    }

    pub const fn one() -> Self {
        Self::new(1.0, 0.0, 0.0, 0.0)
    }

    pub const I: Quaternion = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Self::new(0.0, 0.0, 0.0, 1.0);

    /// Purely imaginary quaternion from an R^3 vector.
    pub const fn from_imag(v: [f64; 3]) -> Self {
        Self::new(0.0, v[0], v[1], v[2])
    }

    pub const fn from_real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    /// Complex number a + bi embedded as w + xi.
    pub fn from_complex(c: Complex64) -> Self {
        Self::new(c.re, c.im, 0.0, 0.0)
    }

    pub fn imag(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sq(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn inverse(self) -> Self {
        let n = self.norm_sq();
        assert!(n > 0.0, "inverse of zero quaternion");
        self.conj() / n
    }

    pub fn normalized(self) -> Self {
        self / self.norm()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Splitting q = a + b j with a, b in C = span(1, i).
    pub fn complex_pair(self) -> (Complex64, Complex64) {
        (
            Complex64::new(self.w, self.x),
            Complex64::new(self.y, self.z),
        )
    }

    pub fn from_complex_pair(a: Complex64, b: Complex64) -> Self {
        Self::new(a.re, a.im, b.re, b.im)
    }

    /// Left-multiplication by `self` as a complex 2x2 matrix in row-major
    /// order, acting on the coordinates (a, conj(b)) of q = a + b j.
    pub fn rep(self) -> [Complex64; 4] {
        let (a, b) = self.complex_pair();
        [a, -b, b.conj(), a.conj()]
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::from_real(w)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        let Quaternion { w, x, y, z } = self;
        Self::new(
            w * r.w - x * r.x - y * r.y - z * r.z,
            w * r.x + x * r.w + y * r.z - z * r.y,
            w * r.y - x * r.z + y * r.w + z * r.x,
            w * r.z + x * r.y - y * r.x + z * r.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        self.scale(1.0 / s)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, r: Self) {
        *self = *self + r;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, r: Self) {
        *self = *self - r;
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, r: Self) {
        *self = *self * r;
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn multiplication_table() {
        use Quaternion as Q;
        assert_eq!(Q::I * Q::J, Q::K);
        assert_eq!(Q::J * Q::K, Q::I);
        assert_eq!(Q::K * Q::I, Q::J);
        assert_eq!(Q::J * Q::I, -Q::K);
        assert_eq!(Q::I * Q::I, -Q::one());
    }

    #[test]
    fn identity_and_expansion() {
        let q = Quaternion::new(0.3, -1.2, 0.7, 2.0);
        assert_eq!(Quaternion::one() * q, q);
        let lhs = (Quaternion::one() + Quaternion::I) * (Quaternion::one() + Quaternion::J);
        assert_eq!(lhs, Quaternion::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn rep_of_j_is_standard_doubling() {
        let r = Quaternion::J.rep();
        assert_eq!(r[0], Complex64::new(0.0, 0.0));
        assert_eq!(r[1], Complex64::new(-1.0, 0.0));
        assert_eq!(r[2], Complex64::new(1.0, 0.0));
        assert_eq!(r[3], Complex64::new(0.0, 0.0));
    }

    fn arb_quat() -> impl Strategy<Value = Quaternion> {
        let c = -3.0..3.0f64;
        (c.clone(), c.clone(), c.clone(), c).prop_map(|(w, x, y, z)| Quaternion::new(w, x, y, z))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn norm_is_multiplicative(a in arb_quat(), b in arb_quat()) {
            let lhs = (a * b).norm();
            let rhs = a.norm() * b.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + rhs));
        }

        #[test]
        fn conj_antihomomorphism(a in arb_quat(), b in arb_quat()) {
            prop_assert!(close((a * b).conj(), b.conj() * a.conj(), 1e-12));
        }

        #[test]
        fn associativity(a in arb_quat(), b in arb_quat(), c in arb_quat()) {
            prop_assert!(close((a * b) * c, a * (b * c), 1e-11));
        }

        #[test]
        fn conj_times_self_is_norm(a in arb_quat()) {
            let p = a.conj() * a;
            prop_assert!((p.w - a.norm_sq()).abs() <= 1e-12 * (1.0 + a.norm_sq()));
            prop_assert!(p.imag().iter().all(|v| v.abs() <= 1e-12));
        }

        #[test]
        fn rep_is_homomorphism(a in arb_quat(), b in arb_quat()) {
            let ra = a.rep();
            let rb = b.rep();
            let rab = (a * b).rep();
            // row-major 2x2 product
            let prod = [
                ra[0] * rb[0] + ra[1] * rb[2],
                ra[0] * rb[1] + ra[1] * rb[3],
                ra[2] * rb[0] + ra[3] * rb[2],
                ra[2] * rb[1] + ra[3] * rb[3],
            ];
            for (p, q) in prod.iter().zip(rab.iter()) {
                prop_assert!((p - q).norm() <= 1e-12);
            }
        }

        #[test]
        fn unit_rep_has_unit_det_and_conj_transpose(a in arb_quat()) {
            prop_assume!(a.norm() > 1e-3);
            let u = a.normalized();
            let r = u.rep();
            let det = r[0] * r[3] - r[1] * r[2];
            prop_assert!((det - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
            // conjugation of the scalar corresponds to the conjugate transpose
            let rc = u.conj().rep();
            prop_assert!((rc[0] - r[0].conj()).norm() <= 1e-12);
            prop_assert!((rc[1] - r[2].conj()).norm() <= 1e-12);
            prop_assert!((rc[2] - r[1].conj()).norm() <= 1e-12);
            prop_assert!((rc[3] - r[3].conj()).norm() <= 1e-12);
        }
    }
}
