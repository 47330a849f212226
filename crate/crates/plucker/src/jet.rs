use crate::section::vanishing_order_of_poly;
use crate::{BiPoly, PluckerError};

/// A chart connection for the jet model: nabla = d + omega(z) dz acting on
/// chart polynomials, with omega acting by left multiplication. The flat
/// choice omega = 0 is adapted for trivialized bundles.
#[derive(Clone, Debug, Default)]
pub struct AdaptedConnection {
    pub omega: BiPoly,
}

impl AdaptedConnection {
    pub fn flat() -> Self {
        Self::default()
    }

    /// K-part of the covariant derivative of a holomorphic chart polynomial.
    fn apply(&self, p: &BiPoly) -> BiPoly {
        p.d_dz().add(&self.omega.mul(p))
    }
}

/// A level-k element of the explicit jet model V_{k+1} = V_k + K N_k:
/// components [psi, -nabla psi, nabla^2 psi, ...], so that d-flat jets
/// satisfy nabla(pi psi) = -omega exactly, omega being the top component.
#[derive(Clone, Debug)]
pub struct JetElement {
    pub level: usize,
    pub components: Vec<BiPoly>,
}

impl JetElement {
    /// Projection dropping the top component, pi: V_k -> V_{k-1}.
    pub fn project(&self) -> Option<JetElement> {
        if self.level == 0 {
            return None;
        }
        Some(JetElement {
            level: self.level - 1,
            components: self.components[..self.components.len() - 1].to_vec(),
        })
    }

    /// Vanishing order at the center of the chart (minimum over components).
    pub fn order_at_center(&self) -> Result<usize, PluckerError> {
        let mut best: Option<usize> = None;
        for c in &self.components {
            match vanishing_order_of_poly(c) {
                Ok(o) => best = Some(best.map_or(o, |b| b.min(o))),
                Err(PluckerError::DepthExceeded(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        best.ok_or(PluckerError::DepthExceeded(crate::MAX_DEPTH))
    }

    /// Residual of the model identity nabla(pi psi) = -omega for d-flat
    /// jets; zero by construction for prolongations.
    pub fn d_flat_residual(&self, conn: &AdaptedConnection) -> f64 {
        let mut worst = 0.0f64;
        for w in self.components.windows(2) {
            let r = conn.apply(&w[0]).add(&w[1]);
            worst = worst.max(r.max_coeff());
        }
        worst
    }
}

/// k-th prolongation of a holomorphic chart polynomial:
/// P_{k+1} psi = (P_k psi, -nabla P_k psi).
pub fn prolong(psi: &BiPoly, k: usize, conn: &AdaptedConnection) -> JetElement {
    let mut components = vec![psi.clone()];
    for _ in 0..k {
        let top = components.last().unwrap();
        let next = conn.apply(top).scal_right(quatlinalg::Quaternion::from_real(-1.0));
        components.push(next);
    }
    JetElement {
        level: k,
        components,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use quatlinalg::Quaternion;

    #[test]
    fn parallel_section_prolongs_to_zero_top() {
        let psi = BiPoly::constant(Quaternion::new(1.0, -0.5, 2.0, 0.0));
        let jet = prolong(&psi, 1, &AdaptedConnection::flat());
        assert!(jet.components[1].is_zero());
        assert!(jet.d_flat_residual(&AdaptedConnection::flat()) < 1e-15);
    }

    #[test]
    fn projection_commutes_with_prolongation() {
        let psi = BiPoly::from_complex_coeffs(&[
            Complex64::new(0.0, 0.0),
            Complex64::new(2.0, 1.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.5),
        ]);
        let conn = AdaptedConnection::flat();
        let p3 = prolong(&psi, 3, &conn);
        let p2 = prolong(&psi, 2, &conn);
        let projected = p3.project().unwrap();
        assert_eq!(projected.level, p2.level);
        for (a, b) in projected.components.iter().zip(&p2.components) {
            assert!(a.sub(b).max_coeff() < 1e-14);
        }
    }

    #[test]
    fn order_drops_by_one_per_prolongation_level() {
        // psi = z^4: ord(P_k psi) = 4 - k for k <= 4
        let psi = BiPoly::monomial(4, 0, Quaternion::one());
        let conn = AdaptedConnection::flat();
        for k in 0..=4usize {
            let jet = prolong(&psi, k, &conn);
            assert_eq!(jet.order_at_center().unwrap(), 4 - k);
        }
    }

    #[test]
    fn leading_prolongation_coefficient_is_the_falling_factorial() {
        // P_k(z^n) top component = (-1)^k n(n-1)...(n-k+1) z^{n-k}
        let n = 5u32;
        let psi = BiPoly::monomial(n, 0, Quaternion::one());
        let jet = prolong(&psi, 3, &AdaptedConnection::flat());
        let top = &jet.components[3];
        let expect = -(5.0 * 4.0 * 3.0); // (-1)^3 * 5*4*3
        let c = top.coeffs[&(2, 0)];
        assert!((c - Quaternion::from_real(expect)).norm() < 1e-12);
    }

    #[test]
    fn nonflat_connection_kills_its_parallel_sections() {
        // nabla = d + omega with omega = -1: parallel chart section e^z is
        // not polynomial, but the first-order check still applies to the
        // truncated series
        let conn = AdaptedConnection {
            omega: BiPoly::constant(Quaternion::from_real(-1.0)),
        };
        // truncated e^z
        let coeffs: Vec<Complex64> = (0..8)
            .map(|k| Complex64::new(1.0 / (1..=k).map(|i| i as f64).product::<f64>(), 0.0))
            .collect();
        let psi = BiPoly::from_complex_coeffs(&coeffs);
        let jet = prolong(&psi, 1, &conn);
        // top component = -(psi' - psi) = truncation-order small
        let ord = vanishing_order_of_poly(&jet.components[1]).unwrap();
        assert!(ord >= 7, "residual order {ord}");
    }
}
