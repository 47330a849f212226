use num_complex::Complex64;
use quatlinalg::Quaternion;

use crate::{BiPoly, PluckerError, DEFAULT_DEPTH, MAX_DEPTH, RANK_THRESHOLD};

/// A section of a line bundle over CP^1-like charts: one polynomial in the
/// local coordinate (and its conjugate) per chart.
#[derive(Clone, Debug)]
pub struct AnalyticSection {
    pub charts: Vec<BiPoly>,
}

impl AnalyticSection {
    pub fn one_chart(p: BiPoly) -> Self {
        Self { charts: vec![p] }
    }

    /// A degree-d holomorphic polynomial section on CP^1: chart 0 carries
    /// p(z), chart 1 carries w^d p(1/w).
    pub fn cp1_polynomial(coeffs: &[Complex64], degree: u32) -> Self {
        let chart0 = BiPoly::from_complex_coeffs(coeffs);
        let mut chart1 = BiPoly::zero();
        for (a, c) in coeffs.iter().enumerate() {
            if c.norm() > 0.0 {
                chart1 = chart1.add(&BiPoly::monomial(
                    degree - a as u32,
                    0,
                    Quaternion::from_complex(*c),
                ));
            }
        }
        Self {
            charts: vec![chart0, chart1],
        }
    }

    pub fn chart(&self, i: usize) -> Result<&BiPoly, PluckerError> {
        self.charts.get(i).ok_or(PluckerError::BadChart(i))
    }

    /// Taylor coefficients centered at p on the given chart.
    pub fn taylor_at(&self, chart: usize, p: Complex64) -> Result<BiPoly, PluckerError> {
        Ok(self.chart(chart)?.recenter(p))
    }
}

/// A point of the covered surface: a chart index plus chart coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartPoint {
    pub chart: usize,
    pub z: Complex64,
}

/// Vanishing order of a recentered polynomial: the least total degree with
/// a coefficient above the relative rank threshold. The leading block of a
/// holomorphic section is purely a z-power; a dominant mixed term in the
/// leading block is reported as an error.
pub fn vanishing_order_of_poly(p: &BiPoly) -> Result<usize, PluckerError> {
    let scale = p.max_coeff();
    if scale == 0.0 {
        return Err(PluckerError::DepthExceeded(MAX_DEPTH));
    }
    let mut depth = DEFAULT_DEPTH;
    loop {
        for m in 0..=depth as u32 {
            let mut pure = 0.0f64;
            let mut mixed = 0.0f64;
            for (&(a, b), &v) in &p.coeffs {
                if a + b == m {
                    if b == 0 {
                        pure = pure.max(v.norm());
                    } else {
                        mixed = mixed.max(v.norm());
                    }
                }
            }
            if pure > RANK_THRESHOLD * scale {
                return Ok(m as usize);
            }
            if mixed > RANK_THRESHOLD * scale {
                return Err(PluckerError::MixedLeadingBlock {
                    order: m as usize,
                    mixed,
                });
            }
        }
        if depth >= MAX_DEPTH || depth as u32 >= p.total_degree() {
            return Err(PluckerError::DepthExceeded(depth));
        }
        depth = (2 * depth).min(MAX_DEPTH);
    }
}

/// Vanishing order of a section at a chart point.
pub fn vanishing_order(
    section: &AnalyticSection,
    at: ChartPoint,
) -> Result<usize, PluckerError> {
    vanishing_order_of_poly(&section.taylor_at(at.chart, at.z)?)
}

/// An (n+1)-dimensional linear system of sections of a degree-d bundle over
/// a genus-g surface.
#[derive(Clone, Debug)]
pub struct LinearSystemH {
    pub basis: Vec<AnalyticSection>,
    pub bundle_degree: i64,
    pub genus: u32,
}

impl LinearSystemH {
    pub fn dimension_n(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn chart_count(&self) -> Result<usize, PluckerError> {
        let n = self.basis.first().map(|s| s.charts.len()).unwrap_or(0);
        if self.basis.iter().any(|s| s.charts.len() != n) {
            return Err(PluckerError::ChartMismatch);
        }
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at0() -> ChartPoint {
        ChartPoint {
            chart: 0,
            z: Complex64::new(0.0, 0.0),
        }
    }

    #[test]
    fn order_of_z_cubed_is_three() {
        let s = AnalyticSection::one_chart(BiPoly::monomial(3, 0, Quaternion::one()));
        assert_eq!(vanishing_order(&s, at0()).unwrap(), 3);
    }

    #[test]
    fn nowhere_zero_section_has_order_zero() {
        let s = AnalyticSection::one_chart(BiPoly::constant(Quaternion::new(0.3, 1.0, 0.0, -2.0)));
        assert_eq!(vanishing_order(&s, at0()).unwrap(), 0);
    }

    #[test]
    fn mixed_higher_terms_do_not_change_the_order() {
        // z^2 (1 + conj z) = z^2 + z^2 conj z
        let s = AnalyticSection::one_chart(
            BiPoly::monomial(2, 0, Quaternion::one())
                .add(&BiPoly::monomial(2, 1, Quaternion::one())),
        );
        assert_eq!(vanishing_order(&s, at0()).unwrap(), 2);
    }

    #[test]
    fn zero_section_exceeds_depth() {
        let s = AnalyticSection::one_chart(BiPoly::zero());
        assert!(matches!(
            vanishing_order(&s, at0()),
            Err(PluckerError::DepthExceeded(_))
        ));
    }

    #[test]
    fn cp1_polynomial_infinity_chart() {
        // 1, z^2, z^3 in O(3): at infinity (w = 0 on chart 1) the orders are
        // 3, 1, 0
        let sections = [
            AnalyticSection::cp1_polynomial(&[Complex64::new(1.0, 0.0)], 3),
            AnalyticSection::cp1_polynomial(
                &[
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(1.0, 0.0),
                ],
                3,
            ),
            AnalyticSection::cp1_polynomial(
                &[
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(1.0, 0.0),
                ],
                3,
            ),
        ];
        let inf = ChartPoint {
            chart: 1,
            z: Complex64::new(0.0, 0.0),
        };
        let orders: Vec<usize> = sections
            .iter()
            .map(|s| vanishing_order(s, inf).unwrap())
            .collect();
        assert_eq!(orders, vec![3, 1, 0]);
    }
}
