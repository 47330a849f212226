use quatlinalg::Quaternion;

use crate::{Domain, DomainError};

/// A quaternion-valued discrete differential form.
///
/// Degree 1 stores both frame components (w(X), w(J_M X)); degree 2 stores
/// the quadratic-form representative w(X) = w(X, J_M X).
#[derive(Clone, Debug)]
pub enum DiscreteForm {
    Zero(Vec<Quaternion>),
    One {
        on_x: Vec<Quaternion>,
        on_jx: Vec<Quaternion>,
    },
    Two(Vec<Quaternion>),
}

impl DiscreteForm {
    pub fn degree(&self) -> u8 {
        match self {
            DiscreteForm::Zero(_) => 0,
            DiscreteForm::One { .. } => 1,
            DiscreteForm::Two(_) => 2,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            DiscreteForm::Zero(v) | DiscreteForm::Two(v) => v.len(),
            DiscreteForm::One { on_x, .. } => on_x.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn one_from_components(on_x: Vec<Quaternion>, on_jx: Vec<Quaternion>) -> Self {
        assert_eq!(on_x.len(), on_jx.len());
        DiscreteForm::One { on_x, on_jx }
    }

    pub fn scaled(&self, s: f64) -> Self {
        match self {
            DiscreteForm::Zero(v) => DiscreteForm::Zero(v.iter().map(|q| q.scale(s)).collect()),
            DiscreteForm::Two(v) => DiscreteForm::Two(v.iter().map(|q| q.scale(s)).collect()),
            DiscreteForm::One { on_x, on_jx } => DiscreteForm::One {
                on_x: on_x.iter().map(|q| q.scale(s)).collect(),
                on_jx: on_jx.iter().map(|q| q.scale(s)).collect(),
            },
        }
    }

    /// Pointwise left multiplication by a scalar function.
    pub fn left_mul(&self, f: &[Quaternion]) -> Self {
        match self {
            DiscreteForm::Zero(v) => {
                DiscreteForm::Zero(v.iter().zip(f).map(|(q, s)| *s * *q).collect())
            }
            DiscreteForm::Two(v) => {
                DiscreteForm::Two(v.iter().zip(f).map(|(q, s)| *s * *q).collect())
            }
            DiscreteForm::One { on_x, on_jx } => DiscreteForm::One {
                on_x: on_x.iter().zip(f).map(|(q, s)| *s * *q).collect(),
                on_jx: on_jx.iter().zip(f).map(|(q, s)| *s * *q).collect(),
            },
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, DomainError> {
        if self.degree() != other.degree() {
            return Err(DomainError::DegreeMismatch {
                expected: self.degree(),
                got: other.degree(),
            });
        }
        if self.len() != other.len() {
            return Err(DomainError::IncompatibleDomains(self.len(), other.len()));
        }
        Ok(match (self, other) {
            (DiscreteForm::Zero(a), DiscreteForm::Zero(b)) => {
                DiscreteForm::Zero(a.iter().zip(b).map(|(x, y)| *x + *y).collect())
            }
            (DiscreteForm::Two(a), DiscreteForm::Two(b)) => {
                DiscreteForm::Two(a.iter().zip(b).map(|(x, y)| *x + *y).collect())
            }
            (
                DiscreteForm::One { on_x: ax, on_jx: aj },
                DiscreteForm::One { on_x: bx, on_jx: bj },
            ) => DiscreteForm::One {
                on_x: ax.iter().zip(bx).map(|(x, y)| *x + *y).collect(),
                on_jx: aj.iter().zip(bj).map(|(x, y)| *x + *y).collect(),
            },
            _ => unreachable!(),
        })
    }

    pub fn max_norm(&self) -> f64 {
        let fold = |v: &[Quaternion]| v.iter().map(|q| q.norm()).fold(0.0, f64::max);
        match self {
            DiscreteForm::Zero(v) | DiscreteForm::Two(v) => fold(v),
            DiscreteForm::One { on_x, on_jx } => fold(on_x).max(fold(on_jx)),
        }
    }
}

/// Hodge star on 1-forms, *w = w o J_M; satisfies ** = -id.
pub fn hodge_star(omega: &DiscreteForm) -> Result<DiscreteForm, DomainError> {
    match omega {
        DiscreteForm::One { on_x, on_jx } => Ok(DiscreteForm::One {
            // (*w)(X) = w(J X), (*w)(JX) = w(J^2 X) = -w(X)
            on_x: on_jx.clone(),
            on_jx: on_x.iter().map(|q| -*q).collect(),
        }),
        other => Err(DomainError::DegreeMismatch {
            expected: 1,
            got: other.degree(),
        }),
    }
}

/// Wedge of two 1-forms as the quadratic-form representative
/// (w ^ e)(X) = w(X) e(JX) - w(JX) e(X), the pairing being the
/// quaternion product.
pub fn wedge_as_quadratic(
    omega: &DiscreteForm,
    eta: &DiscreteForm,
) -> Result<DiscreteForm, DomainError> {
    match (omega, eta) {
        (
            DiscreteForm::One { on_x: ax, on_jx: aj },
            DiscreteForm::One { on_x: bx, on_jx: bj },
        ) => {
            if ax.len() != bx.len() {
                return Err(DomainError::IncompatibleDomains(ax.len(), bx.len()));
            }
            Ok(DiscreteForm::Two(
                (0..ax.len())
                    .map(|i| ax[i] * bj[i] - aj[i] * bx[i])
                    .collect(),
            ))
        }
        _ => Err(DomainError::DegreeMismatch {
            expected: 1,
            got: omega.degree().max(eta.degree()),
        }),
    }
}

/// Quadrature of a 2-form against the cell areas. Linear in the form.
pub fn integrate_2form(omega: &DiscreteForm, domain: &Domain) -> Result<Quaternion, DomainError> {
    match omega {
        DiscreteForm::Two(v) => {
            if v.len() != domain.node_count() {
                return Err(DomainError::IncompatibleDomains(
                    v.len(),
                    domain.node_count(),
                ));
            }
            Ok(v.iter()
                .enumerate()
                .map(|(i, q)| q.scale(domain.cell_area(i)))
                .sum())
        }
        other => Err(DomainError::DegreeMismatch {
            expected: 2,
            got: other.degree(),
        }),
    }
}

/// Exterior derivative of degree-0 and degree-1 forms.
///
/// For a 1-form the result is the quadratic form
/// dw(X, JX) = X(w(JX)) - JX(w(X)) - w([X, JX]); the frame commutator
/// vanishes on flat tori and equals -cot(theta) e_phi on the sphere frame.
pub fn exterior_derivative(
    omega: &DiscreteForm,
    domain: &Domain,
) -> Result<DiscreteForm, DomainError> {
    match omega {
        DiscreteForm::Zero(v) => {
            let (dx, djx) = domain.frame_derivatives_quat(v);
            Ok(DiscreteForm::One {
                on_x: dx,
                on_jx: djx,
            })
        }
        DiscreteForm::One { on_x, on_jx } => {
            let (d_jxcomp, _) = domain.frame_derivatives_quat(on_jx);
            let (_, dj_xcomp) = domain.frame_derivatives_quat(on_x);
            let mut vals: Vec<Quaternion> = d_jxcomp
                .iter()
                .zip(&dj_xcomp)
                .map(|(a, b)| *a - *b)
                .collect();
            if let Domain::Sphere(s) = domain {
                for (idx, val) in vals.iter_mut().enumerate() {
                    let (th, _) = s.angles(idx);
                    *val += on_jx[idx].scale(th.cos() / th.sin());
                }
            }
            Ok(DiscreteForm::Two(vals))
        }
        other => Err(DomainError::DegreeMismatch {
            expected: 1,
            got: other.degree(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{DiffMethod, TorusDomain};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use quatlinalg::Quaternion as Q;

    fn square_torus(n: usize) -> Domain {
        Domain::Torus(TorusDomain::square(n, 2.0 * std::f64::consts::PI))
    }

    fn dx_form(d: &Domain) -> DiscreteForm {
        let n = d.node_count();
        DiscreteForm::one_from_components(vec![Q::one(); n], vec![Q::zero(); n])
    }

    fn dy_form(d: &Domain) -> DiscreteForm {
        let n = d.node_count();
        DiscreteForm::one_from_components(vec![Q::zero(); n], vec![Q::one(); n])
    }

    #[test]
    fn hodge_star_rotates_frame_and_squares_to_minus_id() {
        let d = square_torus(8);
        let dx = dx_form(&d);
        let starred = hodge_star(&dx).unwrap();
        // * dx = -dy under * w = w o J_M (the sign that makes * dz = i dz)
        if let DiscreteForm::One { on_x, on_jx } = &starred {
            assert!(on_x.iter().all(|q| q.norm() < 1e-15));
            assert!(on_jx.iter().all(|q| (*q + Q::one()).norm() < 1e-15));
        }
        let twice = hodge_star(&starred).unwrap();
        let diff = twice.add(&dx).unwrap();
        assert!(diff.max_norm() < 1e-13);
    }

    #[test]
    fn star_of_dz_is_i_dz() {
        // dz = dx + i dy has components (1, i) on the frame; *dz = i dz
        let d = square_torus(8);
        let n = d.node_count();
        let dz = DiscreteForm::one_from_components(vec![Q::one(); n], vec![Q::I; n]);
        let starred = hodge_star(&dz).unwrap();
        let idz = dz.left_mul(&vec![Q::I; n]);
        if let (DiscreteForm::One { on_x: a, on_jx: b }, DiscreteForm::One { on_x: c, on_jx: e }) =
            (&starred, &idz)
        {
            for i in 0..n {
                assert!((a[i] - c[i]).norm() < 1e-15);
                assert!((b[i] - e[i]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn hodge_star_rejects_wrong_degree() {
        let err = hodge_star(&DiscreteForm::Zero(vec![Q::one()])).unwrap_err();
        assert!(matches!(err, DomainError::DegreeMismatch { .. }));
    }

    #[test]
    fn wedge_examples() {
        let d = square_torus(8);
        let n = d.node_count();
        let area = wedge_as_quadratic(&dx_form(&d), &dy_form(&d)).unwrap();
        if let DiscreteForm::Two(v) = &area {
            assert!(v.iter().all(|q| (*q - Q::one()).norm() < 1e-15));
        }
        // w ^ w = 0 for real scalar w
        let w = DiscreteForm::one_from_components(
            vec![Q::from_real(0.7); n],
            vec![Q::from_real(-0.3); n],
        );
        let sq = wedge_as_quadratic(&w, &w).unwrap();
        assert!(sq.max_norm() < 1e-15);
        // dz ^ dzbar = -2i
        let dz = DiscreteForm::one_from_components(vec![Q::one(); n], vec![Q::I; n]);
        let dzbar = DiscreteForm::one_from_components(vec![Q::one(); n], vec![-Q::I; n]);
        let wedge = wedge_as_quadratic(&dz, &dzbar).unwrap();
        if let DiscreteForm::Two(v) = &wedge {
            assert!(v.iter().all(|q| (*q - Q::I.scale(-2.0)).norm() < 1e-14));
        }
    }

    #[test]
    fn wedge_with_own_star_is_a_signed_norm_density() {
        // For real scalar forms w ^ *w = -(w(X)^2 + w(JX)^2), so the |w|^2
        // density is -(w ^ *w); for imaginary-valued forms (the Willmore
        // integrand case) the real trace flips the sign back to positive.
        let d = square_torus(8);
        let n = d.node_count();
        let w = DiscreteForm::one_from_components(
            (0..n).map(|i| Q::from_real((i as f64).sin())).collect(),
            (0..n).map(|i| Q::from_real((i as f64 * 0.7).cos())).collect(),
        );
        let sw = hodge_star(&w).unwrap();
        let dens = wedge_as_quadratic(&w, &sw).unwrap();
        if let (DiscreteForm::Two(v), DiscreteForm::One { on_x, on_jx }) = (&dens, &w) {
            for (i, q) in v.iter().enumerate() {
                let expect = -(on_x[i].w.powi(2) + on_jx[i].w.powi(2));
                assert!((q.w - expect).abs() < 1e-14);
                assert!(q.imag().iter().all(|c| c.abs() < 1e-15));
            }
        }
        // imaginary-valued: real part of w ^ *w is +|w|^2
        let wi = DiscreteForm::one_from_components(
            (0..n).map(|i| Q::from_imag([(i as f64).sin(), 0.3, 0.0])).collect(),
            (0..n).map(|_| Q::from_imag([0.0, -0.4, 1.1])).collect(),
        );
        let swi = hodge_star(&wi).unwrap();
        let densi = wedge_as_quadratic(&wi, &swi).unwrap();
        if let (DiscreteForm::Two(v), DiscreteForm::One { on_x, on_jx }) = (&densi, &wi) {
            for (i, q) in v.iter().enumerate() {
                let expect = on_x[i].norm_sq() + on_jx[i].norm_sq();
                assert!((q.w - expect).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn integration_examples() {
        // area form on square torus of side 2 pi integrates to 4 pi^2 exactly
        let d = square_torus(16);
        let ones = DiscreteForm::Two(vec![Q::one(); d.node_count()]);
        let total = integrate_2form(&ones, &d).unwrap();
        assert!((total.w - 4.0 * std::f64::consts::PI.powi(2)).abs() < 1e-10);
        // icosphere level-5 triangle areas sum to 4 pi within 0.1%
        let mesh = crate::IcosphereMesh::new(5);
        let four_pi = 4.0 * std::f64::consts::PI;
        assert!((mesh.total_area() - four_pi).abs() / four_pi < 1e-3);
    }

    #[test]
    fn integration_is_linear() {
        let d = square_torus(8);
        let n = d.node_count();
        let w: Vec<Q> = (0..n).map(|i| Q::new(0.1 * i as f64, 1.0, -0.4, 0.0)).collect();
        let e: Vec<Q> = (0..n).map(|i| Q::new(-(i as f64), 0.0, 2.0, 0.3)).collect();
        let (a, b) = (0.7, -1.3);
        let comb: Vec<Q> = w
            .iter()
            .zip(&e)
            .map(|(p, q)| p.scale(a) + q.scale(b))
            .collect();
        let lhs = integrate_2form(&DiscreteForm::Two(comb), &d).unwrap();
        let rhs = integrate_2form(&DiscreteForm::Two(w), &d).unwrap().scale(a)
            + integrate_2form(&DiscreteForm::Two(e), &d).unwrap().scale(b);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn d_of_constant_vanishes_and_d_of_x_is_dx() {
        let dom = square_torus(16);
        let n = dom.node_count();
        let c = DiscreteForm::Zero(vec![Q::new(0.2, -1.0, 3.0, 0.5); n]);
        assert!(exterior_derivative(&c, &dom).unwrap().max_norm() < 1e-12);

        // f = sin x has df = cos x dx; exact under spectral differentiation
        let tor = match &dom {
            Domain::Torus(t) => t.clone(),
            _ => unreachable!(),
        };
        let f = DiscreteForm::Zero(
            (0..n)
                .map(|i| Q::from_real(tor.position(i).re.sin()))
                .collect(),
        );
        let df = exterior_derivative(&f, &dom).unwrap();
        if let DiscreteForm::One { on_x, on_jx } = &df {
            for i in 0..n {
                assert!((on_x[i].w - tor.position(i).re.cos()).abs() < 1e-11);
                assert!(on_jx[i].norm() < 1e-11);
            }
        }
    }

    #[test]
    fn dd_residual_vanishes_on_flat_torus_grids() {
        // centered differences along the two lattice directions commute, so
        // d(d f) is exactly zero on the flat torus
        let t = TorusDomain::square(16, 2.0 * std::f64::consts::PI)
            .with_method(DiffMethod::FiniteDifference);
        let dom = Domain::Torus(t.clone());
        let f = DiscreteForm::Zero(
            (0..dom.node_count())
                .map(|i| {
                    let z = t.position(i);
                    Q::from_real((z.re + 0.3).sin() * (2.0 * z.im).cos() + (z.re * 2.0).cos())
                })
                .collect(),
        );
        let df = exterior_derivative(&f, &dom).unwrap();
        assert!(exterior_derivative(&df, &dom).unwrap().max_norm() < 1e-12);
    }

    #[test]
    fn dd_residual_is_second_order_on_the_sphere() {
        // the sphere frame does not commute, so d(d f) has a genuine O(h^2)
        // finite-difference residual; measure the convergence order
        let residual = |subdiv: u32| -> f64 {
            let s = crate::SphereDomain::new(subdiv);
            let dom = Domain::Sphere(s.clone());
            let f = DiscreteForm::Zero(
                (0..dom.node_count())
                    .map(|i| {
                        let p = s.position(i);
                        Q::from_real(p[0] * p[1] + 0.5 * p[2].powi(3) + 0.2 * p[0])
                    })
                    .collect(),
            );
            let df = exterior_derivative(&f, &dom).unwrap();
            let ddf = exterior_derivative(&df, &dom).unwrap();
            // area-weighted L2 residual
            if let DiscreteForm::Two(v) = &ddf {
                v.iter()
                    .enumerate()
                    .map(|(i, q)| q.norm_sq() * dom.cell_area(i))
                    .sum::<f64>()
                    .sqrt()
            } else {
                unreachable!()
            }
        };
        let r3 = residual(3);
        let r4 = residual(4);
        let slope = (r3 / r4).log2();
        assert!(slope >= 1.9, "observed convergence order {slope}");
    }

    #[test]
    fn stokes_integral_of_exact_forms_vanishes() {
        let t = TorusDomain::new(Complex64::new(0.2, 0.9), 24, 24).unwrap();
        let dom = Domain::Torus(t.clone());
        let n = dom.node_count();
        // periodic 1-form with non-trivial components
        let w = DiscreteForm::one_from_components(
            (0..n)
                .map(|i| {
                    let (s, tt) = t.grid_coords(i);
                    Q::new(
                        (2.0 * std::f64::consts::PI * s).sin(),
                        (2.0 * std::f64::consts::PI * (s + tt)).cos(),
                        0.0,
                        (2.0 * std::f64::consts::PI * tt).sin(),
                    )
                })
                .collect(),
            (0..n)
                .map(|i| {
                    let (s, tt) = t.grid_coords(i);
                    Q::new((2.0 * std::f64::consts::PI * tt).cos(), 0.1 * (2.0 * std::f64::consts::PI * s).sin(), 0.0, 0.0)
                })
                .collect(),
        );
        let dw = exterior_derivative(&w, &dom).unwrap();
        let total = integrate_2form(&dw, &dom).unwrap();
        assert!(total.norm() < 1e-10, "Stokes residual {}", total.norm());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn hodge_star_commutes_with_scalar_multiplication(seed in 0u64..1000) {
            let d = square_torus(6);
            let n = d.node_count();
            let mk = |s: u64, k: u64| {
                let v = ((s.wrapping_mul(6364136223846793005).wrapping_add(k)) % 1000) as f64 / 500.0 - 1.0;
                v
            };
            let f: Vec<Q> = (0..n).map(|i| Q::new(mk(seed, i as u64), mk(seed, 7 + i as u64), 0.3, -0.2)).collect();
            let w = DiscreteForm::one_from_components(
                (0..n).map(|i| Q::new(mk(seed, 100 + i as u64), 0.0, 1.0, 0.0)).collect(),
                (0..n).map(|i| Q::new(0.5, mk(seed, 200 + i as u64), 0.0, 0.0)).collect(),
            );
            let lhs = hodge_star(&w.left_mul(&f)).unwrap();
            let rhs = hodge_star(&w).unwrap().left_mul(&f);
            let diff = lhs.add(&rhs.scaled(-1.0)).unwrap();
            prop_assert!(diff.max_norm() < 1e-13);
        }
    }
}
