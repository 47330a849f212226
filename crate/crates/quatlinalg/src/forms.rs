use crate::{ComplexStructureJ, Quaternion};

/// Type of a 1-form value under the decomposition induced by J:
/// K-part satisfies *w = J w, Kbar-part satisfies *w = -J w.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    KPart,
    KbarPart,
    Mixed,
}

/// A quaternion-vector valued 1-form at a point, stored by its values on an
/// oriented orthonormal frame (X, J_M X).
#[derive(Clone, Debug)]
pub struct FormValue {
    pub kind: FormKind,
    /// w(X)
    pub on_x: Vec<Quaternion>,
    /// w(J_M X)
    pub on_jx: Vec<Quaternion>,
}

impl FormValue {
    pub fn mixed(on_x: Vec<Quaternion>, on_jx: Vec<Quaternion>) -> Self {
        assert_eq!(on_x.len(), on_jx.len());
        Self {
            kind: FormKind::Mixed,
            on_x,
            on_jx,
        }
    }

    fn sub(&self, other: &FormValue) -> (Vec<Quaternion>, Vec<Quaternion>) {
        (
            self.on_x
                .iter()
                .zip(&other.on_x)
                .map(|(a, b)| *a - *b)
                .collect(),
            self.on_jx
                .iter()
                .zip(&other.on_jx)
                .map(|(a, b)| *a - *b)
                .collect(),
        )
    }

    pub fn max_norm(&self) -> f64 {
        self.on_x
            .iter()
            .chain(&self.on_jx)
            .map(|q| q.norm())
            .fold(0.0, f64::max)
    }

    /// Residual of the defining relation of `kind` (0 for Mixed).
    pub fn type_residual(&self, j: &ComplexStructureJ) -> f64 {
        // *w(X) = w(JX), *w(JX) = -w(X)
        let jw_x = j.apply(&self.on_jx); // (J * w)(X) = J w(JX)
        let jw_jx: Vec<Quaternion> = j.apply(&self.on_x).iter().map(|q| -*q).collect();
        let residual = |sign: f64| {
            let rx: f64 = self
                .on_x
                .iter()
                .zip(&jw_x)
                .map(|(a, b)| (*a - b.scale(sign)).norm())
                .fold(0.0, f64::max);
            let rj: f64 = self
                .on_jx
                .iter()
                .zip(&jw_jx)
                .map(|(a, b)| (*a - b.scale(sign)).norm())
                .fold(0.0, f64::max);
            rx.max(rj)
        };
        match self.kind {
            // K-part: *w = J w, i.e. w = -J*w ... use w(JX) = J w(X) form:
            FormKind::KPart => {
                // *w = Jw  <=>  w(JX) = J w(X) and -w(X) = J w(JX)
                let a: f64 = self
                    .on_jx
                    .iter()
                    .zip(j.apply(&self.on_x))
                    .map(|(l, r)| (*l - r).norm())
                    .fold(0.0, f64::max);
                let b: f64 = self
                    .on_x
                    .iter()
                    .zip(j.apply(&self.on_jx))
                    .map(|(l, r)| (*l + r).norm())
                    .fold(0.0, f64::max);
                a.max(b)
            }
            FormKind::KbarPart => {
                let a: f64 = self
                    .on_jx
                    .iter()
                    .zip(j.apply(&self.on_x))
                    .map(|(l, r)| (*l + r).norm())
                    .fold(0.0, f64::max);
                let b: f64 = self
                    .on_x
                    .iter()
                    .zip(j.apply(&self.on_jx))
                    .map(|(l, r)| (*l - r).norm())
                    .fold(0.0, f64::max);
                a.max(b)
            }
            FormKind::Mixed => {
                let _ = residual;
                0.0
            }
        }
    }
}

/// Decompose a 1-form value into K and Kbar parts with respect to J:
/// w' = (w - J*w)/2, w'' = (w + J*w)/2.
pub fn type_decompose(omega: &FormValue, j: &ComplexStructureJ) -> (FormValue, FormValue) {
    let n = omega.on_x.len();
    assert_eq!(j.rank(), if n == 0 { 0 } else { n });
    // (*w)(X) = w(JX), (*w)(JX) = w(J^2 X) = -w(X)
    let jstar_x = j.apply(&omega.on_jx);
    let jstar_jx: Vec<Quaternion> = j.apply(&omega.on_x).iter().map(|q| -*q).collect();

    let half = |a: &Quaternion, b: &Quaternion, s: f64| (*a + b.scale(s)).scale(0.5);

    let k = FormValue {
        kind: FormKind::KPart,
        on_x: omega
            .on_x
            .iter()
            .zip(&jstar_x)
            .map(|(a, b)| half(a, b, -1.0))
            .collect(),
        on_jx: omega
            .on_jx
            .iter()
            .zip(&jstar_jx)
            .map(|(a, b)| half(a, b, -1.0))
            .collect(),
    };
    let kbar = FormValue {
        kind: FormKind::KbarPart,
        on_x: omega
            .on_x
            .iter()
            .zip(&jstar_x)
            .map(|(a, b)| half(a, b, 1.0))
            .collect(),
        on_jx: omega
            .on_jx
            .iter()
            .zip(&jstar_jx)
            .map(|(a, b)| half(a, b, 1.0))
            .collect(),
    };
    (k, kbar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn j_i() -> ComplexStructureJ {
        ComplexStructureJ::scalar(Quaternion::I)
    }

    #[test]
    fn dz_is_already_type_10() {
        // dz on the frame (d/dx, d/dy): dz(X) = 1, dz(JX) = i
        let dz = FormValue::mixed(
            vec![Quaternion::one()],
            vec![Quaternion::I],
        );
        let (k, kbar) = type_decompose(&dz, &j_i());
        assert!((k.on_x[0] - Quaternion::one()).norm() < 1e-15);
        assert!((k.on_jx[0] - Quaternion::I).norm() < 1e-15);
        assert!(kbar.max_norm() < 1e-15);
    }

    #[test]
    fn dzbar_is_already_type_01() {
        let dzbar = FormValue::mixed(vec![Quaternion::one()], vec![-Quaternion::I]);
        let (k, kbar) = type_decompose(&dzbar, &j_i());
        assert!(k.max_norm() < 1e-15);
        assert!((kbar.on_x[0] - Quaternion::one()).norm() < 1e-15);
    }

    fn arb_form(n: usize) -> impl Strategy<Value = FormValue> {
        proptest::collection::vec(
            (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64),
            2 * n,
        )
        .prop_map(move |v| {
            let qs: Vec<Quaternion> = v
                .into_iter()
                .map(|(w, x, y, z)| Quaternion::new(w, x, y, z))
                .collect();
            FormValue::mixed(qs[..n].to_vec(), qs[n..].to_vec())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn decomposition_reconstructs_and_has_pure_types(omega in arb_form(1)) {
            let j = j_i();
            let (k, kbar) = type_decompose(&omega, &j);
            let (dx, djx) = FormValue::mixed(
                k.on_x.iter().zip(&kbar.on_x).map(|(a, b)| *a + *b).collect(),
                k.on_jx.iter().zip(&kbar.on_jx).map(|(a, b)| *a + *b).collect(),
            ).sub(&omega);
            for q in dx.iter().chain(&djx) {
                prop_assert!(q.norm() <= 1e-12);
            }
            prop_assert!(k.type_residual(&j) <= 1e-12);
            prop_assert!(kbar.type_residual(&j) <= 1e-12);
        }

        #[test]
        fn decomposition_is_idempotent(omega in arb_form(2)) {
            let j = ComplexStructureJ::new(crate::QuatMatrix::diagonal(
                &[Quaternion::I, Quaternion::I],
            )).unwrap();
            let (k, _) = type_decompose(&omega, &j);
            let (kk, kbar2) = type_decompose(&k, &j);
            let (dx, djx) = kk.sub(&k);
            for q in dx.iter().chain(&djx) {
                prop_assert!(q.norm() <= 1e-12);
            }
            prop_assert!(kbar2.max_norm() <= 1e-12);
        }
    }
}
