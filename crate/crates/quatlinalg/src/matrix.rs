use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::Quaternion;

/// Square quaternion matrix acting on column vectors from the left
/// (the vectors themselves are a right H-module).
#[derive(Debug, Default)]
pub struct QuatMatrix {
    n: usize,
    entries: Vec<Quaternion>,
    complex_rep: OnceLock<Vec<Complex64>>,
}

impl Clone for QuatMatrix {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            entries: self.entries.clone(),
            complex_rep: OnceLock::new(),
        }
    }
}

impl PartialEq for QuatMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.entries == other.entries
    }
}

impl QuatMatrix {
    pub fn from_entries(n: usize, entries: Vec<Quaternion>) -> Self {
        assert_eq!(entries.len(), n * n);
        Self {
            n,
            entries,
            complex_rep: OnceLock::new(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_entries(n, vec![Quaternion::zero(); n * n])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Quaternion::one());
        }
        m
    }

    pub fn diagonal(diag: &[Quaternion]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, q) in diag.iter().enumerate() {
            m.set(i, i, *q);
        }
        m
    }

    /// 1x1 matrix, i.e. left multiplication by a scalar.
    pub fn scalar(q: Quaternion) -> Self {
        Self::from_entries(1, vec![q])
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, q: Quaternion) {
        self.entries[i * self.n + j] = q;
        self.complex_rep = OnceLock::new();
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Matrix-vector product; the vector is a column of quaternions.
    pub fn apply(&self, v: &[Quaternion]) -> Vec<Quaternion> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Real trace form <B> = 1/4 tr_R(B) = sum of real parts of the diagonal.
    pub fn real_trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).w).sum()
    }

    /// The 2n x 2n complex representation (row-major), cached after the
    /// first call. Unit quaternion scalars map to SU(2) blocks.
    pub fn complex_rep(&self) -> &[Complex64] {
        self.complex_rep.get_or_init(|| {
            let n = self.n;
            let m = 2 * n;
            let mut rep = vec![Complex64::new(0.0, 0.0); m * m];
            for i in 0..n {
                for j in 0..n {
                    let b = self.get(i, j).rep();
                    rep[(2 * i) * m + 2 * j] = b[0];
                    rep[(2 * i) * m + 2 * j + 1] = b[1];
                    rep[(2 * i + 1) * m + 2 * j] = b[2];
                    rep[(2 * i + 1) * m + 2 * j + 1] = b[3];
                }
            }
            rep
        })
    }

    /// Max-norm residual of the J-symmetry rep = J^-1 conj(rep) J, where J
    /// is the block form of right multiplication by j. A complex matrix is
    /// the representation of a quaternionic one exactly when this vanishes.
    pub fn j_symmetry_residual(&self) -> f64 {
        let n = self.n;
        let m = 2 * n;
        let rep = self.complex_rep();
        let mut worst = 0.0f64;
        // (J^-1 conj(R) J)[2i+a][2j+b] with J = antidiag(-1, 1) per 2x2 block
        for i in 0..n {
            for j in 0..n {
                let r = |a: usize, b: usize| rep[(2 * i + a) * m + 2 * j + b];
                let pairs = [
                    (r(0, 0), r(1, 1).conj()),
                    (r(0, 1), -r(1, 0).conj()),
                    (r(1, 0), -r(0, 1).conj()),
                    (r(1, 1), r(0, 0).conj()),
                ];
                for (a, b) in pairs {
                    worst = worst.max((a - b).norm());
                }
            }
        }
        worst
    }

    pub fn max_norm(&self) -> f64 {
        self.entries.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }
}

impl Add for &QuatMatrix {
    type Output = QuatMatrix;
    fn add(self, r: &QuatMatrix) -> QuatMatrix {
        assert_eq!(self.n, r.n);
        QuatMatrix::from_entries(
            self.n,
            self.entries
                .iter()
                .zip(&r.entries)
                .map(|(a, b)| *a + *b)
                .collect(),
        )
    }
}

impl Sub for &QuatMatrix {
    type Output = QuatMatrix;
    fn sub(self, r: &QuatMatrix) -> QuatMatrix {
        assert_eq!(self.n, r.n);
        QuatMatrix::from_entries(
            self.n,
            self.entries
                .iter()
                .zip(&r.entries)
                .map(|(a, b)| *a - *b)
                .collect(),
        )
    }
}

impl Mul for &QuatMatrix {
    type Output = QuatMatrix;
    fn mul(self, r: &QuatMatrix) -> QuatMatrix {
        assert_eq!(self.n, r.n);
        let n = self.n;
        let mut out = QuatMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Quaternion::zero();
                for k in 0..n {
                    acc += self.get(i, k) * r.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }
}

/// A complex structure on H^n: a quaternion matrix with J^2 = -Id.
#[derive(Clone, Debug)]
pub struct ComplexStructureJ {
    matrix: QuatMatrix,
}

impl ComplexStructureJ {
    pub fn new(matrix: QuatMatrix) -> Result<Self, f64> {
        let sq = &matrix * &matrix;
        let res = (&sq + &QuatMatrix::identity(matrix.rank())).max_norm();
        if res <= crate::ALGEBRA_TOL {
            Ok(Self { matrix })
        } else {
            Err(res)
        }
    }

    /// Left multiplication by a unit imaginary quaternion on H.
    pub fn scalar(n: Quaternion) -> Self {
        Self::new(QuatMatrix::scalar(n)).expect("not a unit imaginary quaternion")
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn matrix(&self) -> &QuatMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Quaternion]) -> Vec<Quaternion> {
        self.matrix.apply(v)
    }
}
