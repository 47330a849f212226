use num_complex::Complex64;

/// Compressed sparse row complex matrix.
#[derive(Clone, Debug)]
pub struct CsrMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub values: Vec<Complex64>,
}

impl CsrMatrix {
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, Complex64)],
    ) -> Self {
        let mut counts = vec![0usize; nrows + 1];
        for &(r, _, _) in triplets {
            counts[r + 1] += 1;
        }
        for i in 0..nrows {
            counts[i + 1] += counts[i];
        }
        let mut indices = vec![0usize; triplets.len()];
        let mut values = vec![Complex64::default(); triplets.len()];
        let mut cursor = counts.clone();
        for &(r, c, v) in triplets {
            let at = cursor[r];
            indices[at] = c;
            values[at] = v;
            cursor[r] += 1;
        }
        // combine duplicates within each row
        let mut out = Self {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::with_capacity(triplets.len()),
            values: Vec::with_capacity(triplets.len()),
        };
        for r in 0..nrows {
            let lo = counts[r];
            let hi = counts[r + 1];
            let mut row: Vec<(usize, Complex64)> =
                (lo..hi).map(|i| (indices[i], values[i])).collect();
            row.sort_by_key(|&(c, _)| c);
            let mut iter = row.into_iter().peekable();
            while let Some((c, mut v)) = iter.next() {
                while let Some(&(c2, v2)) = iter.peek() {
                    if c2 == c {
                        v += v2;
                        iter.next();
                    } else {
                        break;
                    }
                }
                if v.norm() > 0.0 {
                    out.indices.push(c);
                    out.values.push(v);
                }
            }
            out.indptr[r + 1] = out.indices.len();
        }
        out
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        for r in 0..self.nrows {
            let mut acc = Complex64::default();
            for i in self.indptr[r]..self.indptr[r + 1] {
                acc += self.values[i] * x[self.indices[i]];
            }
            y[r] = acc;
        }
    }

    pub fn hermiticity_residual(&self) -> f64 {
        use std::collections::HashMap;
        let mut map: HashMap<(usize, usize), Complex64> = HashMap::with_capacity(self.nnz());
        for r in 0..self.nrows {
            for i in self.indptr[r]..self.indptr[r + 1] {
                map.insert((r, self.indices[i]), self.values[i]);
            }
        }
        let mut worst = 0.0f64;
        for (&(r, c), &v) in map.iter() {
            let vt = map.get(&(c, r)).copied().unwrap_or_default();
            worst = worst.max((v - vt.conj()).norm());
        }
        worst
    }
}
