use crate::solver::{dense_hermitian_eigenvalues, shift_invert_eigenvalues};
use crate::{DiracError, DiracMatrix};

/// An eigenvalue cluster with its quaternionic multiplicity.
#[derive(Clone, Copy, Debug)]
pub struct Cluster {
    pub lambda: f64,
    pub mult_quat: usize,
    pub complex_count: usize,
    pub gap: f64,
}

/// Clustered spectrum, sorted by eigenvalue.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub clusters: Vec<Cluster>,
}

impl Spectrum {
    /// Clusters sorted by |lambda| (ties: negative first).
    pub fn by_magnitude(&self) -> Vec<Cluster> {
        let mut v = self.clusters.clone();
        v.sort_by(|a, b| {
            a.lambda
                .abs()
                .partial_cmp(&b.lambda.abs())
                .unwrap()
                .then(a.lambda.partial_cmp(&b.lambda).unwrap())
        });
        v
    }

    /// Smallest-|lambda| clusters with strictly positive lambda.
    pub fn positive(&self) -> Vec<Cluster> {
        self.clusters
            .iter()
            .filter(|c| c.lambda > 0.0)
            .cloned()
            .collect()
    }
}

/// Threshold below which the dense eigensolver is used directly.
const DENSE_LIMIT: usize = 2600;

/// Compute the k smallest-magnitude complex eigenvalues of the Hermitian
/// operator, merge them into clusters of relative width `cluster_tol`, and
/// count quaternionic multiplicities (complex count / 2; an odd count is a
/// clustering error, never rounded).
pub fn compute_spectrum(
    d: &DiracMatrix,
    k: usize,
    cluster_tol: f64,
) -> Result<Spectrum, DiracError> {
    if cluster_tol <= 0.0 {
        return Err(DiracError::BadTolerance(cluster_tol));
    }
    let dim = d.dimension();
    if k > dim {
        return Err(DiracError::TooManyRequested { k, dim });
    }
    if k == 0 {
        return Ok(Spectrum { clusters: vec![] });
    }
    let mut vals: Vec<f64> = if dim <= DENSE_LIMIT {
        dense_hermitian_eigenvalues(&d.matrix)?
    } else if let Some(groups) = split_components(&d.matrix, DENSE_LIMIT) {
        // block-diagonal operators (the round-sphere assembly) are solved
        // exactly per connected component
        let mut all = Vec::with_capacity(dim);
        for group in groups {
            let sub = extract_submatrix(&d.matrix, &group);
            all.extend(dense_hermitian_eigenvalues(&sub)?);
        }
        all
    } else {
        // small off-spectrum shift so the factorization never lands on an
        // exact eigenvalue (the spectra here are symmetric around 0)
        shift_invert_eigenvalues(&d.matrix, k + 8, 0.003_172_9)?
    };
    vals.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap());
    // keep k values, then complete the boundary cluster so multiplicities
    // are never sliced mid-cluster
    let mut kept: Vec<f64> = vals.iter().take(k).cloned().collect();
    if let Some(&edge) = kept.last() {
        for &v in vals.iter().skip(k) {
            if (v.abs() - edge.abs()).abs() <= cluster_tol * edge.abs().max(1.0) {
                kept.push(v);
            } else {
                break;
            }
        }
    }
    kept.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cluster(&kept, cluster_tol).map(|clusters| Spectrum { clusters })
}

/// Connected components of the sparsity pattern, if all are small enough
/// for the dense solver.
fn split_components(m: &crate::CsrMatrix, limit: usize) -> Option<Vec<Vec<usize>>> {
    let n = m.nrows;
    let mut comp = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut group = Vec::new();
        stack.push(start);
        comp[start] = id;
        while let Some(r) = stack.pop() {
            group.push(r);
            for i in m.indptr[r]..m.indptr[r + 1] {
                let c = m.indices[i];
                if comp[c] == usize::MAX {
                    comp[c] = id;
                    stack.push(c);
                }
            }
        }
        if group.len() > limit {
            return None;
        }
        group.sort_unstable();
        groups.push(group);
    }
    if groups.len() <= 1 {
        None
    } else {
        Some(groups)
    }
}

fn extract_submatrix(m: &crate::CsrMatrix, rows: &[usize]) -> crate::CsrMatrix {
    let mut local = std::collections::HashMap::with_capacity(rows.len());
    for (i, &r) in rows.iter().enumerate() {
        local.insert(r, i);
    }
    let mut trips = Vec::new();
    for (i, &r) in rows.iter().enumerate() {
        for idx in m.indptr[r]..m.indptr[r + 1] {
            let c = m.indices[idx];
            trips.push((i, local[&c], m.values[idx]));
        }
    }
    crate::CsrMatrix::from_triplets(rows.len(), rows.len(), &trips)
}

fn cluster(sorted: &[f64], tol: f64) -> Result<Vec<Cluster>, DiracError> {
    let mut out: Vec<Cluster> = Vec::new();
    let mut i = 0usize;
    while i < sorted.len() {
        let mut j = i + 1;
        let mut sum = sorted[i];
        while j < sorted.len() {
            let mean = sum / (j - i) as f64;
            if (sorted[j] - mean).abs() <= tol * mean.abs().max(1.0) {
                sum += sorted[j];
                j += 1;
            } else {
                break;
            }
        }
        let count = j - i;
        let lambda = sum / count as f64;
        if count % 2 != 0 {
            return Err(DiracError::OddCluster { lambda, count });
        }
        out.push(Cluster {
            lambda,
            mult_quat: count / 2,
            complex_count: count,
            gap: tol,
        });
        i = j;
    }
    Ok(out)
}
