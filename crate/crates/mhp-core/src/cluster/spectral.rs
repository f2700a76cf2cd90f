//! Normalized spectral embedding of location vectors.
//!
//! Affinity A_ij = exp(−‖v_i − v_j‖² / 2σ²) with a zero diagonal,
//! symmetric normalization L = D^(−1/2) A D^(−1/2), top-k eigenvectors by
//! eigenvalue, a deterministic sign convention, and row normalization.

use nalgebra::{DMatrix, SymmetricEigen};

/// Euclidean distance between two location vectors.
pub(crate) fn distance(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Median of the strictly positive pairwise distances; 0.0 when every pair
/// coincides. For an even count the two middle values are averaged.
pub(crate) fn median_positive_distance(vectors: &[[f64; 4]]) -> f64 {
    let mut distances = Vec::new();
    for i in 0..vectors.len() {
        for j in (i + 1)..vectors.len() {
            let d = distance(&vectors[i], &vectors[j]);
            if d > 0.0 {
                distances.push(d);
            }
        }
    }
    if distances.is_empty() {
        return 0.0;
    }
    distances.sort_by(f64::total_cmp);
    let n = distances.len();
    if n % 2 == 1 {
        distances[n / 2]
    } else {
        0.5 * (distances[n / 2 - 1] + distances[n / 2])
    }
}

/// Row-normalized top-k spectral embedding of the sampled vectors.
pub(crate) fn spectral_embedding(vectors: &[[f64; 4]], k: usize, sigma: f64) -> Vec<Vec<f64>> {
    let m = vectors.len();
    debug_assert!(k >= 1 && k <= m);
    debug_assert!(sigma > 0.0);

    let denom = 2.0 * sigma * sigma;
    let mut affinity = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        for j in (i + 1)..m {
            let d = distance(&vectors[i], &vectors[j]);
            let a = (-d * d / denom).exp();
            affinity[(i, j)] = a;
            affinity[(j, i)] = a;
        }
    }

    let mut scale = vec![0.0; m];
    for i in 0..m {
        let degree: f64 = affinity.row(i).iter().sum();
        scale[i] = if degree > 0.0 { degree.powf(-0.5) } else { 0.0 };
    }
    let mut laplacian = affinity;
    for i in 0..m {
        for j in 0..m {
            laplacian[(i, j)] *= scale[i] * scale[j];
        }
    }

    let eigen = SymmetricEigen::new(laplacian);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]).then(a.cmp(&b)));

    let mut embedding = vec![vec![0.0; k]; m];
    for (col, &eig_idx) in order.iter().take(k).enumerate() {
        let mut column: Vec<f64> = (0..m).map(|r| eigen.eigenvectors[(r, eig_idx)]).collect();
        fix_sign(&mut column);
        for (row, &v) in column.iter().enumerate() {
            embedding[row][col] = v;
        }
    }

    for row in &mut embedding {
        let norm: f64 = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for v in row.iter_mut() {
                *v /= norm;
            }
        }
    }
    embedding
}

/// Makes the largest-magnitude component positive; the first such component
/// wins ties. Removes the solver's sign ambiguity.
fn fix_sign(column: &mut [f64]) {
    let mut arg = 0usize;
    let mut best = -1.0;
    for (i, &v) in column.iter().enumerate() {
        if v.abs() > best {
            best = v.abs();
            arg = i;
        }
    }
    if column[arg] < 0.0 {
        for v in column.iter_mut() {
            *v = -*v;
        }
    }
}
