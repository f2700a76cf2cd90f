//! Seeded k-means with k-means++ initialization.
//!
//! Fully deterministic given the RNG state: weighted seeding walks a
//! cumulative sum, nearest-centroid ties go to the lowest centroid index,
//! and empty clusters are repaired by reseeding from the point farthest from
//! its assigned centroid.

use rand::Rng;
use rand_chacha::ChaCha20Rng;

#[derive(Debug, Clone)]
pub struct KMeansOutcome {
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub iterations: usize,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest_centroid(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for (i, c) in centroids.iter().enumerate() {
        let d = squared_distance(point, c);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    (best, best_d)
}

fn seed_centroids(points: &[Vec<f64>], k: usize, rng: &mut ChaCha20Rng) -> Vec<Vec<f64>> {
    let mut centroids = Vec::with_capacity(k);
    let first = rng.random_range(0..points.len());
    centroids.push(points[first].clone());
    let mut dist: Vec<f64> = points
        .iter()
        .map(|p| squared_distance(p, &centroids[0]))
        .collect();
    while centroids.len() < k {
        let total: f64 = dist.iter().sum();
        let next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut cum = 0.0;
            let mut chosen = points.len() - 1;
            for (i, &d) in dist.iter().enumerate() {
                cum += d;
                if cum > target {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            // Every point coincides with a centroid; any pick is as good.
            rng.random_range(0..points.len())
        };
        centroids.push(points[next].clone());
        for (i, p) in points.iter().enumerate() {
            let d = squared_distance(p, centroids.last().unwrap());
            if d < dist[i] {
                dist[i] = d;
            }
        }
    }
    centroids
}

/// Lloyd iterations until the largest centroid displacement drops to `tol`
/// or `max_iter` is hit. Requires `1 <= k <= points.len()`.
pub fn kmeans(
    points: &[Vec<f64>],
    k: usize,
    rng: &mut ChaCha20Rng,
    max_iter: usize,
    tol: f64,
) -> KMeansOutcome {
    assert!(k >= 1 && k <= points.len());
    let dim = points[0].len();
    let mut centroids = seed_centroids(points, k, rng);
    let mut assignments = vec![0usize; points.len()];
    let mut iterations = 0usize;

    for _ in 0..max_iter {
        iterations += 1;
        for (i, p) in points.iter().enumerate() {
            assignments[i] = nearest_centroid(p, &centroids).0;
        }

        // Reseed empty clusters from the globally farthest point.
        let mut sizes = vec![0usize; k];
        for &a in &assignments {
            sizes[a] += 1;
        }
        for cluster in 0..k {
            if sizes[cluster] > 0 {
                continue;
            }
            let mut far_point = None;
            let mut far_d = -1.0;
            for (i, p) in points.iter().enumerate() {
                if sizes[assignments[i]] <= 1 {
                    continue;
                }
                let d = squared_distance(p, &centroids[assignments[i]]);
                if d > far_d {
                    far_d = d;
                    far_point = Some(i);
                }
            }
            let Some(i) = far_point else { continue };
            if far_d <= 0.0 {
                // All points sit on their centroids; the cluster stays empty.
                continue;
            }
            sizes[assignments[i]] -= 1;
            assignments[i] = cluster;
            sizes[cluster] = 1;
            centroids[cluster] = points[i].clone();
        }

        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &a) in points.iter().zip(&assignments) {
            counts[a] += 1;
            for (s, v) in sums[a].iter_mut().zip(p) {
                *s += v;
            }
        }
        let mut shift: f64 = 0.0;
        for cluster in 0..k {
            if counts[cluster] == 0 {
                continue;
            }
            let inv = 1.0 / counts[cluster] as f64;
            let new: Vec<f64> = sums[cluster].iter().map(|s| s * inv).collect();
            shift = shift.max(squared_distance(&new, &centroids[cluster]).sqrt());
            centroids[cluster] = new;
        }
        if shift <= tol {
            break;
        }
    }

    // Final assignment against the converged centroids.
    for (i, p) in points.iter().enumerate() {
        assignments[i] = nearest_centroid(p, &centroids).0;
    }

    KMeansOutcome {
        assignments,
        centroids,
        iterations,
    }
}
