//! Seeded k-means++ for the spectral embedding rows.
//!
//! Everything here is deterministic for a fixed seed: initialization draws
//! from a per-restart ChaCha stream, assignment ties go to the lowest
//! centroid index, and restarts are compared by strict improvement in the
//! within-cluster sum of squares.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub(crate) struct KMeansOutcome {
    pub labels: Vec<usize>,
    pub wcss: f64,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Runs `restarts` independent k-means fits and keeps the lowest-WCSS one.
pub(crate) fn kmeans(
    points: &[Vec<f64>],
    k: usize,
    seed: u64,
    max_iter: usize,
    restarts: usize,
) -> KMeansOutcome {
    assert!(k >= 1 && k <= points.len());
    let mut best: Option<KMeansOutcome> = None;
    for restart in 0..restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ (restart as u64)));
        let outcome = lloyd(points, k, &mut rng, max_iter);
        let better = match &best {
            None => true,
            Some(b) => outcome.wcss < b.wcss,
        };
        if better {
            best = Some(outcome);
        }
    }
    best.unwrap()
}

fn lloyd(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng, max_iter: usize) -> KMeansOutcome {
    let mut centroids = plus_plus_init(points, k, rng);
    let mut labels = vec![usize::MAX; points.len()];

    for _ in 0..max_iter {
        let new_labels: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
        let converged = new_labels == labels;
        labels = new_labels;
        repair_empty_clusters(points, &mut labels, k);
        update_centroids(points, &labels, &mut centroids);
        if converged {
            break;
        }
    }

    let wcss = points
        .iter()
        .zip(&labels)
        .map(|(p, &l)| squared_distance(p, &centroids[l]))
        .sum();
    KMeansOutcome { labels, wcss }
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = squared_distance(point, &centroids[0]);
    for (i, c) in centroids.iter().enumerate().skip(1) {
        let d = squared_distance(point, c);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// k-means++: first center uniform, later centers drawn proportionally to
/// the squared distance from the nearest chosen center. When every residual
/// distance is zero (duplicate points) the draw falls back to uniform.
fn plus_plus_init(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    centroids.push(points[rng.random_range(0..points.len())].clone());

    let mut dist2: Vec<f64> = points
        .iter()
        .map(|p| squared_distance(p, &centroids[0]))
        .collect();

    while centroids.len() < k {
        let total: f64 = dist2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = dist2.len() - 1;
            for (i, &d) in dist2.iter().enumerate() {
                if target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            chosen
        } else {
            rng.random_range(0..points.len())
        };
        centroids.push(points[next].clone());
        for (d, p) in dist2.iter_mut().zip(points) {
            *d = d.min(squared_distance(p, centroids.last().unwrap()));
        }
    }
    centroids
}

fn update_centroids(points: &[Vec<f64>], labels: &[usize], centroids: &mut [Vec<f64>]) {
    let mut counts = vec![0usize; centroids.len()];
    for c in centroids.iter_mut() {
        c.iter_mut().for_each(|v| *v = 0.0);
    }
    for (p, &l) in points.iter().zip(labels) {
        counts[l] += 1;
        for (c, v) in centroids[l].iter_mut().zip(p) {
            *c += v;
        }
    }
    for (c, &n) in centroids.iter_mut().zip(&counts) {
        if n > 0 {
            c.iter_mut().for_each(|v| *v /= n as f64);
        }
    }
}

/// Every cluster must end up non-empty: each empty cluster takes the member
/// of the largest cluster farthest from that cluster's mean. Ties resolve to
/// the lowest index.
fn repair_empty_clusters(points: &[Vec<f64>], labels: &mut [usize], k: usize) {
    loop {
        let mut sizes = vec![0usize; k];
        for &l in labels.iter() {
            sizes[l] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let largest = sizes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
            .unwrap();

        let dim = points[0].len();
        let mut mean = vec![0.0; dim];
        for (p, &l) in points.iter().zip(labels.iter()) {
            if l == largest {
                for (m, v) in mean.iter_mut().zip(p) {
                    *m += v;
                }
            }
        }
        let n = sizes[largest] as f64;
        mean.iter_mut().for_each(|m| *m /= n);

        let mut farthest = None;
        let mut farthest_d = -1.0;
        for (i, (p, &l)) in points.iter().zip(labels.iter()).enumerate() {
            if l == largest {
                let d = squared_distance(p, &mean);
                if d > farthest_d {
                    farthest_d = d;
                    farthest = Some(i);
                }
            }
        }
        labels[farthest.expect("largest cluster is non-empty")] = empty;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blob(center: (f64, f64), n: usize, spread: f64) -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| vec![center.0 + spread * i as f64, center.1 - spread * i as f64])
            .collect()
    }

    #[test]
    fn separates_two_blobs() {
        let mut points = blob((0.0, 0.0), 5, 0.01);
        points.extend(blob((100.0, 100.0), 5, 0.01));
        let out = kmeans(&points, 2, 7, 300, 10);
        assert_eq!(out.labels[..5].iter().collect::<std::collections::HashSet<_>>().len(), 1);
        assert_eq!(out.labels[5..].iter().collect::<std::collections::HashSet<_>>().len(), 1);
        assert_ne!(out.labels[0], out.labels[5]);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let mut points = blob((0.0, 0.0), 6, 0.3);
        points.extend(blob((5.0, 1.0), 6, 0.3));
        let a = kmeans(&points, 3, 42, 300, 10);
        let b = kmeans(&points, 3, 42, 300, 10);
        assert_eq!(a.labels, b.labels);
        assert_eq!(a.wcss.to_bits(), b.wcss.to_bits());
    }

    #[test]
    fn duplicate_points_still_fill_k_clusters() {
        let points = vec![vec![1.0, 1.0]; 4];
        let out = kmeans(&points, 3, 0, 300, 10);
        let mut sizes = vec![0usize; 3];
        for &l in &out.labels {
            sizes[l] += 1;
        }
        assert!(sizes.iter().all(|&s| s > 0), "sizes {sizes:?}");
    }

    #[test]
    fn k_equals_n_gives_singletons() {
        let points = blob((0.0, 0.0), 5, 1.0);
        let out = kmeans(&points, 5, 1, 300, 10);
        let unique: std::collections::HashSet<_> = out.labels.iter().collect();
        assert_eq!(unique.len(), 5);
        assert_eq!(out.wcss, 0.0);
    }
}
