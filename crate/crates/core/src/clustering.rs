//! Spectral clustering of the affinity matrix into k = ⌈N·p⌉ groups.
//!
//! The normalized variant: form L_sym = I − D^{−1/2} A D^{−1/2}, embed each
//! sentence as its row in the matrix of the k smallest eigenvectors,
//! row-normalize, and run seeded k-means in that space. The affinity
//! diagonal (self-loop of 1) is kept when forming degrees; it shifts every
//! degree uniformly and leaves the eigenvector ordering of the connected
//! structure unchanged.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::kmeans;
use crate::similarity::AffinityMatrix;

/// Knobs for the clustering stage. `proportion` is the summary-to-document
/// ratio p in (0,1); `seed` drives the k-means++ initialization.
#[derive(Debug, Clone, Copy)]
pub struct ClusteringParams {
    pub proportion: f64,
    pub seed: u64,
    pub kmeans_max_iter: usize,
    pub kmeans_restarts: usize,
}

impl Default for ClusteringParams {
    fn default() -> Self {
        Self {
            proportion: 0.2,
            seed: 0,
            kmeans_max_iter: 300,
            kmeans_restarts: 10,
        }
    }
}

impl ClusteringParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.proportion > 0.0 && self.proportion < 1.0) {
            return Err(Error::InvalidParam {
                name: "proportion",
                msg: format!("must lie in (0,1), got {}", self.proportion),
            });
        }
        if self.kmeans_max_iter == 0 || self.kmeans_restarts == 0 {
            return Err(Error::InvalidParam {
                name: "kmeans",
                msg: "max_iter and restarts must be positive".into(),
            });
        }
        Ok(())
    }
}

/// Partition of the eligible sentences into k non-empty clusters.
#[derive(Debug, Clone)]
pub struct ClusterAssignment {
    /// Cluster id in `[0, k)` per eligible-sentence row.
    pub labels: Vec<usize>,
    pub k: usize,
    /// Row → original sentence index, inherited from the affinity matrix.
    pub index_map: Vec<usize>,
}

impl ClusterAssignment {
    /// Original sentence indexes grouped per cluster id.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.k];
        for (row, &label) in self.labels.iter().enumerate() {
            groups[label].push(self.index_map[row]);
        }
        groups
    }
}

/// k = ⌈N·p⌉, clamped into [1, N].
pub fn choose_k(eligible_count: usize, proportion: f64) -> usize {
    assert!(eligible_count >= 1);
    assert!(proportion > 0.0 && proportion < 1.0);
    let k = (eligible_count as f64 * proportion).ceil() as usize;
    k.clamp(1, eligible_count)
}

/// Clusters the affinity graph into exactly `k` non-empty groups.
/// Deterministic for a fixed `(affinity, k, seed)` triple.
pub fn spectral_cluster(
    affinity: &AffinityMatrix,
    k: usize,
    params: &ClusteringParams,
) -> Result<ClusterAssignment> {
    let n = affinity.order();
    assert!(k >= 1 && k <= n, "k must lie in [1, order]");
    params.validate()?;

    let embedding = spectral_embedding(affinity, k)?;
    let outcome = kmeans::kmeans(
        &embedding,
        k,
        params.seed,
        params.kmeans_max_iter,
        params.kmeans_restarts,
    );

    Ok(ClusterAssignment {
        labels: outcome.labels,
        k,
        index_map: affinity.index_map().to_vec(),
    })
}

/// Rows of the k smallest eigenvectors of L_sym, row-normalized to unit
/// length (zero rows stay zero).
fn spectral_embedding(affinity: &AffinityMatrix, k: usize) -> Result<Vec<Vec<f64>>> {
    let n = affinity.order();
    let laplacian = normalized_laplacian(affinity);

    let eigen = nalgebra::SymmetricEigen::try_new(laplacian, f64::EPSILON, 50_000)
        .ok_or_else(|| Error::Eigen(format!("order {n} matrix")))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[a].total_cmp(&eigen.eigenvalues[b]));

    let mut rows = vec![vec![0.0; k]; n];
    for (col, &eig_idx) in order.iter().take(k).enumerate() {
        let v = eigen.eigenvectors.column(eig_idx);
        for i in 0..n {
            rows[i][col] = v[i];
        }
    }
    for row in &mut rows {
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            row.iter_mut().for_each(|x| *x /= norm);
        }
    }
    Ok(rows)
}

/// L_sym = I − D^{−1/2} A D^{−1/2}. A degree that is not positive (cannot
/// happen with the unit diagonal, kept as a guard) is clamped to 1 so the
/// scaling stays finite.
pub(crate) fn normalized_laplacian(affinity: &AffinityMatrix) -> DMatrix<f64> {
    let n = affinity.order();
    let degrees = DVector::from_fn(n, |i, _| {
        let d: f64 = (0..n).map(|j| affinity.get(i, j)).sum();
        if d > 0.0 {
            d
        } else {
            1.0
        }
    });
    let inv_sqrt = degrees.map(|d| 1.0 / d.sqrt());

    DMatrix::from_fn(n, n, |i, j| {
        let scaled = inv_sqrt[i] * affinity.get(i, j) * inv_sqrt[j];
        if i == j {
            1.0 - scaled
        } else {
            -scaled
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn affinity_from_rows(rows: &[Vec<f64>]) -> AffinityMatrix {
        AffinityMatrix::from_rows(rows).unwrap()
    }

    /// Canonical partition form: clusters as sorted lists, sorted by first
    /// element, so assignments compare as partitions.
    fn partition(labels: &[usize], k: usize) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); k];
        for (i, &l) in labels.iter().enumerate() {
            groups[l].push(i);
        }
        groups.retain(|g| !g.is_empty());
        groups.sort_by_key(|g| g[0]);
        groups
    }

    fn block_affinity(sizes: &[usize], intra: f64, cross: f64) -> AffinityMatrix {
        let n: usize = sizes.iter().sum();
        let block_of = |i: usize| {
            let mut acc = 0;
            for (b, &s) in sizes.iter().enumerate() {
                acc += s;
                if i < acc {
                    return b;
                }
            }
            unreachable!()
        };
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            1.0
                        } else if block_of(i) == block_of(j) {
                            intra
                        } else {
                            cross
                        }
                    })
                    .collect()
            })
            .collect();
        affinity_from_rows(&rows)
    }

    #[test]
    fn choose_k_table() {
        assert_eq!(choose_k(10, 0.2), 2);
        assert_eq!(choose_k(11, 0.2), 3);
        assert_eq!(choose_k(1, 0.2), 1);
    }

    #[test]
    fn choose_k_never_exceeds_n() {
        assert_eq!(choose_k(2, 0.99), 2);
        assert_eq!(choose_k(3, 0.67), 3);
    }

    #[test]
    fn disconnected_blocks_are_recovered() {
        let a = block_affinity(&[2, 2], 1.0, 0.0);
        let got = spectral_cluster(&a, 2, &ClusteringParams::default()).unwrap();
        assert_eq!(
            partition(&got.labels, 2),
            vec![vec![0, 1], vec![2, 3]]
        );
    }

    #[test]
    fn weak_cross_links_are_recovered_and_match_best_ncut() {
        let a = block_affinity(&[3, 3], 0.9, 0.05);
        let got = spectral_cluster(&a, 2, &ClusteringParams::default()).unwrap();
        let got_partition = partition(&got.labels, 2);
        assert_eq!(got_partition, best_two_way_ncut(&a));
        assert_eq!(got_partition, vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    /// Exhaustive minimum normalized cut over all 2-partitions.
    fn best_two_way_ncut(a: &AffinityMatrix) -> Vec<Vec<usize>> {
        let n = a.order();
        let degree = |i: usize| (0..n).map(|j| a.get(i, j)).sum::<f64>();
        let mut best = (f64::INFINITY, Vec::new());
        for mask in 1..(1u32 << n) - 1 {
            let side: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
            let cut: f64 = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| side[i] && !side[j])
                .map(|(i, j)| a.get(i, j))
                .sum();
            let vol_a: f64 = (0..n).filter(|&i| side[i]).map(degree).sum();
            let vol_b: f64 = (0..n).filter(|&i| !side[i]).map(degree).sum();
            let ncut = cut / vol_a + cut / vol_b;
            if ncut < best.0 {
                let labels: Vec<usize> = side.iter().map(|&s| usize::from(s)).collect();
                best = (ncut, partition(&labels, 2));
            }
        }
        best.1
    }

    #[test]
    fn k_equals_order_gives_singletons() {
        let a = block_affinity(&[4], 0.5, 0.0);
        let got = spectral_cluster(&a, 4, &ClusteringParams::default()).unwrap();
        let p = partition(&got.labels, 4);
        assert_eq!(p.len(), 4);
        assert!(p.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = block_affinity(&[4, 3, 3], 0.8, 0.1);
        let params = ClusteringParams {
            seed: 99,
            ..Default::default()
        };
        let x = spectral_cluster(&a, 3, &params).unwrap();
        let y = spectral_cluster(&a, 3, &params).unwrap();
        assert_eq!(x.labels, y.labels);
    }

    #[test]
    fn degenerate_identity_affinity_still_partitions() {
        let a = block_affinity(&[5], 0.0, 0.0);
        let got = spectral_cluster(&a, 3, &ClusteringParams::default()).unwrap();
        let p = partition(&got.labels, 3);
        assert_eq!(p.len(), 3);
        assert_eq!(p.iter().map(Vec::len).sum::<usize>(), 5);
        let again = spectral_cluster(&a, 3, &ClusteringParams::default()).unwrap();
        assert_eq!(got.labels, again.labels);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn eigenpairs_are_sane_on_random_affinities() {
        use rand::Rng as _;
        use rand::SeedableRng as _;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for n in [2usize, 5, 9, 16] {
            let mut rows = vec![vec![0.0; n]; n];
            for i in 0..n {
                rows[i][i] = 1.0;
                for j in (i + 1)..n {
                    let v: f64 = rng.random::<f64>();
                    rows[i][j] = v;
                    rows[j][i] = v;
                }
            }
            let a = affinity_from_rows(&rows);
            let l = normalized_laplacian(&a);
            let eigen = nalgebra::SymmetricEigen::try_new(l.clone(), f64::EPSILON, 50_000).unwrap();
            for idx in 0..n {
                let lambda = eigen.eigenvalues[idx];
                assert!(
                    (-1e-9..=2.0 + 1e-9).contains(&lambda),
                    "eigenvalue {lambda} out of [0,2]"
                );
                let v = eigen.eigenvectors.column(idx);
                let residual = (&l * v - v * lambda).norm();
                assert!(residual <= 1e-8 * v.norm(), "residual {residual}");
            }
        }
    }

    #[test]
    fn cluster_assignment_groups_by_original_index() {
        let a = block_affinity(&[2, 2], 1.0, 0.0);
        let got = spectral_cluster(&a, 2, &ClusteringParams::default()).unwrap();
        let clusters = got.clusters();
        assert_eq!(clusters.len(), 2);
        assert_eq!(clusters.iter().map(Vec::len).sum::<usize>(), 4);
    }
}
