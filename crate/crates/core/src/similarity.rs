//! Word-pair Gaussian sentence similarity and the affinity matrix.
//!
//! Two sentences are compared word-to-word: each word vector is paired with
//! its nearest counterpart in the other sentence, and the similarity is the
//! geometric mean of the per-pair Gaussian kernels. The geometric mean
//! collapses to a single exponential, `exp(-Σ Dᵢ² / (2·n·σ²))`, which is how
//! it is evaluated here; the product form exists only in test oracles.
//!
//! The word-averaging kernel (one centroid per sentence) is kept as the
//! comparison baseline. It loses word-level correspondence: sentences whose
//! words pair up tightly can still have distant centroids, and vice versa.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::Document;

/// Gaussian standard deviation reported as the fine-tuned default for the
/// word-pair kernel. Distances of order one underflow the kernel at this
/// scale, so callers working with ordinary embeddings usually want
/// [`auto_sigma`] instead; the default is kept for reproducibility.
pub const DEFAULT_SIGMA: f64 = 5e-11;

/// Which sentence-similarity kernel to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    /// Word-pair Gaussian similarity (geometric mean over nearest-word pairs).
    Wgss,
    /// Gaussian kernel over sentence centroid vectors.
    Average,
}

impl std::str::FromStr for Kernel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "wgss" => Ok(Kernel::Wgss),
            "average" => Ok(Kernel::Average),
            other => Err(format!("unknown kernel {other:?} (expected wgss|average)")),
        }
    }
}

impl std::fmt::Display for Kernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kernel::Wgss => "wgss",
            Kernel::Average => "average",
        })
    }
}

/// Kernel selection plus bandwidth.
#[derive(Debug, Clone, Copy)]
pub struct SimilarityParams {
    /// Gaussian standard deviation; must be positive.
    pub sigma: f64,
    pub kernel: Kernel,
}

impl SimilarityParams {
    pub fn new(sigma: f64, kernel: Kernel) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidParam {
                name: "sigma",
                msg: format!("must be a positive finite real, got {sigma}"),
            });
        }
        Ok(Self { sigma, kernel })
    }
}

/// Accumulated nearest-word distances for one sentence pair: the sum of
/// squared distances and the pair count n = |X| + |Y|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceSet {
    pub squared_sum: f64,
    pub count: usize,
}

/// Symmetric matrix of pairwise sentence similarities over the eligible
/// sentences, diagonal fixed at 1.
#[derive(Debug, Clone)]
pub struct AffinityMatrix {
    order: usize,
    values: Vec<f64>,
    index_map: Vec<usize>,
}

impl AffinityMatrix {
    /// Builds a matrix from explicit rows (row index = eligible-sentence
    /// index), enforcing the invariants: square, symmetric, unit diagonal,
    /// every value between 0 and 1.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let order = rows.len();
        let invalid = |msg: String| Error::InvalidParam {
            name: "affinity",
            msg,
        };
        if order == 0 {
            return Err(invalid("matrix is empty".into()));
        }
        let mut values = vec![0.0; order * order];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(invalid(format!("row {i} has length {}", row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(invalid(format!("value at ({i},{j}) is {v}")));
                }
                values[i * order + j] = v;
            }
        }
        for i in 0..order {
            if values[i * order + i] != 1.0 {
                return Err(invalid(format!("diagonal at {i} is not 1")));
            }
            for j in 0..order {
                if values[i * order + j] != values[j * order + i] {
                    return Err(invalid(format!("asymmetry at ({i},{j})")));
                }
            }
        }
        Ok(Self {
            order,
            values,
            index_map: (0..order).collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.order + j]
    }

    /// Row → original sentence index.
    pub fn index_map(&self) -> &[usize] {
        &self.index_map
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Fraction of off-diagonal entries that underflowed to exactly zero.
    pub fn underflow_fraction(&self) -> f64 {
        if self.order < 2 {
            return 0.0;
        }
        let zeros = (0..self.order)
            .flat_map(|i| (0..self.order).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && self.get(i, j) == 0.0)
            .count();
        zeros as f64 / (self.order * (self.order - 1)) as f64
    }
}

fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Most similar word distance: the minimum Euclidean distance from `x` to
/// any vector of the other sentence. The caller guarantees `others` is
/// non-empty (only eligible sentences reach the kernel).
pub fn most_similar_word_distance(x: &[f64], others: &[Vec<f64>]) -> f64 {
    assert!(!others.is_empty(), "eligible sentences have at least one vector");
    others
        .iter()
        .map(|y| euclidean_distance(x, y))
        .fold(f64::INFINITY, f64::min)
}

/// Collects nearest-word distances from both directions. The two directional
/// sums are accumulated separately and added at the end, which makes the
/// result bit-identical under argument swap.
pub fn collect_distances(xs: &[Vec<f64>], ys: &[Vec<f64>]) -> Result<DistanceSet> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::IneligibleSentence);
    }
    let forward: f64 = xs
        .iter()
        .map(|x| {
            let d = most_similar_word_distance(x, ys);
            d * d
        })
        .sum();
    let backward: f64 = ys
        .iter()
        .map(|y| {
            let d = most_similar_word_distance(y, xs);
            d * d
        })
        .sum();
    Ok(DistanceSet {
        squared_sum: forward + backward,
        count: xs.len() + ys.len(),
    })
}

/// Word-pair Gaussian sentence similarity: the geometric mean of the
/// per-pair kernels, evaluated as one exponential so underflow clamps to
/// zero instead of propagating through a product.
pub fn wgss_similarity(xs: &[Vec<f64>], ys: &[Vec<f64>], params: SimilarityParams) -> Result<f64> {
    let distances = collect_distances(xs, ys)?;
    let exponent =
        -distances.squared_sum / (2.0 * distances.count as f64 * params.sigma * params.sigma);
    Ok(exponent.exp())
}

/// Baseline kernel: Gaussian similarity of the two sentence centroids.
pub fn average_similarity(
    xs: &[Vec<f64>],
    ys: &[Vec<f64>],
    params: SimilarityParams,
) -> Result<f64> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::IneligibleSentence);
    }
    let cx = centroid(xs);
    let cy = centroid(ys);
    let d = euclidean_distance(&cx, &cy);
    Ok((-(d * d) / (2.0 * params.sigma * params.sigma)).exp())
}

fn centroid(vectors: &[Vec<f64>]) -> Vec<f64> {
    let dim = vectors[0].len();
    let mut mean = vec![0.0; dim];
    for v in vectors {
        for (m, c) in mean.iter_mut().zip(v) {
            *m += c;
        }
    }
    let n = vectors.len() as f64;
    for m in &mut mean {
        *m /= n;
    }
    mean
}

fn kernel_value(xs: &[Vec<f64>], ys: &[Vec<f64>], params: SimilarityParams) -> Result<f64> {
    match params.kernel {
        Kernel::Wgss => wgss_similarity(xs, ys, params),
        Kernel::Average => average_similarity(xs, ys, params),
    }
}

/// Builds the affinity matrix over the document's eligible sentences.
///
/// Upper-triangle entries are evaluated in parallel and mirrored; each entry
/// depends only on its own sentence pair, so the result is identical for any
/// worker count. Fewer than two eligible sentences is a degenerate document
/// and the caller's fallback applies.
pub fn build_affinity(doc: &Document, params: SimilarityParams) -> Result<AffinityMatrix> {
    let eligible: Vec<_> = doc.eligible_sentences().collect();
    let order = eligible.len();
    if order < 2 {
        return Err(Error::DegenerateDocument);
    }
    let index_map: Vec<usize> = eligible.iter().map(|s| s.index).collect();

    let pairs: Vec<(usize, usize)> = (0..order)
        .flat_map(|i| ((i + 1)..order).map(move |j| (i, j)))
        .collect();
    let computed: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| kernel_value(&eligible[i].vectors, &eligible[j].vectors, params))
        .collect::<Result<_>>()?;

    let mut values = vec![0.0; order * order];
    for i in 0..order {
        values[i * order + i] = 1.0;
    }
    for (&(i, j), &v) in pairs.iter().zip(&computed) {
        values[i * order + j] = v;
        values[j * order + i] = v;
    }

    Ok(AffinityMatrix {
        order,
        values,
        index_map,
    })
}

/// Bandwidth heuristic for arbitrary embedding scales: the median of every
/// nearest-word distance across all eligible sentence pairs. Returns `None`
/// for documents with fewer than two eligible sentences; a non-positive
/// median (all sentences identical) falls back to 1.0, where the kernel is
/// saturated anyway.
pub fn auto_sigma(doc: &Document) -> Option<f64> {
    let eligible: Vec<_> = doc.eligible_sentences().collect();
    if eligible.len() < 2 {
        return None;
    }
    let mut distances = Vec::new();
    for i in 0..eligible.len() {
        for j in (i + 1)..eligible.len() {
            let xs = &eligible[i].vectors;
            let ys = &eligible[j].vectors;
            for x in xs {
                distances.push(most_similar_word_distance(x, ys));
            }
            for y in ys {
                distances.push(most_similar_word_distance(y, xs));
            }
        }
    }
    distances.sort_by(f64::total_cmp);
    let mid = distances.len() / 2;
    let median = if distances.len() % 2 == 1 {
        distances[mid]
    } else {
        0.5 * (distances[mid - 1] + distances[mid])
    };
    Some(if median > 0.0 && median.is_finite() {
        median
    } else {
        1.0
    })
}
