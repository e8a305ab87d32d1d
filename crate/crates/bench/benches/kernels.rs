//! Benchmarks for the heavy paths: pairwise affinity construction,
//! spectral clustering, and ROUGE scoring.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wgss_core::{
    build_affinity, build_document, rouge_lcs, spectral_cluster, AffinityMatrix,
    ClusteringParams, Document, EmbeddingTable, Kernel, SimilarityParams, StopwordList,
};

fn synthetic_document(sentences: usize, words_per_sentence: usize, dim: usize) -> Document {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let vocabulary = 2000usize;
    let entries: Vec<(String, Vec<f32>)> = (0..vocabulary)
        .map(|i| {
            let v: Vec<f32> = (0..dim).map(|_| rng.random_range(-1.0f32..1.0)).collect();
            (format!("w{i}"), v)
        })
        .collect();
    let table = EmbeddingTable::from_entries(dim, entries, "bench").unwrap();

    let mut text = String::new();
    for _ in 0..sentences {
        let sentence: Vec<String> = (0..words_per_sentence)
            .map(|_| format!("w{}", rng.random_range(0..vocabulary)))
            .collect();
        text.push_str(&sentence.join(" "));
        text.push_str(". ");
    }
    build_document(&text, "generic", &StopwordList::empty(), &table).unwrap()
}

fn bench_affinity(c: &mut Criterion) {
    let mut group = c.benchmark_group("affinity");
    group.sample_size(10);
    for sentences in [25usize, 50, 100] {
        let doc = synthetic_document(sentences, 20, 300);
        let params = SimilarityParams::new(10.0, Kernel::Wgss).unwrap();
        group.bench_with_input(
            BenchmarkId::new("wgss_300d_20w", sentences),
            &doc,
            |b, doc| b.iter(|| build_affinity(doc, params).unwrap()),
        );
    }
    group.finish();
}

#[allow(clippy::needless_range_loop)]
fn bench_spectral(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 100usize;
    let mut rows = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        rows[i][i] = 1.0;
        for j in (i + 1)..n {
            let v = rng.random::<f64>();
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    let affinity = AffinityMatrix::from_rows(&rows).unwrap();
    let params = ClusteringParams::default();
    c.bench_function("spectral_cluster_100x100_k20", |b| {
        b.iter(|| spectral_cluster(&affinity, 20, &params).unwrap())
    });
}

fn bench_rouge(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let words = ["a", "b", "c", "d", "e", "f", "g", "h"];
    let sequence = |rng: &mut ChaCha8Rng, len: usize| -> Vec<String> {
        (0..len)
            .map(|_| words[rng.random_range(0..words.len())].to_string())
            .collect()
    };
    let candidate = sequence(&mut rng, 120);
    let reference = sequence(&mut rng, 100);
    c.bench_function("rouge_lcs_120x100", |b| {
        b.iter(|| rouge_lcs(&candidate, &reference))
    });
}

criterion_group!(benches, bench_affinity, bench_spectral, bench_rouge);
criterion_main!(benches);
