use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use wgss_core::{
    evaluate_dataset, ingest_idf_document, load_vectors, pipeline, DocScores, EvalReport,
    IdfTable, PipelineConfig, Resources, SigmaMode,
};

use crate::args::{
    BuildIdfArgs, CommonFlags, EmbedCacheArgs, EvaluateArgs, KernelFlags, SummarizeArgs,
    SweepSigmaArgs,
};
use crate::resources::{
    collect_vocabulary, load_dataset, load_embeddings_for_input, load_idf, load_stopwords,
    read_input,
};
use crate::CliError;

fn pipeline_config(flags: &KernelFlags) -> PipelineConfig {
    let mut config = common_config(&flags.common);
    config.sigma = flags.sigma;
    config
}

fn common_config(common: &CommonFlags) -> PipelineConfig {
    PipelineConfig {
        language_tag: common.lang.clone(),
        proportion: common.ratio,
        kernel: common.kernel,
        strategy: common.strategy,
        seed: common.seed,
        ..Default::default()
    }
}

fn write_artifact(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, contents)
            .map_err(|e| CliError::Resource(format!("failed to write {}: {e}", path.display()))),
        None => {
            print!("{contents}");
            std::io::stdout()
                .flush()
                .map_err(|e| CliError::Resource(format!("failed to write standard output: {e}")))
        }
    }
}

pub fn summarize(args: &SummarizeArgs) -> Result<(), CliError> {
    let text = read_input(args.input.as_deref())?;
    if text.trim().is_empty() {
        return Err(CliError::Pipeline(
            wgss_core::Error::EmptyDocument.to_string(),
        ));
    }
    let stopwords = load_stopwords(&args.resources.stopwords)?;
    let idf = load_idf(&args.resources.idf)?;
    let vocabulary = collect_vocabulary([text.as_str()], &stopwords);
    let embeddings = load_embeddings_for_input(&args.resources.embeddings, &vocabulary)?;

    let resources = Resources {
        embeddings,
        stopwords,
        idf,
    };
    let config = pipeline_config(&args.kernel_flags);
    let output = pipeline::summarize(&text, &resources, &config).map_err(CliError::pipeline)?;

    if let Some(diag_path) = &args.diag {
        let json = serde_json::to_string_pretty(&output.diagnostics)
            .expect("diagnostics serialize to JSON");
        write_artifact(Some(diag_path), &format!("{json}\n"))?;
    }
    write_artifact(args.out.as_deref(), &format!("{}\n", output.summary))
}

fn run_evaluation(
    docs: &[wgss_core::DatasetDoc],
    resources: &Resources,
    config: &PipelineConfig,
    jobs: usize,
) -> Result<EvalReport, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Pipeline(format!("failed to start worker pool: {e}")))?;
    pool.install(|| evaluate_dataset(docs, resources, config))
        .map_err(CliError::pipeline)
}

fn aggregate_table(aggregate: &DocScores) -> String {
    let mut out = String::from("metric     precision  recall     f1\n");
    for (name, s) in [
        ("rouge-1  ", aggregate.rouge1),
        ("rouge-2  ", aggregate.rouge2),
        ("rouge-lcs", aggregate.rouge_l),
    ] {
        out.push_str(&format!(
            "{name}  {:<9.4}  {:<9.4}  {:<9.4}\n",
            s.precision, s.recall, s.f1
        ));
    }
    out
}

pub fn evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let (docs, malformed) = load_dataset(&args.dataset)?;
    let stopwords = load_stopwords(&args.resources.stopwords)?;
    let idf = load_idf(&args.resources.idf)?;
    let vocabulary = collect_vocabulary(docs.iter().map(|d| d.text.as_str()), &stopwords);
    let embeddings = load_embeddings_for_input(&args.resources.embeddings, &vocabulary)?;

    let resources = Resources {
        embeddings,
        stopwords,
        idf,
    };
    let config = pipeline_config(&args.kernel_flags);
    let mut report = run_evaluation(&docs, &resources, &config, args.jobs)?;
    report.malformed_lines = malformed;

    for row in &report.rows {
        match &row.error {
            None => eprintln!("{}: ok", row.id),
            Some(reason) => eprintln!("{}: skipped ({reason})", row.id),
        }
    }
    if malformed > 0 {
        eprintln!("wgss: skipped {malformed} malformed dataset line(s)");
    }
    eprint!("{}", aggregate_table(&report.aggregate));

    let json = serde_json::to_string_pretty(&report).expect("report serializes to JSON");
    write_artifact(args.report.as_deref(), &format!("{json}\n"))
}

pub fn build_idf(args: &BuildIdfArgs) -> Result<(), CliError> {
    if args.files.is_empty() && args.dataset.is_none() {
        return Err(CliError::Usage(
            "build-idf needs corpus files and/or --dataset".into(),
        ));
    }
    let stopwords = load_stopwords(&args.stopwords)?;

    let mut doc_frequency = std::collections::HashMap::new();
    let mut document_count = 0usize;
    let mut unreadable = 0usize;

    for path in &args.files {
        match std::fs::read_to_string(path) {
            Ok(text) => {
                ingest_idf_document(&text, &stopwords, &mut doc_frequency, &mut document_count)
            }
            Err(e) => {
                unreadable += 1;
                eprintln!("wgss: skipping {}: {e}", path.display());
            }
        }
    }
    if let Some(dataset) = &args.dataset {
        let (docs, malformed) = load_dataset(dataset)?;
        if malformed > 0 {
            eprintln!("wgss: skipped {malformed} malformed dataset line(s)");
        }
        for doc in &docs {
            ingest_idf_document(&doc.text, &stopwords, &mut doc_frequency, &mut document_count);
        }
    }
    if document_count == 0 {
        return Err(CliError::Resource(format!(
            "no readable corpus documents ({unreadable} unreadable)"
        )));
    }

    let table = IdfTable::new(document_count, doc_frequency).map_err(CliError::resource)?;
    table.write(&args.out).map_err(CliError::resource)?;
    eprintln!(
        "wgss: wrote IDF table for {document_count} document(s) to {}",
        args.out.display()
    );
    Ok(())
}

pub fn embed_cache(args: &EmbedCacheArgs) -> Result<(), CliError> {
    let vocabulary = match &args.vocab {
        None => None,
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Resource(format!("failed to read {}: {e}", path.display()))
            })?;
            let words: HashSet<String> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_string)
                .collect();
            if words.is_empty() {
                return Err(CliError::Resource(format!(
                    "vocabulary file {} contains no words",
                    path.display()
                )));
            }
            Some(words)
        }
    };

    let (table, stats) =
        load_vectors(&args.embeddings, vocabulary.as_ref()).map_err(CliError::resource)?;
    table.write_cache(&args.out).map_err(CliError::resource)?;
    eprintln!(
        "wgss: cached {} vector(s) of dimension {} to {} ({} line(s) skipped)",
        table.len(),
        table.dimension(),
        args.out.display(),
        stats.skipped_lines
    );
    Ok(())
}

/// Log-spaced grid with the endpoints pinned exactly.
fn sigma_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![min];
    }
    let (log_min, log_max) = (min.ln(), max.ln());
    (0..points)
        .map(|i| match i {
            0 => min,
            _ if i == points - 1 => max,
            _ => (log_min + (log_max - log_min) * i as f64 / (points - 1) as f64).exp(),
        })
        .collect()
}

pub fn sweep_sigma(args: &SweepSigmaArgs) -> Result<(), CliError> {
    if !args.sigma_min.is_finite() || args.sigma_min <= 0.0 {
        return Err(CliError::Usage("--sigma-min must be a positive real".into()));
    }
    if !args.sigma_max.is_finite() || args.sigma_max <= args.sigma_min {
        return Err(CliError::Usage("--sigma-max must exceed --sigma-min".into()));
    }

    let (docs, malformed) = load_dataset(&args.dataset)?;
    if malformed > 0 {
        eprintln!("wgss: skipped {malformed} malformed dataset line(s)");
    }
    let stopwords = load_stopwords(&args.resources.stopwords)?;
    let idf = load_idf(&args.resources.idf)?;
    let vocabulary = collect_vocabulary(docs.iter().map(|d| d.text.as_str()), &stopwords);
    let embeddings = load_embeddings_for_input(&args.resources.embeddings, &vocabulary)?;

    let resources = Resources {
        embeddings,
        stopwords,
        idf,
    };
    let mut config = common_config(&args.common);

    let mut stdout = std::io::stdout();
    for (i, sigma) in sigma_grid(args.sigma_min, args.sigma_max, args.points)
        .into_iter()
        .enumerate()
    {
        config.sigma = SigmaMode::Fixed(sigma);
        let report = run_evaluation(&docs, &resources, &config, args.jobs)?;
        let a = &report.aggregate;
        writeln!(
            stdout,
            "{sigma:e}\t{:.6}\t{:.6}\t{:.6}",
            a.rouge1.f1, a.rouge2.f1, a.rouge_l.f1
        )
        .map_err(|e| CliError::Resource(format!("failed to write standard output: {e}")))?;
        eprintln!("sigma {}/{}: {sigma:e}", i + 1, args.points);
    }
    Ok(())
}
