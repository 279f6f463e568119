use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{
    CliError, CvArgs, DataArgs, EmbedArgs, EvalArgs, FeaturizeArgs, FlattenArgs, GridArgs, PermuteArgs, ReportArgs,
    EXIT_DATA, EXIT_OK, EXIT_PARTIAL,
};
use crate::astflat::{self, load_kind_table, parse_tree_file, read_corpus, validate_sequence, write_corpus, TokenSequence};
use crate::dataset::{self, assemble, binarize, load_labels, load_metrics, load_vectors, FeatureTable};
use crate::embed::{self, Doc2VecHyper};
use crate::eval::{self, EvalReport, GridInputs, GridSpec};
use crate::learn::ClassifierSpec;

fn require_file(path: &Path, what: &str) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::usage(format!("{what} {} does not exist or is not a file", path.display())))
    }
}

/// The parent directory of an output file must exist.
fn require_out_file(path: &Path) -> Result<(), CliError> {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() && !p.is_dir() => {
            Err(CliError::usage(format!("directory {} does not exist", p.display())))
        }
        _ if path.is_dir() => Err(CliError::usage(format!("{} is a directory", path.display()))),
        _ => Ok(()),
    }
}

fn prepare_out_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::usage(format!("cannot create {}: {e}", dir.display())))
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::data(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn workers(requested: Option<usize>) -> usize {
    requested
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn collect_sources(path: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    if path.is_dir() {
        let mut entries: Vec<PathBuf> = fs::read_dir(path)?.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>()?;
        entries.sort();
        for e in entries {
            if e.is_dir() {
                collect_sources(&e, out)?;
            } else if matches!(e.extension().and_then(|x| x.to_str()), Some("java" | "json")) {
                out.push(e);
            }
        }
    } else {
        out.push(path.to_path_buf());
    }
    Ok(())
}

fn flatten_file(path: &Path) -> Result<Vec<TokenSequence>, String> {
    let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
    if path.extension().and_then(|x| x.to_str()) == Some("json") {
        let table = load_kind_table();
        let tree = parse_tree_file(&text, table).map_err(|e| e.to_string())?;
        let id = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
        Ok(vec![TokenSequence::new(id, astflat::flatten(&tree, table))])
    } else {
        astflat::flatten_java(&text).map_err(|e| e.to_string())
    }
}

pub fn flatten(a: &FlattenArgs) -> Result<i32, CliError> {
    for p in &a.inputs {
        if !p.exists() {
            return Err(CliError::usage(format!("input {} does not exist", p.display())));
        }
    }
    require_out_file(&a.out)?;
    let mut files = Vec::new();
    for p in &a.inputs {
        collect_sources(p, &mut files).map_err(|e| io_err(p, e))?;
    }
    let mut docs = Vec::new();
    let mut skipped = 0;
    for f in &files {
        match flatten_file(f) {
            Ok(d) => docs.extend(d),
            Err(e) => {
                eprintln!("{}: {e}", f.display());
                skipped += 1;
            }
        }
    }
    if docs.is_empty() {
        return Err(CliError::data(format!("no documents found in {} file(s)", files.len())));
    }
    let invalid: Vec<&str> = docs.iter().filter(|d| !validate_sequence(&d.tokens)).map(|d| d.doc_id.as_str()).collect();
    if !invalid.is_empty() {
        return Err(CliError::data(format!("invalid sequences: {}", invalid.join(", "))));
    }
    let file = File::create(&a.out).map_err(|e| io_err(&a.out, e))?;
    let mut w = BufWriter::new(file);
    write_corpus(&mut w, &docs).map_err(|e| io_err(&a.out, e))?;
    w.flush().map_err(|e| io_err(&a.out, e))?;
    println!(
        "{} documents from {} file(s), all sequences valid; {skipped} file(s) skipped",
        docs.len(),
        files.len() - skipped
    );
    Ok(if skipped > 0 { EXIT_PARTIAL } else { EXIT_OK })
}

fn read_corpus_file(path: &Path) -> Result<Vec<TokenSequence>, CliError> {
    let f = File::open(path).map_err(|e| io_err(path, e))?;
    read_corpus(BufReader::new(f)).map_err(|e| io_err(path, e))
}

pub fn embed(a: &EmbedArgs) -> Result<i32, CliError> {
    let h = &a.hyper;
    let hyper = Doc2VecHyper {
        method: h.method,
        dim: h.dim,
        window: h.window,
        epochs: h.epochs,
        negatives: h.negatives,
        alpha_start: h.alpha_start,
        alpha_end: h.alpha_end,
        seed: a.seed,
    };
    hyper.validate().map_err(|e| CliError::usage(e.to_string()))?;
    require_file(&a.corpus, "corpus")?;
    require_out_file(&a.model)?;
    require_out_file(&a.vectors)?;
    println!("{}", serde_json::to_string(&hyper).expect("hyperparameters serialize"));
    let corpus = read_corpus_file(&a.corpus)?;
    let model = embed::train(&corpus, &hyper).map_err(|e| io_err(&a.corpus, e))?;
    embed::save_model(&model, &a.model).map_err(|e| io_err(&a.model, e))?;
    let file = File::create(&a.vectors).map_err(|e| io_err(&a.vectors, e))?;
    let mut w = BufWriter::new(file);
    embed::write_vectors(&model, &mut w).map_err(|e| io_err(&a.vectors, e))?;
    w.flush().map_err(|e| io_err(&a.vectors, e))?;
    println!("{} documents, vocabulary {}", model.doc_ids().len(), model.vocab().len());
    Ok(EXIT_OK)
}

fn check_data_paths(d: &DataArgs) -> Result<(), CliError> {
    require_file(&d.labels, "labels file")?;
    for (needed, path, what) in [
        (d.mode.uses_embedding(), &d.vectors, "--vectors"),
        (d.mode.uses_metrics(), &d.metrics, "--metrics"),
    ] {
        match path {
            Some(p) => require_file(p, what)?,
            None if needed => return Err(CliError::usage(format!("{} mode needs {what}", d.mode))),
            None => {}
        }
    }
    Ok(())
}

fn load_table(d: &DataArgs) -> Result<FeatureTable, CliError> {
    let data = |e: dataset::DataError| CliError::data(e.to_string());
    let labels = binarize(&load_labels(&d.labels).map_err(data)?);
    let vectors = match &d.vectors {
        Some(p) if d.mode.uses_embedding() => Some(load_vectors(p).map_err(data)?),
        _ => None,
    };
    let metrics = match &d.metrics {
        Some(p) if d.mode.uses_metrics() => Some(load_metrics(p).map_err(data)?),
        _ => None,
    };
    let (table, report) = assemble(d.mode, vectors.as_ref(), metrics.as_ref(), &labels).map_err(data)?;
    eprintln!("{report}");
    Ok(table)
}

pub fn featurize(a: &FeaturizeArgs) -> Result<i32, CliError> {
    check_data_paths(&a.data)?;
    require_out_file(&a.out)?;
    let table = load_table(&a.data)?;
    let mut w = csv::Writer::from_path(&a.out).map_err(|e| io_err(&a.out, e))?;
    let mut header = vec!["doc_id".to_owned(), "label".to_owned()];
    header.extend(table.feature_names().iter().cloned());
    w.write_record(&header).map_err(|e| io_err(&a.out, e))?;
    for (i, row) in table.features().iter_rows().enumerate() {
        let mut rec = vec![table.doc_ids()[i].clone(), table.labels()[i].to_string()];
        rec.extend(row.iter().map(f64::to_string));
        w.write_record(&rec).map_err(|e| io_err(&a.out, e))?;
    }
    w.flush().map_err(|e| io_err(&a.out, e))?;
    println!("{} rows, {} features ({})", table.len(), table.n_features(), table.mode());
    Ok(EXIT_OK)
}

fn check_cv(cv: &CvArgs) -> Result<(), CliError> {
    if cv.k < 2 {
        return Err(CliError::usage("--k must be at least 2"));
    }
    if !(cv.upsample > 0.0 && cv.upsample <= 1.0) {
        return Err(CliError::usage("--upsample must lie in (0, 1]"));
    }
    Ok(())
}

fn write_reports(dir: &Path, reports: &[EvalReport]) -> Result<String, CliError> {
    for r in reports {
        r.write(&dir.join(format!("{}.json", r.descriptor.file_stem())))
            .map_err(|e| io_err(dir, e))?;
    }
    let text = eval::summary(reports);
    write_file(&dir.join("summary.txt"), &text)?;
    Ok(text)
}

fn roster_or(list: &[ClassifierSpec]) -> Vec<ClassifierSpec> {
    if list.is_empty() {
        ClassifierSpec::roster()
    } else {
        list.to_vec()
    }
}

pub fn eval(a: &EvalArgs) -> Result<i32, CliError> {
    check_data_paths(&a.data)?;
    check_cv(&a.cv)?;
    prepare_out_dir(&a.out_dir)?;
    let table = load_table(&a.data)?;
    let mut reports = Vec::new();
    let mut failed = 0;
    for spec in roster_or(&a.classifiers) {
        match eval::cross_validate(&table, &spec, a.cv.k, a.cv.seed, a.cv.upsample) {
            Ok(r) => {
                println!("{spec}: F={:.4} over {} features", r.f_score, r.descriptor.n_features);
                reports.push(r);
            }
            Err(e) => {
                eprintln!("{spec}: {e}");
                failed += 1;
            }
        }
    }
    if reports.is_empty() {
        return Err(CliError::data("every classifier failed"));
    }
    print!("{}", write_reports(&a.out_dir, &reports)?);
    Ok(if failed > 0 { EXIT_PARTIAL } else { EXIT_OK })
}

pub fn grid(a: &GridArgs) -> Result<i32, CliError> {
    require_file(&a.corpus, "corpus")?;
    require_file(&a.labels, "labels file")?;
    if let Some(m) = &a.metrics {
        require_file(m, "metrics file")?;
    }
    if a.modes.iter().any(|m| m.uses_metrics()) && a.metrics.is_none() {
        return Err(CliError::usage("metrics and combined modes need --metrics"));
    }
    check_cv(&a.cv)?;
    let spec = GridSpec {
        methods: a.methods.clone(),
        dims: a.dims.clone(),
        windows: a.windows.clone(),
        epochs: a.epochs.clone(),
        classifiers: roster_or(&a.classifiers),
        modes: a.modes.clone(),
        negatives: a.negatives,
        alpha_start: a.alpha_start,
        alpha_end: a.alpha_end,
        k: a.cv.k,
        upsample_ratio: a.cv.upsample,
    };
    let configs = spec.configs(a.cv.seed);
    for h in &configs {
        h.validate().map_err(|e| CliError::usage(e.to_string()))?;
    }
    for c in &spec.classifiers {
        c.validate().map_err(|e| CliError::usage(e.to_string()))?;
    }
    println!(
        "{} embedding configurations x {} classifier(s): {} cross-validation runs scheduled",
        configs.len(),
        spec.classifiers.len(),
        spec.task_count()
    );
    if a.plan {
        return Ok(EXIT_OK);
    }
    prepare_out_dir(&a.out_dir)?;
    let corpus = read_corpus_file(&a.corpus)?;
    let labels = binarize(&load_labels(&a.labels).map_err(|e| CliError::data(e.to_string()))?);
    let metrics = match &a.metrics {
        Some(p) => Some(load_metrics(p).map_err(|e| CliError::data(e.to_string()))?),
        None => None,
    };
    let inputs = GridInputs {
        corpus: &corpus,
        labels: &labels,
        metrics: metrics.as_ref(),
    };
    let outcome = eval::grid_run(inputs, &spec, a.cv.seed, workers(a.workers)).map_err(|e| CliError::data(e.to_string()))?;
    for f in &outcome.failures {
        eprintln!("{}: {}", f.key, f.error);
    }
    write_file(
        &a.out_dir.join("failures.json"),
        &(serde_json::to_string_pretty(&outcome.failures).expect("failures serialize") + "\n"),
    )?;
    print!("{}", write_reports(&a.out_dir, &outcome.reports)?);
    Ok(match (outcome.reports.is_empty(), outcome.failures.is_empty()) {
        (_, true) => EXIT_OK,
        (true, false) => EXIT_DATA,
        (false, false) => EXIT_PARTIAL,
    })
}

pub fn permute(a: &PermuteArgs) -> Result<i32, CliError> {
    check_data_paths(&a.data)?;
    check_cv(&a.cv)?;
    if a.n == 0 {
        return Err(CliError::usage("-n must be at least 1"));
    }
    a.classifier.validate().map_err(|e| CliError::usage(e.to_string()))?;
    prepare_out_dir(&a.out_dir)?;
    let table = load_table(&a.data)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers(a.workers))
        .build()
        .map_err(|e| CliError::data(format!("cannot start worker pool: {e}")))?;
    let reports = pool
        .install(|| eval::permutation_test(&table, &a.classifier, a.n, a.cv.k, a.cv.seed, a.cv.upsample))
        .map_err(|e| CliError::data(e.to_string()))?;
    let fs: Vec<f64> = reports.iter().map(|r| r.f_score).collect();
    println!(
        "{} permutations: mean F {:.4}, max F {:.4}",
        fs.len(),
        fs.iter().sum::<f64>() / fs.len() as f64,
        fs.iter().copied().fold(0.0, f64::max)
    );
    print!("{}", write_reports(&a.out_dir, &reports)?);
    Ok(EXIT_OK)
}

pub fn report(a: &ReportArgs) -> Result<i32, CliError> {
    for p in &a.inputs {
        if !p.exists() {
            return Err(CliError::usage(format!("input {} does not exist", p.display())));
        }
    }
    if let Some(out) = &a.out {
        require_out_file(out)?;
    }
    let mut reports = Vec::new();
    for p in &a.inputs {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(p)
                .map_err(|e| io_err(p, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().and_then(|x| x.to_str()) == Some("json"))
                .collect();
            files.sort();
            // directories also hold failures.json; skip anything that is not a report
            for f in files {
                let text = fs::read_to_string(&f).map_err(|e| io_err(&f, e))?;
                if let Ok(r) = EvalReport::from_json(&text) {
                    reports.push(r);
                }
            }
        } else {
            let text = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
            reports.push(EvalReport::from_json(&text).map_err(|e| io_err(p, e))?);
        }
    }
    if reports.is_empty() {
        return Err(CliError::data("no reports found"));
    }
    let text = eval::summary(&reports);
    match &a.out {
        Some(out) => write_file(out, &text)?,
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}
