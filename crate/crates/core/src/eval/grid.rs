use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cv::cross_validate;
use super::report::{Descriptor, EvalReport};
use super::EvalError;
use crate::astflat::TokenSequence;
use crate::dataset::{assemble, EmbeddingTable, FeatureMode, Labels, MetricsTable};
use crate::embed::{self, Doc2VecHyper, Method};
use crate::learn::ClassifierSpec;
use crate::seed;

/// Embedding axes, classifiers and feature modes of a grid run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub methods: Vec<Method>,
    pub dims: Vec<usize>,
    pub windows: Vec<usize>,
    pub epochs: Vec<usize>,
    pub classifiers: Vec<ClassifierSpec>,
    pub modes: Vec<FeatureMode>,
    /// Settings shared by every embedding configuration.
    pub negatives: usize,
    pub alpha_start: f64,
    pub alpha_end: f64,
    pub k: usize,
    pub upsample_ratio: f64,
}

impl Default for GridSpec {
    /// Both methods, dims 25/50/75/150, windows 4/8/12, epochs
    /// 6/10/20/40/60/80/100, the full classifier roster, embedding mode.
    fn default() -> Self {
        let base = Doc2VecHyper::default();
        GridSpec {
            methods: vec![Method::PvDm, Method::PvDbow],
            dims: vec![25, 50, 75, 150],
            windows: vec![4, 8, 12],
            epochs: vec![6, 10, 20, 40, 60, 80, 100],
            classifiers: ClassifierSpec::roster(),
            modes: vec![FeatureMode::Embedding],
            negatives: base.negatives,
            alpha_start: base.alpha_start,
            alpha_end: base.alpha_end,
            k: 10,
            upsample_ratio: 0.5,
        }
    }
}

/// Identifies an embedding configuration independently of its seed.
fn hyper_key(h: &Doc2VecHyper) -> String {
    format!(
        "{}/d{}/w{}/e{}/n{}/a{}-{}",
        h.method, h.dim, h.window, h.epochs, h.negatives, h.alpha_start, h.alpha_end
    )
}

impl GridSpec {
    /// Every embedding configuration, each seeded from a hash of its own
    /// settings under `seed`.
    pub fn configs(&self, seed: u64) -> Vec<Doc2VecHyper> {
        let mut out = Vec::new();
        for &method in &self.methods {
            for &dim in &self.dims {
                for &window in &self.windows {
                    for &epochs in &self.epochs {
                        let mut h = Doc2VecHyper {
                            method,
                            dim,
                            window,
                            epochs,
                            negatives: self.negatives,
                            alpha_start: self.alpha_start,
                            alpha_end: self.alpha_end,
                            seed: 0,
                        };
                        h.seed = seed::derive_str(seed, &hyper_key(&h));
                        out.push(h);
                    }
                }
            }
        }
        out
    }

    /// Number of cross-validation runs scheduled. Metrics-only runs do not
    /// depend on the embedding and are scheduled once per classifier.
    pub fn task_count(&self) -> usize {
        let n_cfg = self.methods.len() * self.dims.len() * self.windows.len() * self.epochs.len();
        let emb_modes = self.modes.iter().filter(|m| m.uses_embedding()).count();
        let met = usize::from(self.modes.contains(&FeatureMode::Metrics));
        self.classifiers.len() * (n_cfg * emb_modes + met)
    }
}

/// Data shared by every grid task.
#[derive(Debug, Clone, Copy)]
pub struct GridInputs<'a> {
    pub corpus: &'a [TokenSequence],
    pub labels: &'a Labels,
    pub metrics: Option<&'a MetricsTable>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskFailure {
    /// Descriptor key of the failed run, or of the embedding configuration
    /// when training failed.
    pub key: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridOutcome {
    /// Sorted by descriptor key.
    pub reports: Vec<EvalReport>,
    /// Sorted by key.
    pub failures: Vec<TaskFailure>,
}

struct Task<'a> {
    descriptor: Descriptor,
    vectors: Option<&'a EmbeddingTable>,
}

/// Trains every embedding configuration and cross-validates every
/// (configuration, mode, classifier) on `workers` threads. Each task is
/// seeded from its descriptor, so results do not depend on `workers` or on
/// which subset of the grid is run. Failed tasks are recorded, not fatal.
pub fn grid_run(inputs: GridInputs<'_>, grid: &GridSpec, seed: u64, workers: usize) -> Result<GridOutcome, EvalError> {
    if grid.modes.iter().any(|m| m.uses_metrics()) && inputs.metrics.is_none() {
        return Err(EvalError::Config("metrics or combined mode needs a metrics table".into()));
    }
    for c in &grid.classifiers {
        c.validate()?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| EvalError::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run(inputs, grid, seed))
}

fn run(inputs: GridInputs<'_>, grid: &GridSpec, seed: u64) -> Result<GridOutcome, EvalError> {
    let configs = grid.configs(seed);
    let needs_embedding = grid.modes.iter().any(|m| m.uses_embedding());
    let trained: Vec<(Doc2VecHyper, Result<EmbeddingTable, String>)> = if needs_embedding {
        configs
            .par_iter()
            .map(|h| {
                let r = embed::train(inputs.corpus, h)
                    .map(|m| EmbeddingTable::from_model(&m))
                    .map_err(|e| e.to_string());
                (*h, r)
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut failures = Vec::new();
    let mut tasks = Vec::new();
    let descriptor = |mode, doc2vec, classifier: &ClassifierSpec| Descriptor {
        mode,
        n_features: 0,
        doc2vec,
        classifier: classifier.clone(),
        k: grid.k,
        upsample_ratio: grid.upsample_ratio,
        seed: 0,
        permutation: None,
    };
    for (h, vectors) in &trained {
        let vectors = match vectors {
            Ok(v) => v,
            Err(e) => {
                failures.push(TaskFailure {
                    key: hyper_key(h),
                    error: e.clone(),
                });
                continue;
            }
        };
        for &mode in grid.modes.iter().filter(|m| m.uses_embedding()) {
            for c in &grid.classifiers {
                tasks.push(Task {
                    descriptor: descriptor(mode, Some(*h), c),
                    vectors: Some(vectors),
                });
            }
        }
    }
    if grid.modes.contains(&FeatureMode::Metrics) {
        for c in &grid.classifiers {
            tasks.push(Task {
                descriptor: descriptor(FeatureMode::Metrics, None, c),
                vectors: None,
            });
        }
    }
    for t in &mut tasks {
        t.descriptor.seed = seed::derive_str(seed, &t.descriptor.key());
    }

    let results: Vec<Result<EvalReport, TaskFailure>> = tasks
        .par_iter()
        .map(|t| {
            let d = &t.descriptor;
            let fail = |e: String| TaskFailure { key: d.key(), error: e };
            let (table, _) = assemble(d.mode, t.vectors, inputs.metrics, inputs.labels).map_err(|e| fail(e.to_string()))?;
            let mut report =
                cross_validate(&table, &d.classifier, d.k, d.seed, d.upsample_ratio).map_err(|e| fail(e.to_string()))?;
            report.descriptor.doc2vec = d.doc2vec;
            Ok(report)
        })
        .collect();
    let mut reports = Vec::new();
    for r in results {
        match r {
            Ok(rep) => reports.push(rep),
            Err(f) => failures.push(f),
        }
    }
    reports.sort_by_cached_key(|r| r.descriptor.key());
    failures.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(GridOutcome { reports, failures })
}
