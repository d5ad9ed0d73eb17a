//! End-to-end recall experiments: store a batch of sequences in one graph,
//! recall each from seeded contexts across algorithms and context sizes,
//! and aggregate accuracy, branch, and density statistics into a report.
//!
//! Trials are independent reads over the immutable graph and run in
//! parallel; every trial's seed derives from
//! `(master seed, sequence index, context size, algorithm, trial)`, so
//! reports are reproducible regardless of thread count.

use std::collections::BTreeMap;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SsakgError};
use crate::graph::{Sequence, Ssakg, SymbolId};
use crate::ordering::{OrderingAlgo, DEFAULT_BRANCH_BUDGET};
use crate::recall::{candidate_set, recall_sequence_with_budget};
use crate::synth::{derive_seed, draw_context, gen_sequences, GenSpec, RNG_ALGORITHM};
use crate::text::{encode_virtual, prepare_corpus, CorpusSpec};

/// Where the stored sequences come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceSource {
    Synthetic(GenSpec),
    Corpus(CorpusSpec),
    /// JSON file holding an array of integer arrays.
    File(PathBuf),
}

/// Full experiment description; echoed verbatim into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub source: SequenceSource,
    /// Graph node count; defaults to the smallest universe the source needs.
    pub nodes: Option<usize>,
    pub context_sizes: Vec<usize>,
    pub algorithms: Vec<OrderingAlgo>,
    pub trials_per_sequence: usize,
    pub branch_budget: u64,
    pub seed: u64,
    /// Count per-position matches instead of set intersection in the
    /// correct-elements histogram.
    pub positional_metric: bool,
}

impl ExperimentConfig {
    pub fn new(source: SequenceSource, context_sizes: Vec<usize>, algorithms: Vec<OrderingAlgo>, seed: u64) -> Self {
        ExperimentConfig {
            source,
            nodes: None,
            context_sizes,
            algorithms,
            trials_per_sequence: 1,
            branch_budget: DEFAULT_BRANCH_BUDGET,
            seed,
            positional_metric: false,
        }
    }
}

/// How a single recall trial ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialOutcome {
    Recalled { unique: bool },
    NoValidOrdering,
    AmbiguityOverflow,
    InconsistentContext,
}

/// One recall trial, enough to recompute every aggregate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub algorithm: OrderingAlgo,
    pub context_size: usize,
    pub sequence_index: usize,
    pub trial: usize,
    pub seed: u64,
    pub outcome: TrialOutcome,
    /// Branch count of the search; the configured budget when the trial
    /// overflowed (a lower bound), 0 when the context itself failed.
    pub branch_count: u64,
    pub correct_elements: usize,
    pub set_correct: bool,
    /// First reported ordering equals the stored sequence (unconditional).
    pub order_correct: bool,
}

/// Aggregates for one (algorithm, context size) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub algorithm: OrderingAlgo,
    pub context_size: usize,
    /// Fraction of trials whose recalled element set matched exactly.
    pub set_accuracy: f64,
    /// Among set-correct trials, fraction recalled in the right order
    /// (0 when no trial had a correct set).
    pub order_accuracy: f64,
    pub mean_branch_count: f64,
    /// correct-element count -> number of trials.
    pub histogram: BTreeMap<usize, u64>,
}

/// Everything one experiment produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rng_algorithm: String,
    pub config: ExperimentConfig,
    /// Resolved graph size actually used.
    pub nodes: usize,
    pub sequence_count: usize,
    pub min_sequence_len: usize,
    pub max_sequence_len: usize,
    pub cells: Vec<CellReport>,
    /// Symmetric (pair) density of the built graph, the quantity the
    /// analytic model predicts.
    pub measured_density: f64,
    /// Directed-edge density of the same graph, for reference.
    pub measured_directed_density: f64,
    /// Model prediction from the per-sequence density recurrence.
    pub predicted_density: f64,
    pub wall_time_seconds: f64,
    pub trials: Vec<TrialRecord>,
}

/// Elements of the first reported ordering that occur anywhere in the truth.
pub fn correct_elements(returned: Option<&Sequence>, truth: &Sequence) -> usize {
    match returned {
        None => 0,
        Some(seq) => seq
            .iter()
            .filter(|&&s| truth.iter().any(|&t| t == s))
            .count(),
    }
}

/// Alternative metric: elements matching the truth at the same position.
pub fn correct_elements_positional(returned: Option<&Sequence>, truth: &Sequence) -> usize {
    match returned {
        None => 0,
        Some(seq) => seq
            .iter()
            .zip(truth.iter())
            .filter(|(a, b)| a == b)
            .count(),
    }
}

fn algo_tag(algo: OrderingAlgo) -> u64 {
    match algo {
        OrderingAlgo::Simple => 0,
        OrderingAlgo::Node => 1,
        OrderingAlgo::Enhanced => 2,
        OrderingAlgo::Weighted => 3,
    }
}

fn set_equal(a: &Sequence, b: &Sequence) -> bool {
    a.len() == b.len() && a.iter().all(|&s| b.iter().any(|&t| t == s))
}

/// Loads the sequences and the minimal node universe they need.
fn resolve_source(cfg: &ExperimentConfig) -> Result<(Vec<Sequence>, usize)> {
    let (sequences, min_nodes) = match &cfg.source {
        SequenceSource::Synthetic(spec) => (gen_sequences(spec)?, spec.n),
        SequenceSource::Corpus(spec) => {
            let (sentences, mut vocab) = prepare_corpus(spec)?;
            let sequences: Vec<Sequence> = sentences
                .iter()
                .map(|s| encode_virtual(s, &mut vocab))
                .collect();
            let n = vocab.len();
            (sequences, n)
        }
        SequenceSource::File(path) => {
            let sequences = load_sequences_json(path)?;
            let max_id = sequences
                .iter()
                .flat_map(|s| s.iter())
                .map(|s| s.index())
                .max()
                .unwrap_or(0);
            (sequences, max_id + 1)
        }
    };
    if sequences.is_empty() {
        return Err(SsakgError::InvalidParams("source yields no sequences".into()));
    }
    let nodes = match cfg.nodes {
        None => min_nodes.max(2),
        Some(n) if n >= min_nodes && n >= 2 => n,
        Some(n) => {
            return Err(SsakgError::InvalidParams(format!(
                "configured {n} nodes but the source needs at least {min_nodes}"
            )))
        }
    };
    Ok((sequences, nodes))
}

/// Runs the whole experiment: build, store, recall, aggregate.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    if cfg.trials_per_sequence == 0 {
        return Err(SsakgError::InvalidParams("trials per sequence must be >= 1".into()));
    }
    if cfg.branch_budget == 0 {
        return Err(SsakgError::InvalidParams("branch budget must be >= 1".into()));
    }
    let (sequences, nodes) = resolve_source(cfg)?;
    let min_len = sequences.iter().map(Sequence::len).min().unwrap();
    let max_len = sequences.iter().map(Sequence::len).max().unwrap();
    for &c in &cfg.context_sizes {
        if c == 0 || c > min_len {
            return Err(SsakgError::InvalidParams(format!(
                "context size {c} outside 1..={min_len} (shortest stored sequence)"
            )));
        }
    }

    let mut graph = Ssakg::new(nodes)?;
    let mut predicted = 0.0f64;
    let n_pairs = nodes as f64 * (nodes - 1) as f64;
    for seq in &sequences {
        graph.store_sequence(seq)?;
        let l = seq.len() as f64;
        let xi = l * (l - 1.0) / n_pairs;
        predicted = predicted * (1.0 - xi) + xi;
    }
    let graph = &graph;

    struct Key {
        algorithm: OrderingAlgo,
        context_size: usize,
        sequence_index: usize,
        trial: usize,
    }
    let mut keys = Vec::new();
    for &algorithm in &cfg.algorithms {
        for &context_size in &cfg.context_sizes {
            for sequence_index in 0..sequences.len() {
                for trial in 0..cfg.trials_per_sequence {
                    keys.push(Key {
                        algorithm,
                        context_size,
                        sequence_index,
                        trial,
                    });
                }
            }
        }
    }

    let trials: Vec<TrialRecord> = keys
        .par_iter()
        .map(|key| -> Result<TrialRecord> {
            let truth = &sequences[key.sequence_index];
            let seed = derive_seed(
                cfg.seed,
                &[
                    key.sequence_index as u64,
                    key.context_size as u64,
                    algo_tag(key.algorithm),
                    key.trial as u64,
                ],
            );
            let ctx = draw_context(truth, key.context_size, seed)?;
            let target = truth.len();
            let metric = if cfg.positional_metric {
                correct_elements_positional
            } else {
                correct_elements
            };

            let mut record = TrialRecord {
                algorithm: key.algorithm,
                context_size: key.context_size,
                sequence_index: key.sequence_index,
                trial: key.trial,
                seed,
                outcome: TrialOutcome::InconsistentContext,
                branch_count: 0,
                correct_elements: 0,
                set_correct: false,
                order_correct: false,
            };

            let candidates = match candidate_set(graph, &ctx) {
                Ok(c) => c,
                Err(SsakgError::InconsistentContext { .. }) => return Ok(record),
                Err(e) => return Err(e),
            };
            match recall_sequence_with_budget(graph, &ctx, key.algorithm, Some(target), cfg.branch_budget) {
                Ok(res) => {
                    let first = &res.orderings[0];
                    record.outcome = TrialOutcome::Recalled { unique: res.unique };
                    record.branch_count = res.branch_count;
                    record.correct_elements = metric(Some(first), truth);
                    record.set_correct = set_equal(first, truth);
                    record.order_correct = first == truth;
                }
                Err(SsakgError::NoValidOrdering { branch_count }) => {
                    record.outcome = TrialOutcome::NoValidOrdering;
                    record.branch_count = branch_count;
                }
                Err(SsakgError::AmbiguityOverflow { budget }) => {
                    record.outcome = TrialOutcome::AmbiguityOverflow;
                    record.branch_count = budget;
                    let overlap = candidates
                        .iter()
                        .filter(|&&s| truth.iter().any(|&t| t == s))
                        .count();
                    record.correct_elements = overlap.min(target);
                }
                Err(e) => return Err(e),
            }
            Ok(record)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut cells = Vec::new();
    for &algorithm in &cfg.algorithms {
        for &context_size in &cfg.context_sizes {
            let bucket: Vec<&TrialRecord> = trials
                .iter()
                .filter(|t| t.algorithm == algorithm && t.context_size == context_size)
                .collect();
            let total = bucket.len() as f64;
            let set_hits = bucket.iter().filter(|t| t.set_correct).count();
            let order_hits = bucket
                .iter()
                .filter(|t| t.set_correct && t.order_correct)
                .count();
            let counted: Vec<u64> = bucket
                .iter()
                .filter(|t| t.outcome != TrialOutcome::InconsistentContext)
                .map(|t| t.branch_count)
                .collect();
            let mut histogram = BTreeMap::new();
            for t in &bucket {
                *histogram.entry(t.correct_elements).or_insert(0u64) += 1;
            }
            cells.push(CellReport {
                algorithm,
                context_size,
                set_accuracy: if total > 0.0 { set_hits as f64 / total } else { 0.0 },
                order_accuracy: if set_hits > 0 {
                    order_hits as f64 / set_hits as f64
                } else {
                    0.0
                },
                mean_branch_count: if counted.is_empty() {
                    0.0
                } else {
                    counted.iter().sum::<u64>() as f64 / counted.len() as f64
                },
                histogram,
            });
        }
    }

    Ok(ExperimentReport {
        rng_algorithm: RNG_ALGORITHM.to_string(),
        config: cfg.clone(),
        nodes,
        sequence_count: sequences.len(),
        min_sequence_len: min_len,
        max_sequence_len: max_len,
        cells,
        measured_density: graph.pair_density(),
        measured_directed_density: graph.density(),
        predicted_density: predicted,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        trials,
    })
}

/// Builds the experiment's graph again (storage only), for snapshotting next
/// to a report.
pub fn build_graph(cfg: &ExperimentConfig) -> Result<Ssakg> {
    let (sequences, nodes) = resolve_source(cfg)?;
    let mut graph = Ssakg::new(nodes)?;
    for seq in &sequences {
        graph.store_sequence(seq)?;
    }
    Ok(graph)
}

/// Output encoding for [`write_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = SsakgError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(SsakgError::InvalidParams(format!(
                "unknown report format '{other}' (expected json|csv)"
            ))),
        }
    }
}

/// Sibling path `<stem>.<tag>.csv` next to the requested output path.
pub fn csv_sibling(path: &Path, tag: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".to_string());
    path.with_file_name(format!("{stem}.{tag}.csv"))
}

/// Writes a report.
///
/// JSON keeps the full object in one file. CSV produces two files next to
/// `path`: `<stem>.summary.csv` with one row per (algorithm, context) cell
/// and `<stem>.histogram.csv` with the correct-element histograms. Floats
/// are written with nine fractional digits of scientific notation.
pub fn write_report(report: &ExperimentReport, format: ReportFormat, path: &Path) -> Result<()> {
    match format {
        ReportFormat::Json => {
            let file = std::fs::File::create(path)?;
            let mut w = BufWriter::new(file);
            serde_json::to_writer_pretty(&mut w, report)?;
            w.flush()?;
            Ok(())
        }
        ReportFormat::Csv => {
            let mut summary = BufWriter::new(std::fs::File::create(csv_sibling(path, "summary"))?);
            writeln!(
                summary,
                "algorithm,context,set_accuracy,order_accuracy,mean_branch_count,measured_density,predicted_density"
            )?;
            for cell in &report.cells {
                writeln!(
                    summary,
                    "{},{},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e}",
                    cell.algorithm,
                    cell.context_size,
                    cell.set_accuracy,
                    cell.order_accuracy,
                    cell.mean_branch_count,
                    report.measured_density,
                    report.predicted_density
                )?;
            }
            summary.flush()?;

            let mut hist = BufWriter::new(std::fs::File::create(csv_sibling(path, "histogram"))?);
            writeln!(hist, "algorithm,context,correct_elements,count")?;
            for cell in &report.cells {
                for (&correct, &count) in &cell.histogram {
                    writeln!(
                        hist,
                        "{},{},{},{}",
                        cell.algorithm, cell.context_size, correct, count
                    )?;
                }
            }
            hist.flush()?;
            Ok(())
        }
    }
}

pub fn load_report_json(path: &Path) -> Result<ExperimentReport> {
    let file = std::fs::File::open(path)?;
    Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
}

/// Sequence list file: JSON array of integer arrays.
pub fn save_sequences_json(path: &Path, sequences: &[Sequence]) -> Result<()> {
    let raw: Vec<Vec<u32>> = sequences
        .iter()
        .map(|s| s.iter().map(|x| x.0).collect())
        .collect();
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer(&mut w, &raw)?;
    w.flush()?;
    Ok(())
}

pub fn load_sequences_json(path: &Path) -> Result<Vec<Sequence>> {
    let file = std::fs::File::open(path)?;
    let raw: Vec<Vec<u32>> = serde_json::from_reader(std::io::BufReader::new(file))?;
    raw.into_iter()
        .map(|ids| {
            Sequence::new(ids.into_iter().map(SymbolId).collect()).map_err(|e| {
                SsakgError::FormatError(format!("bad sequence in file: {e}"))
            })
        })
        .collect()
}
