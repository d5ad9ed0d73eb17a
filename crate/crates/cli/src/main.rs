//! `ssakg` command line: capacity queries, synthetic and text benchmarks,
//! ad-hoc recall against a snapshot, and snapshot inspection.
//!
//! Exit codes: 0 success, 1 domain error (recall/experiment/file failures),
//! 2 usage error (bad flags or out-of-range parameters). Domain and usage
//! errors print `error: <Name>: <message>` to stderr.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{ArgGroup, Parser, Subcommand};

use ssakg::bench::{
    build_graph, load_sequences_json, run_experiment, write_report, ExperimentConfig,
    ExperimentReport, ReportFormat, SequenceSource,
};
use ssakg::capacity::{capacity, density_after, xi, DEFAULT_CRITICAL_DENSITY};
use ssakg::ordering::DEFAULT_BRANCH_BUDGET;
use ssakg::recall::recall_sequence_with_budget;
use ssakg::synth::GenSpec;
use ssakg::text::CorpusSpec;
use ssakg::{Context, OrderingAlgo, Ssakg, SsakgError};

#[derive(Parser)]
#[command(name = "ssakg", version, about = "Associative sequence memory on a shared knowledge graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the analytic capacity model for one configuration.
    Capacity {
        /// Graph node count.
        #[arg(long)]
        nodes: usize,
        /// Stored sequence length.
        #[arg(long = "seq-len")]
        seq_len: usize,
        /// Density at which capacity is evaluated.
        #[arg(long, default_value_t = DEFAULT_CRITICAL_DENSITY)]
        density: f64,
        /// Also print the predicted density after this many sequences.
        #[arg(long)]
        sequences: Option<u64>,
        /// Output format: text or json.
        #[arg(long, default_value = "text")]
        format: String,
    },

    /// Store seeded flat-random sequences and benchmark recall.
    #[command(name = "synth-bench")]
    SynthBench {
        /// Graph node count and vocabulary size.
        #[arg(long)]
        nodes: usize,
        /// Sequence length (minimum when --seq-len-max is given).
        #[arg(long = "seq-len")]
        seq_len: usize,
        /// Maximum sequence length for mixed-length batches.
        #[arg(long = "seq-len-max")]
        seq_len_max: Option<usize>,
        /// Number of sequences to store.
        #[arg(long)]
        sequences: usize,
        /// Context sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        context: Vec<usize>,
        /// Algorithms (simple|node|enhanced|weighted), comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        algo: Vec<String>,
        #[arg(long)]
        seed: u64,
        /// Independent context draws per stored sequence.
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long = "branch-budget", default_value_t = DEFAULT_BRANCH_BUDGET)]
        branch_budget: u64,
        /// Cap on recall worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Report output path.
        #[arg(long)]
        out: PathBuf,
        /// Report format: json or csv.
        #[arg(long, default_value = "json")]
        format: String,
        /// Also save the stored graph as a snapshot.
        #[arg(long = "save-graph")]
        save_graph: Option<PathBuf>,
    },

    /// Prepare a text corpus, store the sentences, and benchmark recall.
    #[command(name = "text-bench")]
    TextBench {
        /// UTF-8 corpus file.
        #[arg(long)]
        corpus: PathBuf,
        /// Stop-word file: one lowercase word per line, '#' comments.
        #[arg(long)]
        stopwords: PathBuf,
        /// Minimum sentence length after filtering.
        #[arg(long = "min-len")]
        min_len: usize,
        /// Maximum sentence length after filtering.
        #[arg(long = "max-len")]
        max_len: usize,
        /// Number of sentences to select among the survivors.
        #[arg(long)]
        sentences: usize,
        /// Context sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        context: Vec<usize>,
        /// Algorithms (simple|node|enhanced|weighted), comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        algo: Vec<String>,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long = "branch-budget", default_value_t = DEFAULT_BRANCH_BUDGET)]
        branch_budget: u64,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long = "save-graph")]
        save_graph: Option<PathBuf>,
    },

    /// Recall sequences from a graph snapshot given an unordered context.
    Recall {
        /// Graph snapshot produced by --save-graph or `snapshot --save`.
        #[arg(long)]
        snapshot: PathBuf,
        /// Context symbols, comma separated, any order.
        #[arg(long, value_delimiter = ',', required = true)]
        context: Vec<u32>,
        /// Ordering algorithm.
        #[arg(long)]
        algo: String,
        /// Length of the sequence to reconstruct (default: candidate count).
        #[arg(long = "target-len")]
        target_len: Option<usize>,
        #[arg(long = "branch-budget", default_value_t = DEFAULT_BRANCH_BUDGET)]
        branch_budget: u64,
    },

    /// Save a graph built from a sequence file, or inspect a snapshot.
    #[command(group(ArgGroup::new("mode").required(true).args(["save", "load"])))]
    Snapshot {
        /// Build a graph from --from-sequences and write it here.
        #[arg(long)]
        save: Option<PathBuf>,
        /// Load a snapshot and print its statistics.
        #[arg(long)]
        load: Option<PathBuf>,
        /// Sequence file (JSON array of integer arrays) for --save.
        #[arg(long = "from-sequences", requires = "save")]
        from_sequences: Option<PathBuf>,
        /// Node count for --save (default: smallest that fits).
        #[arg(long)]
        nodes: Option<usize>,
    },
}

enum CliError {
    /// Parameter outside its documented range: exit code 2.
    Usage(SsakgError),
    /// Failure while doing the work: exit code 1.
    Domain(SsakgError),
}

trait Classify<T> {
    fn or_usage(self) -> Result<T, CliError>;
    fn or_domain(self) -> Result<T, CliError>;
}

impl<T> Classify<T> for ssakg::Result<T> {
    fn or_usage(self) -> Result<T, CliError> {
        self.map_err(CliError::Usage)
    }
    fn or_domain(self) -> Result<T, CliError> {
        self.map_err(CliError::Domain)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(2)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
    }
}

fn parse_algos(names: &[String]) -> Result<Vec<OrderingAlgo>, CliError> {
    names
        .iter()
        .map(|n| OrderingAlgo::from_str(n))
        .collect::<ssakg::Result<Vec<_>>>()
        .or_usage()
}

fn parse_format(name: &str) -> Result<ReportFormat, CliError> {
    ReportFormat::from_str(name).or_usage()
}

fn run_bench(
    cfg: &ExperimentConfig,
    threads: Option<usize>,
    out: &PathBuf,
    format: ReportFormat,
    save_graph: Option<&PathBuf>,
) -> Result<(), CliError> {
    let report = match threads {
        None => run_experiment(cfg).or_domain()?,
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Usage(SsakgError::InvalidParams(e.to_string())))?;
            pool.install(|| run_experiment(cfg)).or_domain()?
        }
    };
    write_report(&report, format, out).or_domain()?;
    if let Some(path) = save_graph {
        let graph = build_graph(cfg).or_domain()?;
        graph.save_snapshot(path).or_domain()?;
    }
    print_summary(&report);
    Ok(())
}

fn print_summary(report: &ExperimentReport) {
    println!(
        "stored {} sequences on {} nodes (density measured {:.6}, predicted {:.6})",
        report.sequence_count, report.nodes, report.measured_density, report.predicted_density
    );
    for cell in &report.cells {
        println!(
            "algo={} context={} set_accuracy={:.4} order_accuracy={:.4} mean_branches={:.3}",
            cell.algorithm,
            cell.context_size,
            cell.set_accuracy,
            cell.order_accuracy,
            cell.mean_branch_count
        );
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Capacity {
            nodes,
            seq_len,
            density,
            sequences,
            format,
        } => {
            let x = xi(seq_len, nodes).or_usage()?;
            let cap = capacity(density, x).or_usage()?;
            let predicted = sequences
                .map(|s| density_after(s, x))
                .transpose()
                .or_usage()?;
            match format.as_str() {
                "text" => {
                    println!("nodes: {nodes}");
                    println!("sequence length: {seq_len}");
                    println!("xi: {x:.9e}");
                    println!("capacity at density {density}: {} ({cap:.3})", cap.floor() as u64);
                    if let (Some(p), Some(s)) = (predicted, sequences) {
                        println!("predicted density after {s} sequences: {p:.9}");
                    }
                }
                "json" => {
                    let mut doc = serde_json::json!({
                        "nodes": nodes,
                        "seq_len": seq_len,
                        "xi": x,
                        "density": density,
                        "capacity": cap,
                        "capacity_floor": cap.floor() as u64,
                    });
                    if let (Some(p), Some(s)) = (predicted, sequences) {
                        doc["sequences"] = serde_json::json!(s);
                        doc["predicted_density"] = serde_json::json!(p);
                    }
                    println!("{doc}");
                }
                other => {
                    return Err(CliError::Usage(SsakgError::InvalidParams(format!(
                        "unknown format '{other}' (expected text|json)"
                    ))));
                }
            }
            Ok(())
        }

        Command::SynthBench {
            nodes,
            seq_len,
            seq_len_max,
            sequences,
            context,
            algo,
            seed,
            trials,
            branch_budget,
            threads,
            out,
            format,
            save_graph,
        } => {
            let spec = GenSpec::new(nodes, seq_len, seq_len_max.unwrap_or(seq_len), sequences, seed)
                .or_usage()?;
            let algorithms = parse_algos(&algo)?;
            let format = parse_format(&format)?;
            let mut cfg =
                ExperimentConfig::new(SequenceSource::Synthetic(spec), context, algorithms, seed);
            cfg.trials_per_sequence = trials.max(1);
            cfg.branch_budget = branch_budget;
            run_bench(&cfg, threads, &out, format, save_graph.as_ref())
        }

        Command::TextBench {
            corpus,
            stopwords,
            min_len,
            max_len,
            sentences,
            context,
            algo,
            seed,
            trials,
            branch_budget,
            threads,
            out,
            format,
            save_graph,
        } => {
            let spec = CorpusSpec {
                corpus_path: corpus,
                stopword_path: stopwords,
                min_len,
                max_len,
                count: sentences,
                seed,
            };
            spec.validate().or_usage()?;
            let algorithms = parse_algos(&algo)?;
            let format = parse_format(&format)?;
            let mut cfg =
                ExperimentConfig::new(SequenceSource::Corpus(spec), context, algorithms, seed);
            cfg.trials_per_sequence = trials.max(1);
            cfg.branch_budget = branch_budget;
            run_bench(&cfg, threads, &out, format, save_graph.as_ref())
        }

        Command::Recall {
            snapshot,
            context,
            algo,
            target_len,
            branch_budget,
        } => {
            let algo = OrderingAlgo::from_str(&algo).or_usage()?;
            let ctx = Context::from_ids(context).or_usage()?;
            if let Some(t) = target_len {
                if t == 0 {
                    return Err(CliError::Usage(SsakgError::InvalidParams(
                        "target length must be >= 1".into(),
                    )));
                }
            }
            let graph = Ssakg::load_snapshot(&snapshot).or_domain()?;
            let result =
                recall_sequence_with_budget(&graph, &ctx, algo, target_len, branch_budget)
                    .or_domain()?;
            let cands: Vec<String> = result.candidates.iter().map(|s| s.to_string()).collect();
            println!("candidates: [{}]", cands.join(","));
            println!("branches: {}", result.branch_count);
            println!("unique: {}", result.unique);
            for ordering in &result.orderings {
                println!("ordering: {ordering}");
            }
            Ok(())
        }

        Command::Snapshot {
            save,
            load,
            from_sequences,
            nodes,
        } => {
            if let Some(path) = load {
                let graph = Ssakg::load_snapshot(&path).or_domain()?;
                println!("nodes: {}", graph.n());
                println!("stored sequences: {}", graph.stored_count());
                println!("directed edges: {}", graph.edge_count());
                println!("directed density: {:.9}", graph.density());
                println!("pair density: {:.9}", graph.pair_density());
                return Ok(());
            }
            let save = save.expect("clap group guarantees one mode");
            let seq_path = from_sequences.ok_or_else(|| {
                CliError::Usage(SsakgError::InvalidParams(
                    "--save needs --from-sequences".into(),
                ))
            })?;
            let sequences = load_sequences_json(&seq_path).or_domain()?;
            let min_nodes = sequences
                .iter()
                .flat_map(|s| s.iter())
                .map(|s| s.index() + 1)
                .max()
                .unwrap_or(2)
                .max(2);
            let n = match nodes {
                None => min_nodes,
                Some(n) if n >= min_nodes => n,
                Some(n) => {
                    return Err(CliError::Usage(SsakgError::InvalidParams(format!(
                        "configured {n} nodes but the sequences need at least {min_nodes}"
                    ))));
                }
            };
            let mut graph = Ssakg::new(n).or_usage()?;
            for seq in &sequences {
                graph.store_sequence(seq).or_domain()?;
            }
            graph.save_snapshot(&save).or_domain()?;
            println!(
                "saved {} nodes, {} edges from {} sequences",
                graph.n(),
                graph.edge_count(),
                graph.stored_count()
            );
            Ok(())
        }
    }
}
