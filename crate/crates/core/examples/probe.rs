//! Dev probe: prints accuracy and branch statistics for the standard
//! experiment configurations. Not part of the test suite.

use ssakg::bench::{run_experiment, ExperimentConfig, SequenceSource};
use ssakg::ordering::OrderingAlgo;
use ssakg::synth::GenSpec;

fn main() {
    // Flat-random, n=1000, L=15, 1000 sequences, contexts 8/9/10, weighted.
    println!("== flat-random recall, weighted ==");
    for seed in [0u64, 1, 2] {
        let cfg = ExperimentConfig::new(
            SequenceSource::Synthetic(GenSpec::uniform_length(1000, 15, 1000, seed).unwrap()),
            vec![8, 9, 10],
            vec![OrderingAlgo::Weighted],
            seed,
        );
        let report = run_experiment(&cfg).unwrap();
        for cell in &report.cells {
            println!(
                "seed {seed} c={} set={:.4} order={:.4} mbc={:.3}",
                cell.context_size, cell.set_accuracy, cell.order_accuracy, cell.mean_branch_count
            );
        }
        println!(
            "  density measured={:.6} predicted={:.6} directed={:.6} wall={:.1}s",
            report.measured_density,
            report.predicted_density,
            report.measured_directed_density,
            report.wall_time_seconds
        );
    }

    // Algorithm ranking at context 7 over 5 seeds.
    println!("== ranking at c=7, perfect counts ==");
    let algos = [
        OrderingAlgo::Weighted,
        OrderingAlgo::Enhanced,
        OrderingAlgo::Node,
        OrderingAlgo::Simple,
    ];
    let mut perfect = [0u64; 4];
    let mut perfect_pos = [0u64; 4];
    for seed in 0..5u64 {
        for (i, &algo) in algos.iter().enumerate() {
            for positional in [false, true] {
                let mut cfg = ExperimentConfig::new(
                    SequenceSource::Synthetic(
                        GenSpec::uniform_length(1000, 15, 1000, seed).unwrap(),
                    ),
                    vec![7],
                    vec![algo],
                    seed,
                );
                cfg.positional_metric = positional;
                let report = run_experiment(&cfg).unwrap();
                let hits = *report.cells[0].histogram.get(&15).unwrap_or(&0);
                if positional {
                    perfect_pos[i] += hits;
                } else {
                    perfect[i] += hits;
                }
            }
        }
    }
    for (i, &algo) in algos.iter().enumerate() {
        println!(
            "{algo}: perfect(set)={} avg {:.1}, perfect(positional)={} avg {:.1}",
            perfect[i],
            perfect[i] as f64 / 5.0,
            perfect_pos[i],
            perfect_pos[i] as f64 / 5.0
        );
    }

    // Branch counts with full contexts, L=10, across graph sizes.
    println!("== branch counts, full contexts, L=10 ==");
    for n in [500usize, 1000, 1500, 2000, 2500] {
        let mut node_sum = 0.0;
        let mut weighted_sum = 0.0;
        let graphs = 10;
        for seed in 0..graphs as u64 {
            let cfg = ExperimentConfig::new(
                SequenceSource::Synthetic(GenSpec::uniform_length(n, 10, 1000, 1000 + seed).unwrap()),
                vec![10],
                vec![OrderingAlgo::Node, OrderingAlgo::Weighted],
                1000 + seed,
            );
            let report = run_experiment(&cfg).unwrap();
            for cell in &report.cells {
                match cell.algorithm {
                    OrderingAlgo::Node => node_sum += cell.mean_branch_count,
                    OrderingAlgo::Weighted => weighted_sum += cell.mean_branch_count,
                    _ => {}
                }
            }
        }
        println!(
            "n={n}: node mbc={:.3} weighted mbc={:.3}",
            node_sum / graphs as f64,
            weighted_sum / graphs as f64
        );
    }
}
