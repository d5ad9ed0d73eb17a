//! Dev probe: dissect text recall failures.
use ssakg::bench::ExperimentConfig;
use ssakg::ordering::OrderingAlgo;
use ssakg::recall::{candidate_set, recall_sequence_with_budget};
use ssakg::synth::{derive_seed, draw_context};
use ssakg::text::{encode_virtual, prepare_corpus, CorpusSpec};
use ssakg::{Sequence, Ssakg, SsakgError};

fn main() {
    let spec = CorpusSpec {
        corpus_path: "data/corpus.txt".into(),
        stopword_path: "data/stopwords_en.txt".into(),
        min_len: 15,
        max_len: 15,
        count: 1000,
        seed: 11,
    };
    let (sentences, mut vocab) = prepare_corpus(&spec).unwrap();
    let seqs: Vec<Sequence> = sentences.iter().map(|s| encode_virtual(s, &mut vocab)).collect();
    println!("vocab size {}", vocab.len());
    let mut g = Ssakg::new(vocab.len()).unwrap();
    for s in &seqs { g.store_sequence(s).unwrap(); }

    let mut shown = 0;
    let mut m_sum = 0usize;
    let (mut truth_found_not_first, mut truth_missing, mut novalid, mut overflow) = (0, 0, 0, 0);
    for (idx, truth) in seqs.iter().enumerate() {
        let tseed = derive_seed(11, &[idx as u64, 8, 3, 0]);
        let ctx = draw_context(truth, 8, tseed).unwrap();
        let cands = candidate_set(&g, &ctx).unwrap();
        m_sum += cands.len();
        match recall_sequence_with_budget(&g, &ctx, OrderingAlgo::Weighted, Some(15), 10000) {
            Ok(res) => {
                let first_ok = &res.orderings[0] == truth;
                if !first_ok {
                    let found = res.orderings.iter().any(|o| o == truth);
                    if found { truth_found_not_first += 1; } else { truth_missing += 1; }
                    if shown < 6 && !found {
                        println!(
                            "seq {idx}: m={} orderings={} branches={} truth_found={found}",
                            cands.len(), res.orderings.len(), res.branch_count
                        );
                        shown += 1;
                    }
                }
            }
            Err(SsakgError::NoValidOrdering { .. }) => novalid += 1,
            Err(SsakgError::AmbiguityOverflow { .. }) => overflow += 1,
            Err(e) => panic!("{e}"),
        }
    }
    println!("mean candidate size: {:.2}", m_sum as f64 / seqs.len() as f64);
    println!("truth_found_not_first={truth_found_not_first} truth_missing={truth_missing} novalid={novalid} overflow={overflow}");
}
