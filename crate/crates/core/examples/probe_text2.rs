//! Dev probe: at which depth does the weighted priority drop the true row?
use ssakg::ordering::{MatrixView, OrderingAlgo};
use ssakg::recall::{candidate_set, recall_sequence_with_budget};
use ssakg::synth::{derive_seed, draw_context};
use ssakg::text::{encode_virtual, prepare_corpus, CorpusSpec};
use ssakg::{Sequence, Ssakg, SsakgError, SymbolId};

/// Replicates the weighted branch rule: clamped weight-sum argmax over
/// viable rows with active columns.
fn weighted_branch(view: &MatrixView, active: &[bool], viable: &[bool], remaining: usize) -> (Vec<usize>, u64) {
    let m = view.m();
    let clamp = (remaining - 1) as u32;
    let sum = |r: usize| -> u64 {
        (0..m)
            .filter(|&c| active[c] && c != r)
            .map(|c| view.weight_at(r, c).min(clamp) as u64)
            .sum()
    };
    let best = (0..m).filter(|&r| viable[r]).map(sum).max().unwrap_or(0);
    ((0..m).filter(|&r| viable[r] && sum(r) == best).collect(), best)
}

fn main() {
    let spec = CorpusSpec {
        corpus_path: "data/corpus.txt".into(),
        stopword_path: "data/stopwords_en.txt".into(),
        min_len: 15, max_len: 15, count: 1000, seed: 11,
    };
    let (sentences, mut vocab) = prepare_corpus(&spec).unwrap();
    let seqs: Vec<Sequence> = sentences.iter().map(|s| encode_virtual(s, &mut vocab)).collect();
    let mut g = Ssakg::new(vocab.len()).unwrap();
    for s in &seqs { g.store_sequence(s).unwrap(); }

    let mut lost_at = std::collections::BTreeMap::new();
    let mut checked = 0;
    for (idx, truth) in seqs.iter().enumerate() {
        let tseed = derive_seed(11, &[idx as u64, 8, 3, 0]);
        let ctx = draw_context(truth, 8, tseed).unwrap();
        let cands = candidate_set(&g, &ctx).unwrap();
        let found = match recall_sequence_with_budget(&g, &ctx, OrderingAlgo::Weighted, Some(15), 10000) {
            Ok(res) => res.orderings.iter().any(|o| o == truth),
            Err(SsakgError::AmbiguityOverflow { .. }) => continue,
            Err(_) => false,
        };
        if found { continue; }
        checked += 1;
        // Walk the true prefix; find the first depth where the true row is
        // not in the branch set.
        let view = MatrixView::from_graph(&g, &cands).unwrap();
        let m = view.m();
        let mut active = vec![true; m];
        let mut viable = vec![true; m];
        let tidx: Vec<usize> = truth.iter().map(|&s| view.symbols().binary_search(&s).unwrap()).collect();
        for depth in 0..15 {
            let (branch, best) = weighted_branch(&view, &active, &viable, 15 - depth);
            let t = tidx[depth];
            if !branch.contains(&t) {
                let tsum: u64 = (0..m).filter(|&c| active[c] && c != t)
                    .map(|c| view.weight_at(t, c).min((15 - depth - 1) as u32) as u64).sum();
                *lost_at.entry(depth).or_insert(0) += 1;
                if checked <= 5 {
                    println!("seq {idx} lost at depth {depth}: true_sum={tsum} best={best} m={m} branch_size={}", branch.len());
                }
                break;
            }
            active[t] = false;
            for c in 0..m { viable[c] = viable[c] && c != t && view.has_edge_at(t, c); }
        }
    }
    println!("misses checked: {checked}; lost-at-depth histogram: {lost_at:?}");
}
