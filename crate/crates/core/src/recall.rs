//! Context-driven recall: candidate selection over the symmetrized graph,
//! then ordering of the candidate sub-matrix.
//!
//! A context is an unordered cue. A node is a candidate when it is connected
//! to every context symbol in at least one direction; candidates are exactly
//! the context plus those nodes, found with one word-parallel AND over the
//! symmetrized adjacency rows.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SsakgError};
use crate::graph::{Sequence, Ssakg, SymbolId};
use crate::ordering::{
    branching_order, simple_sort, MatrixView, OrderingAlgo, DEFAULT_BRANCH_BUDGET,
};

/// Unordered recall cue; symbols are kept sorted, so two contexts with the
/// same members are indistinguishable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Context {
    symbols: Vec<SymbolId>,
}

impl Context {
    pub fn new<I: IntoIterator<Item = SymbolId>>(symbols: I) -> Result<Self> {
        let mut symbols: Vec<SymbolId> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(SsakgError::InvalidParams(
                "context must contain at least one symbol".into(),
            ));
        }
        symbols.sort_unstable();
        for pair in symbols.windows(2) {
            if pair[0] == pair[1] {
                return Err(SsakgError::DuplicateElement { symbol: pair[0].0 });
            }
        }
        Ok(Context { symbols })
    }

    pub fn from_ids<I: IntoIterator<Item = u32>>(ids: I) -> Result<Self> {
        Context::new(ids.into_iter().map(SymbolId))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[SymbolId] {
        &self.symbols
    }

    pub fn contains(&self, s: SymbolId) -> bool {
        self.symbols.binary_search(&s).is_ok()
    }
}

/// Everything one recall produced.
#[derive(Debug, Clone)]
pub struct RecallResult {
    /// Candidate node set, ascending.
    pub candidates: Vec<SymbolId>,
    /// Validated orderings, best pattern match first.
    pub orderings: Vec<Sequence>,
    /// Completed search branches (1 for the simple baseline).
    pub branch_count: u64,
    /// Exactly one ordering was produced.
    pub unique: bool,
}

/// The context plus every node symmetrically connected to all of it.
///
/// Errors with `InconsistentContext` when two context symbols never co-occur
/// in any stored sequence, since no recall could contain both.
pub fn candidate_set(graph: &Ssakg, ctx: &Context) -> Result<Vec<SymbolId>> {
    for &s in ctx.symbols() {
        if s.index() >= graph.n() {
            return Err(SsakgError::SymbolOutOfRange {
                symbol: s.0,
                n: graph.n(),
            });
        }
    }
    for (i, &a) in ctx.symbols().iter().enumerate() {
        for &b in &ctx.symbols()[i + 1..] {
            if !graph.symmetric_connected(a, b) {
                return Err(SsakgError::InconsistentContext { a: a.0, b: b.0 });
            }
        }
    }
    let mut candidates = graph.connected_to_all(ctx.symbols());
    candidates.extend_from_slice(ctx.symbols());
    candidates.sort_unstable();
    Ok(candidates)
}

/// Recalls full sequences from an unordered context with the default branch
/// budget. The target length defaults to the candidate count.
pub fn recall_sequence(
    graph: &Ssakg,
    ctx: &Context,
    algo: OrderingAlgo,
    target_len: Option<usize>,
) -> Result<RecallResult> {
    recall_sequence_with_budget(graph, ctx, algo, target_len, DEFAULT_BRANCH_BUDGET)
}

pub fn recall_sequence_with_budget(
    graph: &Ssakg,
    ctx: &Context,
    algo: OrderingAlgo,
    target_len: Option<usize>,
    budget: u64,
) -> Result<RecallResult> {
    let candidates = candidate_set(graph, ctx)?;
    let target = target_len.unwrap_or(candidates.len());
    if target == 0 {
        return Err(SsakgError::InvalidParams("target length must be >= 1".into()));
    }

    if algo == OrderingAlgo::Simple {
        // The baseline orders everything it was given; score only the first
        // `target` entries.
        let view = MatrixView::from_graph(graph, &candidates)?;
        let sorted = simple_sort(&view);
        let prefix: Vec<SymbolId> = sorted.iter().copied().take(target).collect();
        let ordering = Sequence::new(prefix).expect("candidates are distinct");
        return Ok(RecallResult {
            candidates,
            orderings: vec![ordering],
            branch_count: 1,
            unique: true,
        });
    }

    let core = tournament_core(graph, &candidates, target);
    if core.len() < target {
        // No length-`target` tournament can exist inside the candidates.
        return Err(SsakgError::NoValidOrdering { branch_count: 1 });
    }
    let view = MatrixView::from_graph(graph, &core)?;
    let outcome = branching_order(&view, algo, target, budget)?;
    let unique = outcome.orderings.len() == 1;
    Ok(RecallResult {
        candidates,
        orderings: outcome.orderings,
        branch_count: outcome.branch_count,
        unique,
    })
}

/// Candidates that can take part in a length-`target` tournament.
///
/// Every element of such a tournament is connected (in some direction) to
/// the `target - 1` other elements, so nodes with a smaller symmetric degree
/// inside the set are dropped until the set is stable. Members of any valid
/// ordering always survive, but spurious candidates that merely touch the
/// context rarely do; this keeps the search matrix small on skewed
/// vocabularies.
fn tournament_core(graph: &Ssakg, candidates: &[SymbolId], target: usize) -> Vec<SymbolId> {
    let mut core = candidates.to_vec();
    loop {
        if core.len() < target {
            return core;
        }
        let keep: Vec<SymbolId> = core
            .iter()
            .copied()
            .filter(|&v| {
                core.iter()
                    .filter(|&&u| u != v && graph.symmetric_connected(u, v))
                    .count()
                    >= target - 1
            })
            .collect();
        if keep.len() == core.len() {
            return core;
        }
        core = keep;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph_with(n: usize, seqs: &[&[u32]]) -> Ssakg {
        let mut g = Ssakg::new(n).unwrap();
        for ids in seqs {
            g.store_sequence(&Sequence::from_ids(ids.iter().copied()).unwrap())
                .unwrap();
        }
        g
    }

    fn ids(seq: &Sequence) -> Vec<u32> {
        seq.iter().map(|s| s.0).collect()
    }

    #[test]
    fn candidates_by_brute_force_scan() {
        let g = graph_with(20, &[&[2, 6, 11]]);
        let ctx = Context::from_ids([6, 11]).unwrap();
        let got = candidate_set(&g, &ctx).unwrap();
        let brute: Vec<SymbolId> = (0..20u32)
            .map(SymbolId)
            .filter(|&v| {
                ctx.contains(v)
                    || ctx
                        .symbols()
                        .iter()
                        .all(|&u| g.symmetric_connected(v, u))
            })
            .collect();
        assert_eq!(got, brute);
        assert_eq!(got, vec![SymbolId(2), SymbolId(6), SymbolId(11)]);
    }

    #[test]
    fn full_sequence_context_is_superset() {
        let g = graph_with(20, &[&[2, 6, 11]]);
        let ctx = Context::from_ids([2, 6, 11]).unwrap();
        let got = candidate_set(&g, &ctx).unwrap();
        for s in [2u32, 6, 11] {
            assert!(got.contains(&SymbolId(s)));
        }
    }

    #[test]
    fn inconsistent_context_is_an_error() {
        let g = graph_with(20, &[&[2, 6, 11]]);
        let ctx = Context::from_ids([6, 8]).unwrap();
        assert!(matches!(
            candidate_set(&g, &ctx),
            Err(SsakgError::InconsistentContext { a: 6, b: 8 })
        ));
    }

    #[test]
    fn recall_single_tournament_from_partial_context() {
        let g = graph_with(20, &[&[2, 6, 11]]);
        let ctx = Context::from_ids([11, 2]).unwrap();
        let res = recall_sequence(&g, &ctx, OrderingAlgo::Weighted, None).unwrap();
        assert!(res.unique);
        assert_eq!(ids(&res.orderings[0]), vec![2, 6, 11]);
        assert_eq!(res.branch_count, 1);
    }

    #[test]
    fn recall_with_target_len_picks_stored_tournament() {
        let g = graph_with(20, &[&[2, 6, 11], &[11, 8, 2]]);
        let ctx = Context::from_ids([8]).unwrap();
        let res =
            recall_sequence(&g, &ctx, OrderingAlgo::Weighted, Some(3)).unwrap();
        assert!(res.unique, "orderings: {:?}", res.orderings);
        assert_eq!(ids(&res.orderings[0]), vec![11, 8, 2]);
    }

    #[test]
    fn context_order_irrelevant() {
        let g = graph_with(30, &[&[3, 9, 14, 21, 27], &[27, 3, 5]]);
        let a = Context::from_ids([14, 3, 21]).unwrap();
        let b = Context::from_ids([21, 14, 3]).unwrap();
        let ra = recall_sequence(&g, &a, OrderingAlgo::Node, Some(5)).unwrap();
        let rb = recall_sequence(&g, &b, OrderingAlgo::Node, Some(5)).unwrap();
        assert_eq!(ra.candidates, rb.candidates);
        assert_eq!(ra.orderings, rb.orderings);
        assert_eq!(ra.branch_count, rb.branch_count);
    }

    #[test]
    fn full_context_recovers_sequence_any_algo() {
        let g = graph_with(30, &[&[3, 9, 14, 21, 27]]);
        let ctx = Context::from_ids([3, 9, 14, 21, 27]).unwrap();
        for algo in [OrderingAlgo::Node, OrderingAlgo::Enhanced, OrderingAlgo::Weighted] {
            let res = recall_sequence(&g, &ctx, algo, None).unwrap();
            assert!(res
                .orderings
                .iter()
                .any(|o| ids(o) == vec![3, 9, 14, 21, 27]));
        }
    }

    #[test]
    fn simple_baseline_reports_single_truncated_ordering() {
        let g = graph_with(30, &[&[3, 9, 14, 21, 27]]);
        let ctx = Context::from_ids([9, 21]).unwrap();
        let res = recall_sequence(&g, &ctx, OrderingAlgo::Simple, Some(5)).unwrap();
        assert_eq!(res.branch_count, 1);
        assert_eq!(res.orderings.len(), 1);
        assert_eq!(res.orderings[0].len(), 5);
        assert_eq!(ids(&res.orderings[0]), vec![3, 9, 14, 21, 27]);
    }

    #[test]
    fn empty_and_duplicate_contexts_rejected() {
        assert!(Context::from_ids([]).is_err());
        assert!(matches!(
            Context::from_ids([4, 4]),
            Err(SsakgError::DuplicateElement { symbol: 4 })
        ));
    }

    #[test]
    fn out_of_range_context_symbol() {
        let g = graph_with(10, &[&[1, 2]]);
        let ctx = Context::from_ids([12]).unwrap();
        assert!(matches!(
            candidate_set(&g, &ctx),
            Err(SsakgError::SymbolOutOfRange { symbol: 12, n: 10 })
        ));
    }
}
