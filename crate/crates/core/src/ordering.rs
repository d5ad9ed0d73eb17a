//! Ordering of recalled candidate sets.
//!
//! A recall produces an unordered candidate set; the algorithms here rebuild
//! the element order from the candidate sub-matrix. Three of them run a
//! depth-first elimination search (differing only in how the next row is
//! prioritized) and report every ordering that validates as a transitive
//! tournament; `simple_sort` is the non-searching baseline.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::{iter_ones, BitMatrix};
use crate::error::{Result, SsakgError};
use crate::graph::{Sequence, Ssakg, SymbolId};

/// Search gives up after this many completed branches unless told otherwise.
pub const DEFAULT_BRANCH_BUDGET: u64 = 10_000;

/// Selection rule used when recalling a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderingAlgo {
    /// Sort rows once by non-zero count; no search, no validation.
    Simple,
    /// Branch on every row with the maximal non-zero count.
    Node,
    /// Among maximal-count rows, branch only on those with the maximal
    /// weight sum.
    Enhanced,
    /// Branch on every row with the maximal weight sum; counts are ignored.
    Weighted,
}

impl OrderingAlgo {
    pub const ALL: [OrderingAlgo; 4] = [
        OrderingAlgo::Simple,
        OrderingAlgo::Node,
        OrderingAlgo::Enhanced,
        OrderingAlgo::Weighted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OrderingAlgo::Simple => "simple",
            OrderingAlgo::Node => "node",
            OrderingAlgo::Enhanced => "enhanced",
            OrderingAlgo::Weighted => "weighted",
        }
    }
}

impl std::fmt::Display for OrderingAlgo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OrderingAlgo {
    type Err = SsakgError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simple" => Ok(OrderingAlgo::Simple),
            "node" => Ok(OrderingAlgo::Node),
            "enhanced" => Ok(OrderingAlgo::Enhanced),
            "weighted" => Ok(OrderingAlgo::Weighted),
            other => Err(SsakgError::InvalidParams(format!(
                "unknown ordering algorithm '{other}' (expected simple|node|enhanced|weighted)"
            ))),
        }
    }
}

/// Sub-matrix of the graph restricted to a candidate set.
///
/// `symbols` is ascending; row/column `i` of `adj`/`wts` belongs to
/// `symbols[i]`.
#[derive(Debug, Clone)]
pub struct MatrixView {
    symbols: Vec<SymbolId>,
    adj: BitMatrix,
    wts: Vec<u32>,
}

impl MatrixView {
    /// Extracts the sub-matrix over `symbols` (must be distinct; sorted
    /// internally).
    pub fn from_graph(graph: &Ssakg, symbols: &[SymbolId]) -> Result<Self> {
        let mut symbols = symbols.to_vec();
        symbols.sort_unstable();
        for pair in symbols.windows(2) {
            if pair[0] == pair[1] {
                return Err(SsakgError::DuplicateElement { symbol: pair[0].0 });
            }
        }
        let m = symbols.len();
        let mut adj = BitMatrix::new(m);
        let mut wts = vec![0u32; m * m];
        for (i, &u) in symbols.iter().enumerate() {
            for (j, &v) in symbols.iter().enumerate() {
                if i != j && graph.has_edge(u, v) {
                    adj.set(i, j);
                    wts[i * m + j] = graph.weight(u, v);
                }
            }
        }
        Ok(MatrixView { symbols, adj, wts })
    }

    pub fn m(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[SymbolId] {
        &self.symbols
    }

    pub fn has_edge_at(&self, row: usize, col: usize) -> bool {
        self.adj.get(row, col)
    }

    pub fn weight_at(&self, row: usize, col: usize) -> u32 {
        self.wts[row * self.m() + col]
    }

    fn index_of(&self, s: SymbolId) -> Option<usize> {
        self.symbols.binary_search(&s).ok()
    }
}

/// Result of a branching ordering search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderingOutcome {
    /// Validated orderings, best pattern match first (see `pattern_residue`).
    pub orderings: Vec<Sequence>,
    /// Completed root-to-leaf explorations, dead ends included.
    pub branch_count: u64,
    /// Search tree nodes visited.
    pub explored: u64,
}

/// Rows sorted by descending non-zero count, ties by ascending symbol.
///
/// Nothing is removed and nothing is validated; the caller decides how much
/// of the returned order to trust.
pub fn simple_sort(view: &MatrixView) -> Sequence {
    let m = view.m();
    let mut order: Vec<usize> = (0..m).collect();
    let counts: Vec<usize> = (0..m)
        .map(|r| view.adj.row(r).iter().map(|w| w.count_ones() as usize).sum())
        .collect();
    order.sort_by_key(|&r| (std::cmp::Reverse(counts[r]), view.symbols[r]));
    Sequence::new(order.into_iter().map(|r| view.symbols[r]).collect())
        .expect("view symbols are distinct")
}

/// True iff the ordering's forward pairs are all edges of the view.
pub fn validate_tournament(view: &MatrixView, ordering: &Sequence) -> bool {
    let idx: Option<Vec<usize>> = ordering.iter().map(|&s| view.index_of(s)).collect();
    let Some(idx) = idx else { return false };
    validate_indices(view, &idx)
}

fn validate_indices(view: &MatrixView, idx: &[usize]) -> bool {
    for i in 0..idx.len() {
        for j in (i + 1)..idx.len() {
            if !view.adj.get(idx[i], idx[j]) {
                return false;
            }
        }
    }
    true
}

/// How far an ordering's weights sit from the positional pattern a stored
/// length-`L` sequence would have written.
///
/// A stored sequence has `W[o_i][o_j] >= L - i` on every forward pair, so its
/// deficit is exactly 0 and overlap with other sequences only adds mismatch
/// and excess. Lower `(deficit, mismatches, excess)` therefore means a closer
/// match to a genuinely stored order, which is how reported orderings are
/// ranked.
fn pattern_residue(view: &MatrixView, idx: &[usize]) -> (u64, u64, u64) {
    let l = idx.len();
    let mut deficit = 0u64;
    let mut mismatches = 0u64;
    let mut excess = 0u64;
    for i in 0..l {
        let expected = (l - 1 - i) as u64;
        for j in (i + 1)..l {
            let w = view.weight_at(idx[i], idx[j]) as u64;
            if w != expected {
                mismatches += 1;
            }
            if w < expected {
                deficit += expected - w;
            } else {
                excess += w - expected;
            }
        }
    }
    (deficit, mismatches, excess)
}

struct Search<'a> {
    view: &'a MatrixView,
    target_len: usize,
    budget: u64,
    algo: OrderingAlgo,
    branch_count: u64,
    explored: u64,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Rows (ascending) the priority rule branches on, taken from `viable`.
    ///
    /// `viable` holds the rows every already-selected row points to, so any
    /// other choice could never pass final validation; counts and weight
    /// sums are likewise taken over viable columns, since only those can
    /// still appear in the ordering. Weight sums clamp each cell at the
    /// largest weight the next position could have written
    /// (`remaining - 1`); stale larger weights from earlier positions or
    /// other sequences would otherwise drown the signal of late positions.
    fn branch_rows(&self, viable: &[u64], depth: usize) -> Vec<usize> {
        let m = self.view.m();
        let viable_rows: Vec<usize> = iter_ones(viable, m).collect();
        if viable_rows.is_empty() {
            return viable_rows;
        }
        let remaining = self.target_len - depth;
        let clamp = (remaining - 1) as u32;

        let count_of = |r: usize| -> usize {
            self.view
                .adj
                .row(r)
                .iter()
                .zip(viable.iter())
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum()
        };
        let weight_sum_of = |r: usize| -> u64 {
            viable_rows
                .iter()
                .map(|&c| self.view.wts[r * m + c].min(clamp) as u64)
                .sum()
        };
        // A row that is the next stored element still carries weight
        // >= remaining-1 toward each of its remaining-1 successors, all of
        // them viable. Rows meeting that floor are exactly the plausible
        // continuations.
        let pattern_floor_of = |r: usize| -> bool {
            viable_rows
                .iter()
                .filter(|&&c| c != r && self.view.wts[r * m + c] >= clamp.max(1))
                .count()
                >= remaining - 1
        };

        match self.algo {
            OrderingAlgo::Simple => unreachable!("simple sort never branches"),
            OrderingAlgo::Node => argmax_all(&viable_rows, count_of),
            OrderingAlgo::Enhanced => {
                let max_count = argmax_all(&viable_rows, count_of);
                argmax_all(&max_count, weight_sum_of)
            }
            OrderingAlgo::Weighted => {
                let qualified: Vec<usize> = viable_rows
                    .iter()
                    .copied()
                    .filter(|&r| pattern_floor_of(r))
                    .collect();
                if qualified.is_empty() {
                    argmax_all(&viable_rows, weight_sum_of)
                } else {
                    qualified
                }
            }
        }
    }

    fn dfs(&mut self, viable: &[u64], prefix: &mut Vec<usize>) -> Result<()> {
        self.explored += 1;
        if prefix.len() == self.target_len {
            if validate_indices(self.view, prefix) {
                self.found.push(prefix.clone());
            }
            return self.complete_branch();
        }
        let rows = self.branch_rows(viable, prefix.len());
        if rows.is_empty() {
            return self.complete_branch();
        }
        for row in rows {
            let mut next_viable: Vec<u64> = viable
                .iter()
                .zip(self.view.adj.row(row).iter())
                .map(|(v, a)| v & a)
                .collect();
            next_viable[row / 64] &= !(1u64 << (row % 64));
            prefix.push(row);
            self.dfs(&next_viable, prefix)?;
            prefix.pop();
        }
        Ok(())
    }

    fn complete_branch(&mut self) -> Result<()> {
        self.branch_count += 1;
        if self.branch_count > self.budget {
            return Err(SsakgError::AmbiguityOverflow {
                budget: self.budget,
            });
        }
        Ok(())
    }
}

fn argmax_all<T: Ord + Copy>(rows: &[usize], score: impl Fn(usize) -> T) -> Vec<usize> {
    let best = rows.iter().map(|&r| score(r)).max().expect("non-empty");
    rows.iter().copied().filter(|&r| score(r) == best).collect()
}

/// Depth-first elimination search over the candidate sub-matrix.
///
/// At each step the algorithm's priority rule picks the branch rows; a chosen
/// row and its column leave the matrix and the search recurses until
/// `target_len` rows are selected. Every completed prefix is validated and
/// the validated orderings are reported ranked by `pattern_residue`, ties
/// broken lexicographically. `branch_count` counts completed explorations
/// (leaves plus dead ends); exceeding `budget` aborts the whole search.
pub fn branching_order(
    view: &MatrixView,
    algo: OrderingAlgo,
    target_len: usize,
    budget: u64,
) -> Result<OrderingOutcome> {
    if algo == OrderingAlgo::Simple {
        return Err(SsakgError::InvalidParams(
            "simple sort does not run a branching search".into(),
        ));
    }
    let m = view.m();
    if target_len == 0 || target_len > m {
        return Err(SsakgError::InvalidParams(format!(
            "target length {target_len} outside 1..={m}"
        )));
    }
    if budget == 0 {
        return Err(SsakgError::InvalidParams("branch budget must be >= 1".into()));
    }
    let words = m.div_ceil(64);
    let mut viable = vec![u64::MAX; words];
    // Mask off bits beyond m.
    if m % 64 != 0 {
        viable[words - 1] = (1u64 << (m % 64)) - 1;
    }
    let mut search = Search {
        view,
        target_len,
        budget,
        algo,
        branch_count: 0,
        explored: 0,
        found: Vec::new(),
    };
    search.dfs(&viable, &mut Vec::new())?;

    if search.found.is_empty() {
        return Err(SsakgError::NoValidOrdering {
            branch_count: search.branch_count,
        });
    }
    let mut ranked: Vec<((u64, u64, u64), Vec<usize>)> = search
        .found
        .iter()
        .map(|idx| (pattern_residue(view, idx), idx.clone()))
        .collect();
    ranked.sort();
    let orderings = ranked
        .into_iter()
        .map(|(_, idx)| {
            Sequence::new(idx.into_iter().map(|i| view.symbols[i]).collect())
                .expect("search prefixes are distinct")
        })
        .collect();
    Ok(OrderingOutcome {
        orderings,
        branch_count: search.branch_count,
        explored: search.explored,
    })
}

/// Indices into successively smaller matrices, 1-based, as produced by the
/// elimination search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationPath(pub Vec<usize>);

/// Applies an elimination path to the shrinking label list `[1..m]`,
/// yielding the selected permutation.
pub fn path_to_permutation(path: &EliminationPath) -> Result<Vec<usize>> {
    let mut labels: Vec<usize> = (1..=path.0.len()).collect();
    let mut out = Vec::with_capacity(path.0.len());
    for &index in &path.0 {
        if index == 0 || index > labels.len() {
            return Err(SsakgError::MalformedPath {
                index,
                limit: labels.len(),
            });
        }
        out.push(labels.remove(index - 1));
    }
    Ok(out)
}

/// Recovers the elimination path that produces `perm`; inverse of
/// [`path_to_permutation`].
pub fn permutation_to_path(perm: &[usize]) -> Result<EliminationPath> {
    let m = perm.len();
    let mut labels: Vec<usize> = (1..=m).collect();
    let mut path = Vec::with_capacity(m);
    for &label in perm {
        let pos = labels
            .iter()
            .position(|&l| l == label)
            .ok_or(SsakgError::MalformedPath {
                index: label,
                limit: m,
            })?;
        path.push(pos + 1);
        labels.remove(pos);
    }
    Ok(EliminationPath(path))
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

    /// Exhaustive oracle: all length-`target` arrangements of the view's
    /// symbols that validate as tournaments.
    fn brute_force_orderings(view: &MatrixView, target: usize) -> Vec<Vec<u32>> {
        let m = view.m();
        let mut out = Vec::new();
        let mut idx = Vec::new();
        let mut used = vec![false; m];
        fn rec(
            view: &MatrixView,
            target: usize,
            idx: &mut Vec<usize>,
            used: &mut [bool],
            out: &mut Vec<Vec<u32>>,
        ) {
            if idx.len() == target {
                let mut ok = true;
                'outer: for i in 0..idx.len() {
                    for j in (i + 1)..idx.len() {
                        if !view.has_edge_at(idx[i], idx[j]) {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
                if ok {
                    out.push(idx.iter().map(|&i| view.symbols()[i].0).collect());
                }
                return;
            }
            for r in 0..used.len() {
                if !used[r] {
                    used[r] = true;
                    idx.push(r);
                    rec(view, target, idx, used, out);
                    idx.pop();
                    used[r] = false;
                }
            }
        }
        rec(view, target, &mut idx, &mut used, &mut out);
        out
    }

    #[test]
    fn simple_sort_counts_and_ties() {
        let g = graph_with(20, &[&[2, 6, 11]]);
        let view =
            MatrixView::from_graph(&g, &[SymbolId(2), SymbolId(6), SymbolId(11)]).unwrap();
        assert_eq!(ids(&simple_sort(&view)), vec![2, 6, 11]);

        let single = MatrixView::from_graph(&g, &[SymbolId(7)]).unwrap();
        assert_eq!(ids(&simple_sort(&single)), vec![7]);

        // Two rows with equal counts: lower id first.
        let g2 = graph_with(10, &[&[5, 1], &[3, 2]]);
        let view2 = MatrixView::from_graph(
            &g2,
            &[SymbolId(1), SymbolId(2), SymbolId(3), SymbolId(5)],
        )
        .unwrap();
        assert_eq!(ids(&simple_sort(&view2)), vec![3, 5, 1, 2]);
    }

    #[test]
    fn pure_tournament_single_branch_all_algos() {
        let g = graph_with(20, &[&[2, 6, 11]]);
        let view =
            MatrixView::from_graph(&g, &[SymbolId(2), SymbolId(6), SymbolId(11)]).unwrap();
        let oracle = brute_force_orderings(&view, 3);
        assert_eq!(oracle, vec![vec![2, 6, 11]]);
        for algo in [OrderingAlgo::Node, OrderingAlgo::Enhanced, OrderingAlgo::Weighted] {
            let out = branching_order(&view, algo, 3, DEFAULT_BRANCH_BUDGET).unwrap();
            assert_eq!(out.branch_count, 1, "{algo}");
            assert_eq!(out.orderings.len(), 1, "{algo}");
            assert_eq!(ids(&out.orderings[0]), vec![2, 6, 11], "{algo}");
        }
    }

    #[test]
    fn renumbering_example_via_elimination() {
        // A 5x5 matrix holding the tournament in order [4,3,5,2,1]; its
        // unique elimination path is [4,3,3,2,1] over 1-based row indices.
        let g = graph_with(6, &[&[4, 3, 5, 2, 1]]);
        let view = MatrixView::from_graph(
            &g,
            &[SymbolId(1), SymbolId(2), SymbolId(3), SymbolId(4), SymbolId(5)],
        )
        .unwrap();
        for algo in [OrderingAlgo::Node, OrderingAlgo::Enhanced, OrderingAlgo::Weighted] {
            let out = branching_order(&view, algo, 5, DEFAULT_BRANCH_BUDGET).unwrap();
            assert_eq!(out.branch_count, 1);
            assert_eq!(ids(&out.orderings[0]), vec![4, 3, 5, 2, 1]);
        }
        assert_eq!(
            path_to_permutation(&EliminationPath(vec![4, 3, 3, 2, 1])).unwrap(),
            vec![4, 3, 5, 2, 1]
        );
    }

    #[test]
    fn disjoint_tournaments_both_reported() {
        let g = graph_with(10, &[&[0, 1, 2], &[5, 6, 7]]);
        let view = MatrixView::from_graph(
            &g,
            &[
                SymbolId(0),
                SymbolId(1),
                SymbolId(2),
                SymbolId(5),
                SymbolId(6),
                SymbolId(7),
            ],
        )
        .unwrap();
        let oracle = brute_force_orderings(&view, 3);
        assert_eq!(oracle.len(), 2);
        for algo in [OrderingAlgo::Node, OrderingAlgo::Enhanced, OrderingAlgo::Weighted] {
            let out = branching_order(&view, algo, 3, DEFAULT_BRANCH_BUDGET).unwrap();
            let got: Vec<Vec<u32>> = out.orderings.iter().map(ids).collect();
            assert_eq!(got.len(), 2, "{algo}");
            for o in &got {
                assert!(oracle.contains(o), "{algo} reported {o:?}");
            }
            assert!(out.branch_count >= 2);
        }
    }

    #[test]
    fn budget_overflow_on_tied_rows() {
        let g = graph_with(10, &[&[0, 1, 2], &[5, 6, 7]]);
        let view = MatrixView::from_graph(
            &g,
            &[
                SymbolId(0),
                SymbolId(1),
                SymbolId(2),
                SymbolId(5),
                SymbolId(6),
                SymbolId(7),
            ],
        )
        .unwrap();
        let err = branching_order(&view, OrderingAlgo::Node, 3, 1).unwrap_err();
        assert!(matches!(err, SsakgError::AmbiguityOverflow { budget: 1 }));
    }

    #[test]
    fn no_valid_ordering_when_target_unreachable() {
        // Two disjoint pairs cannot fill a length-3 tournament.
        let g = graph_with(10, &[&[0, 1], &[5, 6]]);
        let view = MatrixView::from_graph(
            &g,
            &[SymbolId(0), SymbolId(1), SymbolId(5), SymbolId(6)],
        )
        .unwrap();
        let err = branching_order(&view, OrderingAlgo::Weighted, 3, 100).unwrap_err();
        assert!(matches!(err, SsakgError::NoValidOrdering { .. }));
    }

    #[test]
    fn validate_tournament_examples() {
        let g = graph_with(20, &[&[2, 6, 11]]);
        let view =
            MatrixView::from_graph(&g, &[SymbolId(2), SymbolId(6), SymbolId(11)]).unwrap();
        let good = Sequence::from_ids([2, 6, 11]).unwrap();
        let bad = Sequence::from_ids([11, 6, 2]).unwrap();
        assert!(validate_tournament(&view, &good));
        assert!(!validate_tournament(&view, &bad));
    }

    #[test]
    fn reported_orderings_subset_of_oracle() {
        // Random-ish overlapping graphs; every reported ordering must be in
        // the exhaustive oracle set.
        let cases: Vec<Vec<Vec<u32>>> = vec![
            vec![vec![0, 1, 2, 3], vec![3, 4, 5], vec![2, 4, 0]],
            vec![vec![1, 2, 3], vec![3, 2, 1]],
            vec![vec![0, 2, 4, 6], vec![6, 4, 2, 0], vec![1, 3, 5]],
        ];
        for seqs in cases {
            let refs: Vec<&[u32]> = seqs.iter().map(|s| s.as_slice()).collect();
            let g = graph_with(8, &refs);
            let all: Vec<SymbolId> = (0..8).map(SymbolId).collect();
            let view = MatrixView::from_graph(&g, &all).unwrap();
            for target in [3usize, 4] {
                let oracle = brute_force_orderings(&view, target);
                for algo in [OrderingAlgo::Node, OrderingAlgo::Enhanced, OrderingAlgo::Weighted] {
                    match branching_order(&view, algo, target, DEFAULT_BRANCH_BUDGET) {
                        Ok(out) => {
                            for o in &out.orderings {
                                assert!(
                                    oracle.contains(&ids(o)),
                                    "{algo} reported non-tournament {o}"
                                );
                            }
                            assert!(out.branch_count >= out.orderings.len() as u64);
                        }
                        Err(SsakgError::NoValidOrdering { .. }) => {}
                        Err(e) => panic!("unexpected error {e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn elimination_path_bijection() {
        let path = EliminationPath(vec![4, 3, 3, 2, 1]);
        let perm = path_to_permutation(&path).unwrap();
        assert_eq!(perm, vec![4, 3, 5, 2, 1]);
        assert_eq!(permutation_to_path(&perm).unwrap(), path);

        let identity = EliminationPath(vec![1, 1, 1, 1]);
        assert_eq!(path_to_permutation(&identity).unwrap(), vec![1, 2, 3, 4]);

        assert!(matches!(
            path_to_permutation(&EliminationPath(vec![1, 4])),
            Err(SsakgError::MalformedPath { index: 4, limit: 1 })
        ));
        assert!(permutation_to_path(&[1, 1, 2]).is_err());
        assert!(permutation_to_path(&[0, 1]).is_err());
    }
}
