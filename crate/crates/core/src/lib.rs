//! Associative sequence memory on a shared directed knowledge graph.
//!
//! Sequences are stored as transitive tournaments over a fixed node
//! universe: every element points at every later element, with integer
//! weights encoding element order. Recall takes an unordered subset of a
//! sequence (a context), selects the candidate nodes connected to all of it,
//! and reorders them by searching the candidate sub-matrix. A closed-form
//! density model predicts how many sequences fit before unique recall
//! degrades.
//!
//! Modules:
//! - [`graph`]: the memory graph, tournament storage, snapshots
//! - [`recall`]: context-driven candidate selection and recall
//! - [`ordering`]: the four ordering algorithms and the elimination-path
//!   bijection
//! - [`capacity`]: the analytic density/capacity model
//! - [`synth`]: seeded flat-random sequence and context generation
//! - [`text`]: corpus ingestion and virtual-object encoding
//! - [`bench`]: end-to-end experiments with JSON/CSV reports

mod bits;

pub mod bench;
pub mod capacity;
pub mod error;
pub mod graph;
pub mod ordering;
pub mod recall;
pub mod synth;
pub mod text;

pub use error::{Result, SsakgError};
pub use graph::{Sequence, Snapshot, Ssakg, SymbolId};
pub use ordering::{OrderingAlgo, DEFAULT_BRANCH_BUDGET};
pub use recall::{candidate_set, recall_sequence, Context, RecallResult};
