//! Greedy maximum-information-gain decision trees for constrained D-ary
//! identification, together with the classical baselines (D-ary Huffman,
//! D-ary Shannon) and an exact memoized oracle.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and the HTTP session service live in the `migc` companion crate.
//!
//! Symbols are always addressed by their index `0..N` in the owning
//! [`Distribution`]; labels are carried for presentation only.

#![no_std]

extern crate alloc;

pub mod coders;
pub mod distribution;
pub mod error;
pub mod math;
pub mod partition;
pub mod query;
pub mod report;
pub mod scenarios;
pub mod symbols;
pub mod tree;

pub use coders::{
    brute_force_optimal, huffman_dary, migc_build, optimal_partition_unconstrained, run_coder,
    shannon_dary, Coder, PartitionSearch, SearchBudget, SearchMode, SplitGraph,
};
pub use distribution::Distribution;
pub use error::{Error, Result};
pub use partition::{
    distinguishability_classes, induced_partition, information_gain, partition_entropy,
    total_probability, PartitionView,
};
pub use query::{Query, QuerySet, RawQuery};
pub use report::CodeReport;
pub use symbols::SymbolSet;
pub use tree::{expected_length, tree_validate, DecisionTree, Node, Question, TreeViolation};
