//! Tree-construction algorithms.

mod brute;
mod huffman;
mod migc;
mod random;
mod search;
mod shannon;

use core::fmt;
use core::str::FromStr;

pub use brute::{brute_force_optimal, SplitGraph};
pub use huffman::huffman_dary;
pub use migc::{best_split, migc_build};
pub use random::random_valid_tree;
pub use search::{
    balanced_assignment, max_entropy_assignment, optimal_partition_unconstrained, PartitionSearch,
    SearchBudget, SearchMode,
};
pub use shannon::{canonical_codewords, shannon_dary};

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::query::QuerySet;
use crate::report::CodeReport;
use crate::tree::{expected_length, DecisionTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coder {
    Migc,
    /// MIGC restricted to binary pools.
    Gbsc,
    Huffman,
    Shannon,
    BruteForce,
}

impl Coder {
    pub const ALL: [Coder; 5] = [
        Coder::Migc,
        Coder::Gbsc,
        Coder::Huffman,
        Coder::Shannon,
        Coder::BruteForce,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Coder::Migc => "migc",
            Coder::Gbsc => "gbsc",
            Coder::Huffman => "huffman",
            Coder::Shannon => "shannon",
            Coder::BruteForce => "bruteforce",
        }
    }

    /// Huffman and Shannon ignore the pool's constraints and only use its
    /// arity; their trees ask ad hoc partitions.
    pub fn respects_constraints(self) -> bool {
        !matches!(self, Coder::Huffman | Coder::Shannon)
    }
}

impl fmt::Display for Coder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownCoder;

impl fmt::Display for UnknownCoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of migc, gbsc, huffman, shannon, bruteforce")
    }
}

impl FromStr for Coder {
    type Err = UnknownCoder;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        Coder::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or(UnknownCoder)
    }
}

/// Runs `coder` on an instance and reports the resulting code.
pub fn run_coder(
    coder: Coder,
    dist: &Distribution,
    qset: &QuerySet,
    budget: &SearchBudget,
) -> Result<(CodeReport, DecisionTree)> {
    let arity = qset.arity();
    match coder {
        Coder::Gbsc if arity != 2 => Err(Error::ArityMismatch {
            expected: 2,
            found: arity,
        }),
        Coder::Migc | Coder::Gbsc => {
            let tree = migc_build(dist, qset, budget)?;
            Ok((expected_length(&tree, dist, arity)?, tree))
        }
        Coder::Huffman => huffman_dary(dist, arity),
        Coder::Shannon => {
            let report = shannon_dary(dist, arity)?;
            let tree = DecisionTree::from_codewords(report.codewords.as_deref().unwrap_or(&[]));
            Ok((report, tree))
        }
        Coder::BruteForce => brute_force_optimal(dist, qset, budget),
    }
}
