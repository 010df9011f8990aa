//! Top-down greedy construction: every node asks the admissible question
//! whose answer has maximum entropy.

use alloc::collections::BTreeMap;

use crate::coders::search::{optimal_partition_unconstrained, SearchBudget};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::math::{entropy_nats, TIE_EPS};
use crate::partition::{induced_partition, PartitionView};
use crate::query::QuerySet;
use crate::symbols::SymbolSet;
use crate::tree::{DecisionTree, Node, Question};

/// Builds the MIGC tree. With `D = 2` this is greedy binary separation.
pub fn migc_build(
    dist: &Distribution,
    qset: &QuerySet,
    budget: &SearchBudget,
) -> Result<DecisionTree> {
    check_universe(dist, qset)?;
    build_node(dist, qset, budget, &dist.universe()).map(DecisionTree::new)
}

pub(crate) fn check_universe(dist: &Distribution, qset: &QuerySet) -> Result<()> {
    if qset.universe_size() != dist.len() {
        return Err(Error::LengthMismatch {
            labels: dist.len(),
            probs: qset.universe_size(),
        });
    }
    Ok(())
}

fn build_node(
    dist: &Distribution,
    qset: &QuerySet,
    budget: &SearchBudget,
    candidates: &SymbolSet,
) -> Result<Node> {
    if candidates.len() == 1 {
        return Ok(Node::Leaf(candidates.first().unwrap_or_default()));
    }
    let split = best_split(dist, qset, budget, candidates)?;
    let question = match split.source_query {
        Some(id) => Question::Listed(id),
        None => Question::Partition(split.cells.clone()),
    };
    let mut children = BTreeMap::new();
    for (&answer, cell) in split.answers.iter().zip(&split.cells) {
        children.insert(answer, build_node(dist, qset, budget, cell)?);
    }
    Ok(Node::Internal { question, children })
}

/// The maximum-entropy admissible split of `candidates`. Among listed
/// queries, ties go to the lowest id; queries that leave every candidate
/// in one cell are never chosen.
pub fn best_split(
    dist: &Distribution,
    qset: &QuerySet,
    budget: &SearchBudget,
    candidates: &SymbolSet,
) -> Result<PartitionView> {
    if qset.is_unconstrained() {
        return optimal_partition_unconstrained(dist, candidates, qset.arity(), budget)
            .map(|found| found.view);
    }
    let mut best: Option<(f64, PartitionView)> = None;
    for query in qset.queries() {
        let view = induced_partition(query, candidates, dist)?;
        if !view.is_split() {
            continue;
        }
        let h = entropy_nats(&view.masses);
        if best.as_ref().is_none_or(|(b, _)| h > b + TIE_EPS) {
            best = Some((h, view));
        }
    }
    best.map(|(_, v)| v).ok_or(Error::InfeasibleQuerySet {
        candidates: candidates.len(),
    })
}
