use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::partition::induced_partition;
use crate::query::QuerySet;
use crate::symbols::SymbolSet;
use crate::tree::{DecisionTree, Node, Question};

/// A valid tree that asks a uniformly chosen splitting question at every
/// node. Useful as a reference point for the greedy and exact coders.
pub fn random_valid_tree<R: Rng + ?Sized>(
    dist: &Distribution,
    qset: &QuerySet,
    rng: &mut R,
) -> Result<DecisionTree> {
    random_node(dist, qset, &dist.universe(), rng).map(DecisionTree::new)
}

fn random_node<R: Rng + ?Sized>(
    dist: &Distribution,
    qset: &QuerySet,
    candidates: &SymbolSet,
    rng: &mut R,
) -> Result<Node> {
    if candidates.len() == 1 {
        return Ok(Node::Leaf(candidates.first().unwrap_or_default()));
    }
    let (question, answers, cells) = if qset.is_unconstrained() {
        let d = qset.arity() as usize;
        let members = candidates.to_vec();
        let cells = loop {
            let mut cells = alloc::vec![SymbolSet::new(); d];
            for &s in &members {
                cells[rng.random_range(0..d)].insert(s);
            }
            cells.retain(|c| !c.is_empty());
            if cells.len() >= 2 {
                break cells;
            }
        };
        let answers = (0..cells.len()).collect();
        (Question::Partition(cells.clone()), answers, cells)
    } else {
        let mut splits = Vec::new();
        for q in qset.queries() {
            let view = induced_partition(q, candidates, dist)?;
            if view.is_split() {
                splits.push(view);
            }
        }
        if splits.is_empty() {
            return Err(Error::InfeasibleQuerySet {
                candidates: candidates.len(),
            });
        }
        let view = splits.swap_remove(rng.random_range(0..splits.len()));
        let id = view.source_query.unwrap_or_default();
        (Question::Listed(id), view.answers, view.cells)
    };
    let mut children = BTreeMap::new();
    for (answer, cell) in answers.into_iter().zip(&cells) {
        children.insert(answer, random_node(dist, qset, cell, rng)?);
    }
    Ok(Node::Internal { question, children })
}
