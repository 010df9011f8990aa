//! Exact minimum-expected-length strategies for finite query pools.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::coders::huffman::huffman_dary;
use crate::coders::migc::check_universe;
use crate::coders::search::SearchBudget;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::math::TIE_EPS;
use crate::partition::{distinguishability_classes, mass_of};
use crate::query::QuerySet;
use crate::report::CodeReport;
use crate::symbols::SymbolSet;
use crate::tree::{expected_length, DecisionTree, Node, Question};

struct Split {
    query: usize,
    /// `(answer, child state)` for every nonempty cell.
    children: Vec<(usize, usize)>,
}

/// Every candidate set reachable from the full universe by asking queries
/// from a fixed pool, with the splits available at each.
///
/// The graph depends only on the pool, so one graph serves any number of
/// distributions over the same universe.
pub struct SplitGraph {
    states: Vec<SymbolSet>,
    splits: Vec<Vec<Split>>,
    by_size: Vec<usize>,
}

impl SplitGraph {
    /// Explores reachable candidate sets; fails with `TooLarge` once more
    /// than `state_limit` sets have been found.
    pub fn build(qset: &QuerySet, state_limit: u64) -> Result<Self> {
        if qset.is_unconstrained() {
            return Err(Error::TooLarge { limit: state_limit });
        }
        if let Some(class) = distinguishability_classes(qset)
            .into_iter()
            .find(|c| c.len() > 1)
        {
            return Err(Error::InfeasibleQuerySet {
                candidates: class.len(),
            });
        }
        let mut index: HashMap<SymbolSet, usize> = HashMap::new();
        let mut states = Vec::new();
        let mut splits: Vec<Vec<Split>> = Vec::new();
        let root = SymbolSet::full(qset.universe_size());
        index.insert(root.clone(), 0);
        states.push(root);
        let mut next = 0;
        while next < states.len() {
            let current = states[next].clone();
            let mut options = Vec::new();
            if current.len() > 1 {
                for query in qset.queries() {
                    let cells: Vec<(usize, SymbolSet)> = query
                        .cells()
                        .iter()
                        .enumerate()
                        .map(|(a, c)| (a, c.intersection(&current)))
                        .filter(|(_, c)| !c.is_empty())
                        .collect();
                    if cells.len() < 2 {
                        continue;
                    }
                    let mut children = Vec::with_capacity(cells.len());
                    for (answer, cell) in cells {
                        let id = match index.get(&cell) {
                            Some(&id) => id,
                            None => {
                                if states.len() as u64 >= state_limit {
                                    return Err(Error::TooLarge { limit: state_limit });
                                }
                                let id = states.len();
                                index.insert(cell.clone(), id);
                                states.push(cell);
                                id
                            }
                        };
                        children.push((answer, id));
                    }
                    options.push(Split {
                        query: query.id(),
                        children,
                    });
                }
            }
            splits.push(options);
            next += 1;
        }
        let mut by_size: Vec<usize> = (0..states.len()).collect();
        by_size.sort_by_key(|&s| states[s].len());
        Ok(Self {
            states,
            splits,
            by_size,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Minimizes expected depth over all strategies in the graph.
    ///
    /// With `W(C) = p(C) * OPT(C)`, `W(C) = p(C) + min_q sum_cells W(cell)`
    /// and singletons cost nothing. Ties keep the lowest query id.
    pub fn optimal(&self, dist: &Distribution, arity: u32) -> Result<(CodeReport, DecisionTree)> {
        let n = self.states.len();
        let mut cost = alloc::vec![0.0f64; n];
        let mut choice = alloc::vec![usize::MAX; n];
        for &s in &self.by_size {
            if self.states[s].len() <= 1 {
                continue;
            }
            let mut best = f64::INFINITY;
            for (k, split) in self.splits[s].iter().enumerate() {
                let c: f64 = split.children.iter().map(|&(_, ch)| cost[ch]).sum();
                if c < best - TIE_EPS {
                    best = c;
                    choice[s] = k;
                }
            }
            cost[s] = mass_of(&self.states[s], dist) + best;
        }
        let tree = DecisionTree::new(self.node(0, &choice));
        let report = expected_length(&tree, dist, arity)?;
        Ok((report, tree))
    }

    fn node(&self, state: usize, choice: &[usize]) -> Node {
        let set = &self.states[state];
        if set.len() == 1 {
            return Node::Leaf(set.first().unwrap_or_default());
        }
        let split = &self.splits[state][choice[state]];
        let children: BTreeMap<usize, Node> = split
            .children
            .iter()
            .map(|&(answer, child)| (answer, self.node(child, choice)))
            .collect();
        Node::Internal {
            question: Question::Listed(split.query),
            children,
        }
    }
}

/// Exact optimum by memoized recursion over reachable candidate sets.
///
/// `budget.exact_state_limit` caps the number of memoized sets. For an
/// unconstrained pool the optimum is the D-ary Huffman code.
pub fn brute_force_optimal(
    dist: &Distribution,
    qset: &QuerySet,
    budget: &SearchBudget,
) -> Result<(CodeReport, DecisionTree)> {
    check_universe(dist, qset)?;
    if qset.is_unconstrained() {
        return huffman_dary(dist, qset.arity());
    }
    SplitGraph::build(qset, budget.exact_state_limit)?.optimal(dist, qset.arity())
}
