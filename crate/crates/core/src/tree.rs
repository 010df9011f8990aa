//! Decision trees (querying strategies), their validation and their cost.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::partition::induced_partition;
use crate::query::QuerySet;
use crate::report::CodeReport;
use crate::symbols::SymbolSet;

/// What an internal node asks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Question {
    /// A query from the pool, by id. Children are keyed by the query's
    /// answer index.
    Listed(usize),
    /// An ad hoc partition of the node's candidates (unconstrained pools
    /// only). Children are keyed by cell position.
    Partition(Vec<SymbolSet>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Leaf(usize),
    Internal {
        question: Question,
        children: BTreeMap<usize, Node>,
    },
}

impl Node {
    pub fn child(&self, answer: usize) -> Option<&Node> {
        match self {
            Node::Leaf(_) => None,
            Node::Internal { children, .. } => children.get(&answer),
        }
    }

    /// Symbols at the leaves below this node.
    pub fn symbols(&self) -> SymbolSet {
        let mut out = SymbolSet::new();
        self.for_each_leaf(&mut Vec::new(), &mut |s, _| out.insert(s));
        out
    }

    fn for_each_leaf(&self, path: &mut Vec<u32>, f: &mut impl FnMut(usize, &[u32])) {
        match self {
            Node::Leaf(s) => f(*s, path),
            Node::Internal { children, .. } => {
                for (&answer, child) in children {
                    path.push(answer as u32);
                    child.for_each_leaf(path, f);
                    path.pop();
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTree {
    pub root: Node,
}

impl DecisionTree {
    pub fn new(root: Node) -> Self {
        Self { root }
    }

    /// `(symbol, answer path)` for every leaf, in depth-first answer order.
    pub fn leaf_paths(&self) -> Vec<(usize, Vec<u32>)> {
        let mut out = Vec::new();
        self.root
            .for_each_leaf(&mut Vec::new(), &mut |s, p| out.push((s, p.to_vec())));
        out
    }

    pub fn internal_nodes(&self) -> usize {
        fn count(n: &Node) -> usize {
            match n {
                Node::Leaf(_) => 0,
                Node::Internal { children, .. } => 1 + children.values().map(count).sum::<usize>(),
            }
        }
        count(&self.root)
    }

    /// Builds the code tree of a prefix-free codeword list. Internal nodes
    /// ask ad hoc partitions; a node whose codewords all share the next digit
    /// gets a single child.
    pub fn from_codewords(codewords: &[Vec<u32>]) -> Self {
        fn build(symbols: &[usize], codewords: &[Vec<u32>], depth: usize) -> Node {
            if symbols.len() == 1 && codewords[symbols[0]].len() == depth {
                return Node::Leaf(symbols[0]);
            }
            let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
            for &s in symbols {
                debug_assert!(codewords[s].len() > depth, "codewords are not prefix-free");
                groups.entry(codewords[s][depth]).or_default().push(s);
            }
            let cells = groups
                .values()
                .map(|g| g.iter().copied().collect())
                .collect();
            let children = groups
                .values()
                .enumerate()
                .map(|(i, g)| (i, build(g, codewords, depth + 1)))
                .collect();
            Node::Internal {
                question: Question::Partition(cells),
                children,
            }
        }
        let symbols: Vec<usize> = (0..codewords.len()).collect();
        Self::new(build(&symbols, codewords, 0))
    }
}

/// First problem found by [`tree_validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeViolation {
    SymbolOutOfRange(usize),
    DuplicateLeaf(usize),
    MissingSymbol(usize),
    /// A leaf is reached while more than its own symbol is still possible.
    LeafMismatch {
        symbol: usize,
        candidates: SymbolSet,
    },
    UnknownQuery(usize),
    /// An ad hoc partition used with a constrained query pool.
    NotAdmissible,
    ChildrenMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },
    BadPartition,
}

impl fmt::Display for TreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeViolation::SymbolOutOfRange(s) => write!(f, "leaf symbol {s} out of range"),
            TreeViolation::DuplicateLeaf(s) => {
                write!(f, "symbol {s} appears at more than one leaf")
            }
            TreeViolation::MissingSymbol(s) => write!(f, "symbol {s} has no leaf"),
            TreeViolation::LeafMismatch { symbol, candidates } => {
                write!(f, "leaf {symbol} reached with candidates {candidates:?}")
            }
            TreeViolation::UnknownQuery(q) => write!(f, "query {q} is not in the query set"),
            TreeViolation::NotAdmissible => {
                write!(f, "ad hoc partition used with a constrained query set")
            }
            TreeViolation::ChildrenMismatch { expected, found } => {
                write!(f, "children {found:?} do not match answers {expected:?}")
            }
            TreeViolation::BadPartition => {
                write!(
                    f,
                    "partition does not split the node's candidates into at most D cells"
                )
            }
        }
    }
}

impl core::error::Error for TreeViolation {}

fn check_leaves(tree: &DecisionTree, n: usize) -> core::result::Result<(), TreeViolation> {
    let mut seen = alloc::vec![false; n];
    for (s, _) in tree.leaf_paths() {
        match seen.get_mut(s) {
            None => return Err(TreeViolation::SymbolOutOfRange(s)),
            Some(true) => return Err(TreeViolation::DuplicateLeaf(s)),
            Some(flag) => *flag = true,
        }
    }
    match seen.iter().position(|&b| !b) {
        Some(s) => Err(TreeViolation::MissingSymbol(s)),
        None => Ok(()),
    }
}

/// Checks that `tree` identifies every symbol of `dist` using only
/// questions admissible under `qset`.
pub fn tree_validate(
    tree: &DecisionTree,
    dist: &Distribution,
    qset: &QuerySet,
) -> core::result::Result<(), TreeViolation> {
    check_leaves(tree, dist.len())?;
    validate_node(&tree.root, &dist.universe(), dist, qset)
}

fn validate_node(
    node: &Node,
    candidates: &SymbolSet,
    dist: &Distribution,
    qset: &QuerySet,
) -> core::result::Result<(), TreeViolation> {
    let (question, children) = match node {
        Node::Leaf(s) => {
            return if candidates.len() == 1 && candidates.contains(*s) {
                Ok(())
            } else {
                Err(TreeViolation::LeafMismatch {
                    symbol: *s,
                    candidates: candidates.clone(),
                })
            };
        }
        Node::Internal { question, children } => (question, children),
    };
    let (answers, cells) = match question {
        Question::Listed(id) => {
            let query = qset.query(*id).ok_or(TreeViolation::UnknownQuery(*id))?;
            let view = induced_partition(query, candidates, dist)
                .map_err(|_| TreeViolation::BadPartition)?;
            (view.answers, view.cells)
        }
        Question::Partition(cells) => {
            if !qset.is_unconstrained() {
                return Err(TreeViolation::NotAdmissible);
            }
            let mut union = SymbolSet::new();
            for cell in cells {
                if cell.is_empty() || !union.is_disjoint(cell) {
                    return Err(TreeViolation::BadPartition);
                }
                union = union.union(cell);
            }
            if cells.len() > qset.arity() as usize || &union != candidates {
                return Err(TreeViolation::BadPartition);
            }
            ((0..cells.len()).collect(), cells.clone())
        }
    };
    let found: Vec<usize> = children.keys().copied().collect();
    if found != answers {
        return Err(TreeViolation::ChildrenMismatch {
            expected: answers,
            found,
        });
    }
    for (cell, child) in cells.iter().zip(children.values()) {
        validate_node(child, cell, dist, qset)?;
    }
    Ok(())
}

/// Per-symbol depths and the expected number of queries.
pub fn expected_length(tree: &DecisionTree, dist: &Distribution, arity: u32) -> Result<CodeReport> {
    check_leaves(tree, dist.len()).map_err(Error::InvalidTree)?;
    let mut codewords = alloc::vec![Vec::new(); dist.len()];
    for (s, path) in tree.leaf_paths() {
        codewords[s] = path;
    }
    let lengths = codewords.iter().map(|c| c.len() as u32).collect();
    Ok(CodeReport::from_lengths(dist, arity, lengths).with_codewords(codewords))
}
