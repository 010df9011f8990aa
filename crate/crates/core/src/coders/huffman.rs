//! D-ary Huffman coding, the optimal unconstrained baseline.

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::report::CodeReport;
use crate::symbols::SymbolSet;
use crate::tree::{expected_length, DecisionTree, Node, Question};

enum Merge {
    Symbol(usize),
    Dummy,
    Group(Vec<usize>),
}

struct Entry {
    mass: f64,
    seq: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // reversed: the heap pops the lightest, oldest entry first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .mass
            .total_cmp(&self.mass)
            .then(other.seq.cmp(&self.seq))
    }
}

/// Standard D-ary Huffman. Zero-mass dummies pad the alphabet until
/// `(N' - 1) mod (D - 1) = 0` and are stripped from the result; equal masses
/// merge in insertion order.
pub fn huffman_dary(dist: &Distribution, arity: u32) -> Result<(CodeReport, DecisionTree)> {
    if arity < 2 {
        return Err(Error::InvalidArity(arity));
    }
    let n = dist.len();
    let d = arity as usize;
    let pad = (d - 1 - (n - 1) % (d - 1)) % (d - 1);

    let mut arena: Vec<Merge> = Vec::with_capacity(2 * (n + pad));
    let mut heap = BinaryHeap::new();
    for s in 0..n {
        heap.push(Entry {
            mass: dist.prob(s),
            seq: arena.len(),
        });
        arena.push(Merge::Symbol(s));
    }
    for _ in 0..pad {
        heap.push(Entry {
            mass: 0.0,
            seq: arena.len(),
        });
        arena.push(Merge::Dummy);
    }
    while heap.len() > 1 {
        let mut mass = 0.0;
        let mut group = Vec::with_capacity(d);
        for _ in 0..d {
            let Some(e) = heap.pop() else { break };
            mass += e.mass;
            group.push(e.seq);
        }
        heap.push(Entry {
            mass,
            seq: arena.len(),
        });
        arena.push(Merge::Group(group));
    }
    let root = heap.pop().map_or(0, |e| e.seq);
    let tree = DecisionTree::new(to_node(&arena, root));
    let report = expected_length(&tree, dist, arity)?;
    Ok((report, tree))
}

fn leaves(arena: &[Merge], at: usize, out: &mut SymbolSet) {
    match &arena[at] {
        Merge::Symbol(s) => out.insert(*s),
        Merge::Dummy => {}
        Merge::Group(g) => g.iter().for_each(|&c| leaves(arena, c, out)),
    }
}

fn to_node(arena: &[Merge], at: usize) -> Node {
    match &arena[at] {
        Merge::Symbol(s) => Node::Leaf(*s),
        Merge::Dummy => unreachable!("dummies are never roots"),
        Merge::Group(group) => {
            let real: Vec<usize> = group
                .iter()
                .copied()
                .filter(|&c| !matches!(arena[c], Merge::Dummy))
                .collect();
            let cells = real
                .iter()
                .map(|&c| {
                    let mut s = SymbolSet::new();
                    leaves(arena, c, &mut s);
                    s
                })
                .collect();
            let children: BTreeMap<usize, Node> = real
                .iter()
                .enumerate()
                .map(|(i, &c)| (i, to_node(arena, c)))
                .collect();
            Node::Internal {
                question: Question::Partition(cells),
                children,
            }
        }
    }
}
