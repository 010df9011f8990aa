//! Total probability, partition entropy and the answer distribution a
//! question induces on a candidate set.

use alloc::vec::Vec;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::math::{compensated_sum, entropy};
use crate::query::{Query, QuerySet};
use crate::symbols::SymbolSet;

/// A question re-interpreted on a candidate set.
///
/// Only nonempty cells are kept; `answers[j]` is the answer index (position
/// in the source query) that leads to `cells[j]`, and `masses[j]` is the
/// probability of that answer conditioned on the candidate set.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionView {
    pub cells: Vec<SymbolSet>,
    pub answers: Vec<usize>,
    pub masses: Vec<f64>,
    pub source_query: Option<usize>,
}

impl PartitionView {
    /// Entropy of the answer distribution.
    pub fn entropy(&self, base: f64) -> f64 {
        entropy(&self.masses, base)
    }

    pub fn is_split(&self) -> bool {
        self.cells.len() >= 2
    }
}

pub fn total_probability(cell: &SymbolSet, dist: &Distribution) -> Result<f64> {
    if cell.bound() > dist.len() {
        return Err(Error::OutOfRangeIndex {
            index: cell.bound() - 1,
            len: dist.len(),
        });
    }
    Ok(mass_of(cell, dist))
}

pub(crate) fn mass_of(cell: &SymbolSet, dist: &Distribution) -> f64 {
    compensated_sum(cell.iter().map(|i| dist.prob(i)))
}

/// `-sum_j p(U_j) log p(U_j)` with the cell masses normalized over the union
/// of the cells.
pub fn partition_entropy(cells: &[SymbolSet], dist: &Distribution, base: f64) -> Result<f64> {
    let mut union = SymbolSet::new();
    let mut masses = Vec::with_capacity(cells.len());
    for cell in cells {
        if let Some(symbol) = union.intersection(cell).first() {
            return Err(Error::OverlappingCells { symbol });
        }
        union = union.union(cell);
        masses.push(total_probability(cell, dist)?);
    }
    Ok(entropy(&masses, base))
}

pub fn induced_partition(
    query: &Query,
    candidates: &SymbolSet,
    dist: &Distribution,
) -> Result<PartitionView> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let total = total_probability(candidates, dist)?;
    let mut view = PartitionView {
        cells: Vec::new(),
        answers: Vec::new(),
        masses: Vec::new(),
        source_query: Some(query.id()),
    };
    for (answer, cell) in query.cells().iter().enumerate() {
        let part = cell.intersection(candidates);
        if part.is_empty() {
            continue;
        }
        view.masses.push(mass_of(&part, dist) / total);
        view.cells.push(part);
        view.answers.push(answer);
    }
    Ok(view)
}

/// `I(X;Q) = H(X) - sum_j P(Q=j) H(X | Q=j)`, evaluated directly on the
/// distribution conditioned on `candidates`.
pub fn information_gain(
    query: &Query,
    candidates: &SymbolSet,
    dist: &Distribution,
    base: f64,
) -> Result<f64> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let total = total_probability(candidates, dist)?;
    let conditional: Vec<f64> = candidates.iter().map(|i| dist.prob(i) / total).collect();
    let h_x = entropy(&conditional, base);
    let mut remainder = Vec::with_capacity(query.cells().len());
    for cell in query.cells() {
        let members: Vec<f64> = cell
            .intersection(candidates)
            .iter()
            .map(|i| dist.prob(i) / total)
            .collect();
        let p_answer = compensated_sum(members.iter().copied());
        if p_answer > 0.0 {
            remainder.push(p_answer * entropy(&members, base));
        }
    }
    Ok(h_x - compensated_sum(remainder))
}

/// Groups symbols that no query in the pool can tell apart. Identification
/// is possible iff every class is a singleton.
pub fn distinguishability_classes(qset: &QuerySet) -> Vec<SymbolSet> {
    let n = qset.universe_size();
    if qset.is_unconstrained() {
        return (0..n).map(SymbolSet::singleton).collect();
    }
    let mut classes = if n == 0 {
        Vec::new()
    } else {
        alloc::vec![SymbolSet::full(n)]
    };
    for query in qset.queries() {
        classes = classes
            .iter()
            .flat_map(|class| {
                query
                    .cells()
                    .iter()
                    .map(move |cell| class.intersection(cell))
                    .filter(|part| !part.is_empty())
            })
            .collect();
    }
    classes.sort_by_key(|c| c.first());
    classes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::RawQuery;
    use alloc::vec;

    fn example_one() -> (Distribution, QuerySet) {
        let dist = Distribution::from_probs(vec![0.1, 0.4, 0.2, 0.3]).unwrap();
        let qs = QuerySet::new(
            2,
            4,
            vec![
                RawQuery {
                    id: 0,
                    cells: vec![vec![0, 1]],
                },
                RawQuery {
                    id: 1,
                    cells: vec![vec![1, 2]],
                },
                RawQuery {
                    id: 2,
                    cells: vec![vec![2, 3]],
                },
            ],
        )
        .unwrap();
        (dist, qs)
    }

    fn set(v: &[usize]) -> SymbolSet {
        v.iter().copied().collect()
    }

    #[test]
    fn total_probability_examples() {
        let (dist, _) = example_one();
        assert!((total_probability(&set(&[1, 2]), &dist).unwrap() - 0.6).abs() < 1e-12);
        assert_eq!(total_probability(&SymbolSet::new(), &dist).unwrap(), 0.0);
        assert!((total_probability(&dist.universe(), &dist).unwrap() - 1.0).abs() < 1e-9);
        assert!(matches!(
            total_probability(&set(&[4]), &dist),
            Err(Error::OutOfRangeIndex { index: 4, len: 4 })
        ));
    }

    #[test]
    fn partition_entropy_examples() {
        let (dist, _) = example_one();
        // masses (0.1, 0.4, 0.5): -(0.1 lg 0.1 + 0.4 lg 0.4 + 0.5 lg 0.5)
        let oracle = -(0.1 * libm::log2(0.1) + 0.4 * libm::log2(0.4) + 0.5 * libm::log2(0.5));
        let h = partition_entropy(&[set(&[0]), set(&[1]), set(&[2, 3])], &dist, 2.0).unwrap();
        assert!((h - oracle).abs() < 1e-12);
        assert!((h - 1.3610).abs() < 1e-4);

        let u4 = Distribution::uniform(4).unwrap();
        let h = partition_entropy(&[set(&[0, 1]), set(&[2, 3])], &u4, 2.0).unwrap();
        assert!((h - 1.0).abs() < 1e-12);

        let u3 = Distribution::uniform(3).unwrap();
        let h = partition_entropy(&[set(&[0]), set(&[1]), set(&[2])], &u3, 3.0).unwrap();
        assert!((h - 1.0).abs() < 1e-12);

        assert_eq!(
            partition_entropy(&[set(&[0, 1]), set(&[1])], &u3, 3.0),
            Err(Error::OverlappingCells { symbol: 1 })
        );
    }

    #[test]
    fn induced_partition_examples() {
        let (dist, qs) = example_one();
        let v = induced_partition(qs.query(0).unwrap(), &dist.universe(), &dist).unwrap();
        assert_eq!(v.cells, vec![set(&[0, 1]), set(&[2, 3])]);
        assert!((v.masses[0] - 0.5).abs() < 1e-12 && (v.masses[1] - 0.5).abs() < 1e-12);

        let v = induced_partition(qs.query(1).unwrap(), &set(&[0, 1]), &dist).unwrap();
        assert_eq!(v.cells, vec![set(&[1]), set(&[0])]);
        assert_eq!(v.answers, vec![0, 1]);
        assert!((v.masses[0] - 0.8).abs() < 1e-12 && (v.masses[1] - 0.2).abs() < 1e-12);

        let v = induced_partition(qs.query(2).unwrap(), &set(&[0, 1]), &dist).unwrap();
        assert_eq!(v.cells, vec![set(&[0, 1])]);
        assert_eq!(v.masses, vec![1.0]);
        assert_eq!(v.answers, vec![1]);

        assert_eq!(
            induced_partition(qs.query(0).unwrap(), &SymbolSet::new(), &dist),
            Err(Error::EmptyCandidates)
        );
    }

    #[test]
    fn information_gain_examples() {
        let (dist, qs) = example_one();
        let ig = information_gain(qs.query(0).unwrap(), &dist.universe(), &dist, 2.0).unwrap();
        assert!((ig - 1.0).abs() < 1e-12);
        let ig = information_gain(qs.query(2).unwrap(), &set(&[0, 1]), &dist, 2.0).unwrap();
        assert!(ig.abs() < 1e-12);

        let u9 = Distribution::uniform(9).unwrap();
        let qs9 = QuerySet::new(
            3,
            9,
            vec![RawQuery {
                id: 0,
                cells: vec![vec![0, 1, 2], vec![3, 4, 5]],
            }],
        )
        .unwrap();
        let ig = information_gain(qs9.query(0).unwrap(), &u9.universe(), &u9, 3.0).unwrap();
        assert!((ig - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distinguishability_examples() {
        let (_, qs) = example_one();
        let classes = distinguishability_classes(&qs);
        assert_eq!(
            classes,
            (0..4).map(SymbolSet::singleton).collect::<Vec<_>>()
        );

        let empty = QuerySet::new(2, 3, vec![]).unwrap();
        assert_eq!(distinguishability_classes(&empty), vec![set(&[0, 1, 2])]);

        let free = QuerySet::unconstrained(3, 3).unwrap();
        assert!(distinguishability_classes(&free)
            .iter()
            .all(|c| c.len() == 1));
    }
}
