//! Maximum-entropy partition of a candidate set into at most `D` cells,
//! used by MIGC when every partition is an admissible question.

use alloc::vec::Vec;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::math::TIE_EPS;
use crate::partition::{mass_of, PartitionView};
use crate::symbols::SymbolSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exact,
    Heuristic,
    /// Exact when `D^k` fits the state limit, heuristic otherwise.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub exact_state_limit: u64,
    pub mode: SearchMode,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            exact_state_limit: 1 << 24,
            mode: SearchMode::Auto,
        }
    }
}

impl SearchBudget {
    pub fn new(exact_state_limit: u64, mode: SearchMode) -> Self {
        Self {
            exact_state_limit: exact_state_limit.max(1),
            mode,
        }
    }

    pub fn exact() -> Self {
        Self::new(u64::MAX, SearchMode::Exact)
    }

    pub fn heuristic() -> Self {
        Self::new(1 << 24, SearchMode::Heuristic)
    }

    /// Decides whether `k` symbols into `arity` cells are searched exactly.
    pub fn use_exact(&self, k: usize, arity: u32) -> Result<bool> {
        let states = u64::from(arity).checked_pow(k as u32).unwrap_or(u64::MAX);
        match self.mode {
            SearchMode::Heuristic => Ok(false),
            SearchMode::Auto => Ok(states <= self.exact_state_limit),
            SearchMode::Exact if states <= self.exact_state_limit => Ok(true),
            SearchMode::Exact => Err(Error::BudgetExceeded {
                states,
                limit: self.exact_state_limit,
            }),
        }
    }
}

/// A partition found by the search, tagged with how it was found.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSearch {
    pub view: PartitionView,
    pub exact: bool,
}

/// Splits `candidates` into at most `arity` cells of maximum entropy under
/// the conditional distribution.
///
/// Symbols are visited in descending mass order (ties by index) and cells are
/// numbered in order of first use, so among equally good partitions the one
/// with the lexicographically smallest assignment vector wins.
pub fn optimal_partition_unconstrained(
    dist: &Distribution,
    candidates: &SymbolSet,
    arity: u32,
    budget: &SearchBudget,
) -> Result<PartitionSearch> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    if arity < 2 {
        return Err(Error::InvalidArity(arity));
    }
    if candidates.bound() > dist.len() {
        return Err(Error::OutOfRangeIndex {
            index: candidates.bound() - 1,
            len: dist.len(),
        });
    }
    let mut order: Vec<usize> = candidates.to_vec();
    order.sort_by(|&a, &b| dist.prob(b).total_cmp(&dist.prob(a)).then(a.cmp(&b)));
    let total = mass_of(candidates, dist);
    let masses: Vec<f64> = order.iter().map(|&s| dist.prob(s) / total).collect();

    let exact = budget.use_exact(order.len(), arity)?;
    let assignment = if exact {
        max_entropy_assignment(&masses, arity)
    } else {
        balanced_assignment(&masses, arity)
    };

    let cell_count = assignment.iter().max().map_or(0, |&c| c + 1);
    let mut cells = alloc::vec![SymbolSet::new(); cell_count];
    for (&symbol, &cell) in order.iter().zip(&assignment) {
        cells[cell].insert(symbol);
    }
    let masses = cells.iter().map(|c| mass_of(c, dist) / total).collect();
    Ok(PartitionSearch {
        view: PartitionView {
            answers: (0..cells.len()).collect(),
            cells,
            masses,
            source_query: None,
        },
        exact,
    })
}

fn plogp(x: f64) -> f64 {
    if x > 0.0 {
        -x * libm::log(x)
    } else {
        0.0
    }
}

/// Greedy balanced loading: each mass, in the given order, goes to the
/// currently lightest cell (lowest index on ties).
pub fn balanced_assignment(masses: &[f64], arity: u32) -> Vec<usize> {
    let cells = (arity as usize).min(masses.len());
    let mut loads = alloc::vec![0.0f64; cells];
    masses
        .iter()
        .map(|&m| {
            let mut best = 0;
            for c in 1..cells {
                if loads[c] < loads[best] {
                    best = c;
                }
            }
            loads[best] += m;
            best
        })
        .collect()
}

/// Exact maximum-entropy assignment of `masses` (visited in the given order)
/// to at most `arity` cells, by branch and bound.
///
/// The bound spreads the unassigned mass over the current cells by water
/// filling, which maximizes the concave objective over fractional
/// assignments. Cells are opened in order, so the returned vector is
/// canonical: cell `c` first appears before cell `c + 1`.
pub fn max_entropy_assignment(masses: &[f64], arity: u32) -> Vec<usize> {
    let k = masses.len();
    if k == 0 {
        return Vec::new();
    }
    let cells = (arity as usize).min(k);
    let mut suffix = alloc::vec![0.0; k + 1];
    for i in (0..k).rev() {
        suffix[i] = suffix[i + 1] + masses[i];
    }
    let best = balanced_assignment(masses, arity);
    let mut search = BranchAndBound {
        masses,
        suffix,
        cells,
        loads: alloc::vec![0.0; cells],
        scratch: Vec::with_capacity(cells),
        assign: alloc::vec![0; k],
        best_value: assignment_value(masses, &best, cells),
        best,
    };
    search.dfs(0, 0);
    search.best
}

fn assignment_value(masses: &[f64], assign: &[usize], cells: usize) -> f64 {
    let mut loads = alloc::vec![0.0; cells];
    for (&m, &c) in masses.iter().zip(assign) {
        loads[c] += m;
    }
    loads.iter().map(|&l| plogp(l)).sum()
}

struct BranchAndBound<'a> {
    masses: &'a [f64],
    suffix: Vec<f64>,
    cells: usize,
    loads: Vec<f64>,
    scratch: Vec<f64>,
    assign: Vec<usize>,
    best: Vec<usize>,
    best_value: f64,
}

impl BranchAndBound<'_> {
    fn dfs(&mut self, i: usize, used: usize) {
        if i == self.masses.len() {
            let value: f64 = self.loads.iter().map(|&l| plogp(l)).sum();
            if value > self.best_value + TIE_EPS
                || (value >= self.best_value - TIE_EPS && self.assign < self.best)
            {
                self.best_value = self.best_value.max(value);
                self.best.copy_from_slice(&self.assign);
            }
            return;
        }
        if self.upper_bound(self.suffix[i]) < self.best_value - TIE_EPS {
            return;
        }
        let open = (used + 1).min(self.cells);
        for c in 0..open {
            let old = self.loads[c];
            self.loads[c] = old + self.masses[i];
            self.assign[i] = c;
            self.dfs(i + 1, used.max(c + 1));
            self.loads[c] = old;
        }
    }

    fn upper_bound(&mut self, remaining: f64) -> f64 {
        let levels = &mut self.scratch;
        levels.clear();
        levels.extend_from_slice(&self.loads);
        levels.sort_by(f64::total_cmp);
        // raise the j lowest cells to a common water level
        let mut prefix = 0.0;
        let mut filled = 0;
        for j in 0..levels.len() {
            if j > 0 && (j as f64) * levels[j] - prefix > remaining {
                break;
            }
            prefix += levels[j];
            filled = j + 1;
        }
        let level = (prefix + remaining) / filled as f64;
        (filled as f64) * plogp(level) + levels[filled..].iter().map(|&l| plogp(l)).sum::<f64>()
    }
}
