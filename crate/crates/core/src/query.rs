//! Admissible questions and the pools they are drawn from.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::symbols::SymbolSet;

/// A question as supplied by the caller, before canonicalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawQuery {
    pub id: usize,
    pub cells: Vec<Vec<usize>>,
}

/// A canonical question: disjoint answer cells covering the whole symbol
/// universe. Answer `j` means "the symbol lies in `cells[j]`". Cells may be
/// empty, which keeps answer indices stable across queries built from a
/// fixed answer alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    id: usize,
    cells: Vec<SymbolSet>,
}

impl Query {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn cells(&self) -> &[SymbolSet] {
        &self.cells
    }

    /// Answer index that `symbol` gives.
    pub fn answer_of(&self, symbol: usize) -> Option<usize> {
        self.cells.iter().position(|c| c.contains(symbol))
    }

    /// Validates `cells`, appending the complement of their union as a
    /// final cell when it is nonempty.
    pub fn canonical(
        id: usize,
        cells: Vec<SymbolSet>,
        universe_size: usize,
        arity: u32,
    ) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::EmptyQuery { query: id });
        }
        let mut union = SymbolSet::new();
        for cell in &cells {
            if cell.bound() > universe_size {
                return Err(Error::OutOfRangeIndex {
                    index: cell.bound() - 1,
                    len: universe_size,
                });
            }
            if let Some(symbol) = union.intersection(cell).first() {
                return Err(Error::OverlappingCells { symbol });
            }
            union = union.union(cell);
        }
        let mut cells = cells;
        let rest = SymbolSet::full(universe_size).difference(&union);
        if !rest.is_empty() {
            cells.push(rest);
        }
        if cells.len() > arity as usize {
            return Err(Error::TooManyCells {
                query: id,
                cells: cells.len(),
                arity,
            });
        }
        Ok(Self { id, cells })
    }
}

/// The admissible question pool for a `D`-ary identification problem.
///
/// When `unconstrained` is set every partition of a candidate set into at
/// most `D` cells may be asked and the listed queries are ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuerySet {
    arity: u32,
    universe_size: usize,
    queries: Vec<Query>,
    unconstrained: bool,
}

impl QuerySet {
    pub fn new(arity: u32, universe_size: usize, raw: Vec<RawQuery>) -> Result<Self> {
        if arity < 2 {
            return Err(Error::InvalidArity(arity));
        }
        let mut raw = raw;
        raw.sort_by_key(|q| q.id);
        let mut queries = Vec::with_capacity(raw.len());
        for (expected, q) in raw.into_iter().enumerate() {
            if q.id != expected {
                return Err(Error::QueryIds {
                    expected,
                    found: q.id,
                });
            }
            let mut cells = Vec::with_capacity(q.cells.len());
            for cell in &q.cells {
                let mut set = SymbolSet::new();
                for &s in cell {
                    if s >= universe_size {
                        return Err(Error::OutOfRangeIndex {
                            index: s,
                            len: universe_size,
                        });
                    }
                    if set.contains(s) {
                        return Err(Error::OverlappingCells { symbol: s });
                    }
                    set.insert(s);
                }
                cells.push(set);
            }
            queries.push(Query::canonical(q.id, cells, universe_size, arity)?);
        }
        Ok(Self {
            arity,
            universe_size,
            queries,
            unconstrained: false,
        })
    }

    /// Builds a pool from already-constructed cell lists; ids are assigned
    /// in order.
    pub fn from_cells(
        arity: u32,
        universe_size: usize,
        cells: impl IntoIterator<Item = Vec<SymbolSet>>,
    ) -> Result<Self> {
        if arity < 2 {
            return Err(Error::InvalidArity(arity));
        }
        let queries = cells
            .into_iter()
            .enumerate()
            .map(|(id, c)| Query::canonical(id, c, universe_size, arity))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            arity,
            universe_size,
            queries,
            unconstrained: false,
        })
    }

    pub fn unconstrained(arity: u32, universe_size: usize) -> Result<Self> {
        if arity < 2 {
            return Err(Error::InvalidArity(arity));
        }
        Ok(Self {
            arity,
            universe_size,
            queries: Vec::new(),
            unconstrained: true,
        })
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn is_unconstrained(&self) -> bool {
        self.unconstrained
    }

    pub fn queries(&self) -> &[Query] {
        &self.queries
    }

    pub fn query(&self, id: usize) -> Option<&Query> {
        if self.unconstrained {
            return None;
        }
        self.queries.get(id)
    }

    /// Re-expresses the pool over a reduced universe. `map[i]` is the new
    /// index of old symbol `i`, or `None` if it was removed.
    pub fn restrict(&self, map: &[Option<usize>], new_size: usize) -> Result<Self> {
        if self.unconstrained {
            return Self::unconstrained(self.arity, new_size);
        }
        let cells = self.queries.iter().map(|q| {
            let mut cells: Vec<SymbolSet> = q
                .cells
                .iter()
                .map(|c| {
                    c.iter()
                        .filter_map(|s| map.get(s).copied().flatten())
                        .collect()
                })
                .collect();
            // the complement is re-derived by canonicalization
            if cells.len() > 1 && cells.last().is_some_and(|c| c.is_empty()) {
                cells.pop();
            }
            cells
        });
        Self::from_cells(self.arity, new_size, cells)
    }
}
