//! Locating two genes, each on its own exon, with contiguous interval
//! probes that report which of the genes the interval contains.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::coders::{migc_build, SearchBudget, SplitGraph};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::math::compensated_sum;
use crate::query::QuerySet;
use crate::scenarios::quantile;
use crate::scenarios::rng::{sample_simplex_probs, stream_rng};
use crate::symbols::SymbolSet;
use crate::tree::expected_length;

/// Probe readouts, in answer-index order.
pub const ANSWERS: [&str; 4] = ["A only", "B only", "both", "neither"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnaInstance {
    pub exons: usize,
    /// `(a, b)`: gene A on exon `a`, gene B on exon `b`, `a != b`.
    pub targets: Vec<(usize, usize)>,
    /// Inclusive exon ranges `[i, j]`; query `k` probes `intervals[k]`.
    pub intervals: Vec<(usize, usize)>,
    /// Four-answer pool over `targets`.
    pub qset: QuerySet,
}

fn readout(interval: (usize, usize), target: (usize, usize)) -> usize {
    let inside = |e: usize| interval.0 <= e && e <= interval.1;
    match (inside(target.0), inside(target.1)) {
        (true, false) => 0,
        (false, true) => 1,
        (true, true) => 2,
        (false, false) => 3,
    }
}

pub fn dna_instance(exons: usize) -> Result<DnaInstance> {
    if exons < 2 {
        return Err(Error::InvalidConfig("need at least two exons"));
    }
    let targets: Vec<(usize, usize)> = (0..exons)
        .flat_map(|a| (0..exons).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let intervals: Vec<(usize, usize)> = (0..exons)
        .flat_map(|i| (i..exons).map(move |j| (i, j)))
        .collect();
    let qset = QuerySet::from_cells(
        4,
        targets.len(),
        intervals.iter().map(|&iv| {
            let mut cells = alloc::vec![SymbolSet::new(); 4];
            for (t, &target) in targets.iter().enumerate() {
                cells[readout(iv, target)].insert(t);
            }
            cells
        }),
    )?;
    Ok(DnaInstance {
        exons,
        targets,
        intervals,
        qset,
    })
}

impl DnaInstance {
    /// `"A1B2"` style labels, exons numbered from 1.
    pub fn labels(&self) -> Vec<String> {
        self.targets
            .iter()
            .map(|&(a, b)| format!("A{}B{}", a + 1, b + 1))
            .collect()
    }

    pub fn distribution(&self, probs: Vec<f64>) -> Result<Distribution> {
        Distribution::new(self.labels(), probs)
    }

    /// Binary baseline pool: for each interval, one probe asking whether it
    /// contains gene A and one asking whether it contains gene B. Query
    /// `2k` asks about A in `intervals[k]`, `2k + 1` about B.
    pub fn binary_query_set(&self) -> Result<QuerySet> {
        let per_gene = |iv: (usize, usize), gene: usize| {
            let hit: SymbolSet = self
                .targets
                .iter()
                .enumerate()
                .filter(|(_, t)| {
                    let e = if gene == 0 { t.0 } else { t.1 };
                    iv.0 <= e && e <= iv.1
                })
                .map(|(i, _)| i)
                .collect();
            alloc::vec![hit]
        };
        QuerySet::from_cells(
            2,
            self.targets.len(),
            self.intervals
                .iter()
                .flat_map(|&iv| [per_gene(iv, 0), per_gene(iv, 1)]),
        )
    }
}

/// Expected number of detections for one sampled target distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DnaRow {
    pub sample: usize,
    pub migc: f64,
    pub bruteforce: f64,
    pub gbsc: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DnaSummary {
    pub samples: usize,
    pub mean_migc: f64,
    pub mean_bruteforce: f64,
    pub mean_gbsc: f64,
    /// Nearest-rank 95th percentile of `migc - bruteforce`.
    pub gap_p95: f64,
    pub gap_max: f64,
}

/// Shared, distribution-independent state of a DNA benchmark run.
pub struct DnaBench {
    pub instance: DnaInstance,
    graph: SplitGraph,
    binary: QuerySet,
    seed: u64,
    budget: SearchBudget,
}

impl DnaBench {
    pub fn new(exons: usize, seed: u64, budget: SearchBudget) -> Result<Self> {
        let instance = dna_instance(exons)?;
        let graph = SplitGraph::build(&instance.qset, budget.exact_state_limit)?;
        let binary = instance.binary_query_set()?;
        Ok(Self {
            instance,
            graph,
            binary,
            seed,
            budget,
        })
    }

    /// Number of candidate sets the exact oracle works over.
    pub fn oracle_states(&self) -> usize {
        self.graph.len()
    }

    pub fn sample_distribution(&self, index: usize) -> Result<Distribution> {
        let mut rng = stream_rng(self.seed, index as u64);
        let probs = sample_simplex_probs(self.instance.targets.len(), &mut rng);
        self.instance.distribution(probs)
    }

    pub fn sample(&self, index: usize) -> Result<DnaRow> {
        let dist = self.sample_distribution(index)?;
        let migc = migc_build(&dist, &self.instance.qset, &self.budget)?;
        let migc = expected_length(&migc, &dist, 4)?.expected_length;
        let (oracle, _) = self.graph.optimal(&dist, 4)?;
        let gbsc = migc_build(&dist, &self.binary, &self.budget)?;
        let gbsc = expected_length(&gbsc, &dist, 2)?.expected_length;
        Ok(DnaRow {
            sample: index,
            migc,
            bruteforce: oracle.expected_length,
            gbsc,
        })
    }
}

pub fn summarize(rows: &[DnaRow]) -> DnaSummary {
    let count = rows.len() as f64;
    let mean = |f: fn(&DnaRow) -> f64| compensated_sum(rows.iter().map(f)) / count;
    let gaps: Vec<f64> = rows.iter().map(|r| r.migc - r.bruteforce).collect();
    DnaSummary {
        samples: rows.len(),
        mean_migc: mean(|r| r.migc),
        mean_bruteforce: mean(|r| r.bruteforce),
        mean_gbsc: mean(|r| r.gbsc),
        gap_p95: quantile(&gaps, 0.95),
        gap_max: gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

pub fn dna_bench(
    exons: usize,
    samples: usize,
    seed: u64,
    budget: SearchBudget,
) -> Result<(Vec<DnaRow>, DnaSummary)> {
    if samples == 0 {
        return Err(Error::InvalidConfig("need at least one sample"));
    }
    let bench = DnaBench::new(exons, seed, budget)?;
    let rows = (0..samples)
        .map(|i| bench.sample(i))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&rows);
    Ok((rows, summary))
}
