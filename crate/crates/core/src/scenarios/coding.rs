//! Average code length of MIGC against Huffman and Shannon on random
//! distributions, with no constraint on the questions.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::coders::{huffman_dary, migc_build, shannon_dary, SearchBudget};
use crate::error::{Error, Result};
use crate::math::compensated_sum;
use crate::query::QuerySet;
use crate::scenarios::rng::{sample_simplex, stream_rng};
use crate::tree::expected_length;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub samples_per_n: usize,
    pub arity: u32,
    pub seed: u64,
    pub budget: SearchBudget,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            n_min: 3,
            n_max: 12,
            samples_per_n: 1000,
            arity: 3,
            seed: 0,
            budget: SearchBudget::default(),
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_min < 2 || self.n_min > self.n_max {
            return Err(Error::InvalidConfig("need 2 <= n_min <= n_max"));
        }
        if self.samples_per_n == 0 {
            return Err(Error::InvalidConfig("samples_per_n must be at least 1"));
        }
        if self.arity < 2 {
            return Err(Error::InvalidArity(self.arity));
        }
        Ok(())
    }

    /// RNG stream of sample `index` at size `n`.
    pub fn stream(n: usize, index: usize) -> u64 {
        ((n as u64) << 32) | index as u64
    }

    /// Every `(n, index)` task of the run, in output order.
    pub fn tasks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (self.n_min..=self.n_max).flat_map(move |n| (0..self.samples_per_n).map(move |i| (n, i)))
    }
}

/// Per-symbol lengths of the three coders on one sampled distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleLengths {
    pub n: usize,
    pub index: usize,
    pub huffman: Vec<u32>,
    pub migc: Vec<u32>,
    pub shannon: Vec<u32>,
    pub expected_huffman: f64,
    pub expected_migc: f64,
    pub expected_shannon: f64,
    pub entropy: f64,
}

pub fn fig5_sample(config: &BenchConfig, n: usize, index: usize) -> Result<SampleLengths> {
    let dist = sample_simplex(
        n,
        &mut stream_rng(config.seed, BenchConfig::stream(n, index)),
    );
    let qset = QuerySet::unconstrained(config.arity, n)?;
    let (huffman, _) = huffman_dary(&dist, config.arity)?;
    let tree = migc_build(&dist, &qset, &config.budget)?;
    let migc = expected_length(&tree, &dist, config.arity)?;
    let shannon = shannon_dary(&dist, config.arity)?;
    Ok(SampleLengths {
        n,
        index,
        expected_huffman: huffman.expected_length,
        expected_migc: migc.expected_length,
        expected_shannon: shannon.expected_length,
        entropy: migc.entropy_base_d,
        huffman: huffman.per_symbol_lengths,
        migc: migc.per_symbol_lengths,
        shannon: shannon.per_symbol_lengths,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig5Row {
    pub n: usize,
    pub mean_huffman: f64,
    pub mean_migc: f64,
    pub mean_shannon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapRecord {
    pub sample: usize,
    pub symbol: usize,
    pub shannon_minus_migc: i64,
    pub migc_minus_huffman: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig5Report {
    pub rows: Vec<Fig5Row>,
    /// Per-symbol gaps for every sample at `n_max`.
    pub gaps: Vec<GapRecord>,
}

impl Fig5Report {
    pub fn shannon_gap_histogram(&self) -> BTreeMap<i64, usize> {
        histogram(self.gaps.iter().map(|g| g.shannon_minus_migc))
    }

    pub fn huffman_gap_histogram(&self) -> BTreeMap<i64, usize> {
        histogram(self.gaps.iter().map(|g| g.migc_minus_huffman))
    }
}

fn histogram(values: impl Iterator<Item = i64>) -> BTreeMap<i64, usize> {
    let mut h = BTreeMap::new();
    for v in values {
        *h.entry(v).or_insert(0) += 1;
    }
    h
}

/// Folds per-sample results into the report. Samples may arrive in any
/// order.
pub fn aggregate_fig5(config: &BenchConfig, samples: &[SampleLengths]) -> Fig5Report {
    let mut by_n: BTreeMap<usize, Vec<&SampleLengths>> = BTreeMap::new();
    for s in samples {
        by_n.entry(s.n).or_default().push(s);
    }
    let rows = by_n
        .iter_mut()
        .map(|(&n, group)| {
            group.sort_by_key(|s| s.index);
            let count = group.len() as f64;
            let mean =
                |f: fn(&SampleLengths) -> f64| compensated_sum(group.iter().map(|s| f(s))) / count;
            Fig5Row {
                n,
                mean_huffman: mean(|s| s.expected_huffman),
                mean_migc: mean(|s| s.expected_migc),
                mean_shannon: mean(|s| s.expected_shannon),
            }
        })
        .collect();
    let mut gaps = Vec::new();
    if let Some(group) = by_n.get(&config.n_max) {
        for s in group {
            for symbol in 0..s.n {
                gaps.push(GapRecord {
                    sample: s.index,
                    symbol,
                    shannon_minus_migc: i64::from(s.shannon[symbol]) - i64::from(s.migc[symbol]),
                    migc_minus_huffman: i64::from(s.migc[symbol]) - i64::from(s.huffman[symbol]),
                });
            }
        }
    }
    Fig5Report { rows, gaps }
}

pub fn bench_fig5(config: &BenchConfig) -> Result<Fig5Report> {
    config.validate()?;
    let samples = config
        .tasks()
        .map(|(n, i)| fig5_sample(config, n, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate_fig5(config, &samples))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_sample_per_n_gives_one_row_per_n() {
        let config = BenchConfig {
            n_min: 3,
            n_max: 6,
            samples_per_n: 1,
            ..BenchConfig::default()
        };
        let report = bench_fig5(&config).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert_eq!(report.gaps.len(), 6);
    }

    #[test]
    fn small_run_orders_the_coders() {
        let config = BenchConfig {
            n_min: 3,
            n_max: 8,
            samples_per_n: 20,
            ..BenchConfig::default()
        };
        let report = bench_fig5(&config).unwrap();
        for row in &report.rows {
            assert!(row.mean_huffman <= row.mean_migc + 1e-12);
            assert!(row.mean_migc <= row.mean_shannon + 1e-12);
        }
        assert!(report.gaps.iter().all(|g| g.shannon_minus_migc >= 0));
        assert_eq!(bench_fig5(&config).unwrap(), report);
    }

    #[test]
    fn rejects_bad_ranges() {
        let config = BenchConfig {
            n_min: 5,
            n_max: 4,
            ..BenchConfig::default()
        };
        assert!(matches!(bench_fig5(&config), Err(Error::InvalidConfig(_))));
    }
}
