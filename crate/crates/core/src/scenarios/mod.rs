//! The benchmark scenarios: random-distribution coding comparison, two-gene
//! interval detection on DNA, and the three-outcome battleship game.
//!
//! Everything here is deterministic given a seed. Random draws come from
//! per-task ChaCha8 streams keyed by `(seed, stream)`, so callers may run
//! tasks in any order or in parallel and still get identical results.

pub mod battleship;
pub mod coding;
pub mod dna;
pub mod rng;

pub use battleship::{
    battleship_bench, battleship_layouts, battleship_play, bench_target, Advice, BattleshipBench,
    BattleshipConfig, BattleshipState, Board, Game, GameTrace, LayoutSet, Placement, Sampling,
    Shot, ShotAdvice, StopRule,
};
pub use coding::{bench_fig5, BenchConfig, Fig5Report, Fig5Row, GapRecord, SampleLengths};
pub use dna::{dna_bench, dna_instance, DnaBench, DnaInstance, DnaRow, DnaSummary};
pub use rng::{sample_simplex, sample_simplex_probs, stream_rng};

use alloc::vec::Vec;

/// Nearest-rank empirical quantile of `values` (which need not be sorted).
pub fn quantile(values: &[f64], q: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = libm::ceil(q * sorted.len() as f64) as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}
