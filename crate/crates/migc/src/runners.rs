//! The scenario benchmarks fanned out over a rayon pool. Each task draws
//! from its own RNG stream and results are collected in task order, so the
//! output matches the serial versions in `migc_core::scenarios` exactly.

use migc_core::scenarios::battleship::bench_target;
use migc_core::scenarios::coding::{aggregate_fig5, fig5_sample};
use migc_core::scenarios::dna::summarize;
use migc_core::scenarios::{
    battleship_layouts, battleship_play, BattleshipBench, BattleshipConfig, BenchConfig, DnaBench,
    DnaRow, DnaSummary, Fig5Report, Game,
};
use migc_core::{Error, Result, SearchBudget};
use rayon::prelude::*;

pub fn fig5(config: &BenchConfig) -> Result<Fig5Report> {
    config.validate()?;
    let tasks: Vec<(usize, usize)> = config.tasks().collect();
    let samples = tasks
        .par_iter()
        .map(|&(n, i)| fig5_sample(config, n, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate_fig5(config, &samples))
}

pub fn dna(
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
        .into_par_iter()
        .map(|i| bench.sample(i))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&rows);
    Ok((rows, summary))
}

pub fn battleship(config: &BattleshipConfig, games: usize) -> Result<BattleshipBench> {
    if games == 0 {
        return Err(Error::InvalidConfig("need at least one game"));
    }
    let layouts = battleship_layouts(config)?;
    let game = Game::new(&layouts);
    let traces = (0..games)
        .into_par_iter()
        .map(|g| {
            battleship_play(
                &game,
                bench_target(config, &layouts, &game, g),
                config.stop_rule,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BattleshipBench {
        layouts: layouts.len(),
        distinct_layouts: game.boards().len(),
        games: traces,
    })
}
