//! A third player bombing a board on which several players have hidden
//! ships. Each shot answers "hit player k's ship" or "miss", and the shooter
//! picks the cell whose answer has maximum entropy under a uniform
//! posterior over the layouts still consistent with all answers.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::math::{log_base, TIE_EPS};
use crate::scenarios::rng::stream_rng;

/// Upper bound on the number of fleet owners.
pub const MAX_PLAYERS: usize = 4;
/// Boards are bitmasks, so at most this many cells.
pub const MAX_CELLS: usize = 128;
const EXHAUSTIVE_LIMIT: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopRule {
    /// Stop once the layout is known.
    Identify,
    /// Keep firing at the known ship cells until every ship is sunk.
    Sink,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// `layout_count` independent uniform draws; duplicates are kept.
    Random,
    /// Every legal layout.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BattleshipConfig {
    pub rows: usize,
    pub cols: usize,
    /// Ship lengths per player.
    pub fleets: Vec<Vec<usize>>,
    pub layout_count: usize,
    pub stop_rule: StopRule,
    pub seed: u64,
    pub sampling: Sampling,
}

impl Default for BattleshipConfig {
    fn default() -> Self {
        Self {
            rows: 10,
            cols: 10,
            fleets: alloc::vec![alloc::vec![5, 3], alloc::vec![5, 3]],
            layout_count: 531_441,
            stop_rule: StopRule::Identify,
            seed: 0,
            sampling: Sampling::Random,
        }
    }
}

impl BattleshipConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 || self.rows * self.cols > MAX_CELLS {
            return Err(Error::InvalidConfig(
                "board must have between 1 and 128 cells",
            ));
        }
        if self.fleets.is_empty() || self.fleets.len() > MAX_PLAYERS {
            return Err(Error::InvalidConfig("need between 1 and 4 players"));
        }
        if self.fleets.iter().flatten().any(|&len| len == 0) {
            return Err(Error::InvalidConfig("ship lengths must be positive"));
        }
        if self.sampling == Sampling::Random && self.layout_count == 0 {
            return Err(Error::InvalidConfig("layout_count must be at least 1"));
        }
        Ok(())
    }

    pub fn players(&self) -> usize {
        self.fleets.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Placement {
    pub row: u8,
    pub col: u8,
    pub len: u8,
    pub horizontal: bool,
}

impl Placement {
    pub fn mask(&self, cols: usize) -> u128 {
        let (r, c) = (self.row as usize, self.col as usize);
        (0..self.len as usize).fold(0, |m, k| {
            let cell = if self.horizontal {
                r * cols + c + k
            } else {
                (r + k) * cols + c
            };
            m | (1u128 << cell)
        })
    }
}

fn placements(rows: usize, cols: usize, len: usize) -> Vec<Placement> {
    let mut out = Vec::new();
    let make = |row: usize, col: usize, horizontal| Placement {
        row: row as u8,
        col: col as u8,
        len: len as u8,
        horizontal,
    };
    if len <= cols {
        for r in 0..rows {
            for c in 0..=cols - len {
                out.push(make(r, c, true));
            }
        }
    }
    if len > 1 && len <= rows {
        for r in 0..=rows - len {
            for c in 0..cols {
                out.push(make(r, c, false));
            }
        }
    }
    out
}

/// Who occupies each cell: bit `c` of `occupied[p]` is set when player `p`
/// has a ship on cell `c`. Two layouts with equal boards answer every shot
/// identically.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Board {
    pub occupied: [u128; MAX_PLAYERS],
}

impl Board {
    /// Answer index at `cell`: the owning player, or `players` for a miss.
    pub fn answer(&self, cell: usize, players: usize) -> usize {
        let bit = 1u128 << cell;
        self.occupied[..players]
            .iter()
            .position(|m| m & bit != 0)
            .unwrap_or(players)
    }

    pub fn ships(&self) -> u128 {
        self.occupied.iter().fold(0, |a, m| a | m)
    }
}

/// Sampled layouts, kept with their ship rectangles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutSet {
    pub rows: usize,
    pub cols: usize,
    pub players: usize,
    /// Owner of each ship slot; every layout has one placement per slot.
    pub ship_owner: Vec<usize>,
    placements: Vec<Placement>,
    boards: Vec<Board>,
}

impl LayoutSet {
    pub fn len(&self) -> usize {
        self.boards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boards.is_empty()
    }

    pub fn board(&self, i: usize) -> &Board {
        &self.boards[i]
    }

    pub fn boards(&self) -> &[Board] {
        &self.boards
    }

    /// Rebuilds a set from explicit ship rectangles. Every layout must list
    /// its ships in the same owner order.
    pub fn from_ships(
        rows: usize,
        cols: usize,
        players: usize,
        layouts: &[Vec<(usize, Placement)>],
    ) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols > MAX_CELLS {
            return Err(Error::InvalidConfig(
                "board must have between 1 and 128 cells",
            ));
        }
        if players == 0 || players > MAX_PLAYERS {
            return Err(Error::InvalidConfig("need between 1 and 4 players"));
        }
        let first = layouts.first().ok_or(Error::InvalidConfig("no layouts"))?;
        let ship_owner: Vec<usize> = first.iter().map(|&(o, _)| o).collect();
        let mut set = LayoutSet {
            rows,
            cols,
            players,
            ship_owner,
            placements: Vec::new(),
            boards: Vec::new(),
        };
        for layout in layouts {
            if layout.len() != set.ship_owner.len()
                || layout
                    .iter()
                    .zip(&set.ship_owner)
                    .any(|(&(o, _), &s)| o != s)
            {
                return Err(Error::InvalidConfig("layouts disagree on the ship list"));
            }
            let mut board = Board::default();
            let mut taken = 0u128;
            for &(owner, pl) in layout {
                if owner >= players {
                    return Err(Error::InvalidConfig("ship owner out of range"));
                }
                let (r, c, len) = (pl.row as usize, pl.col as usize, pl.len as usize);
                let fits = len > 0
                    && if pl.horizontal {
                        r < rows && c + len <= cols
                    } else {
                        c < cols && r + len <= rows
                    };
                if !fits {
                    return Err(Error::InvalidConfig("ship does not fit on the board"));
                }
                let mask = pl.mask(cols);
                if mask & taken != 0 {
                    return Err(Error::InvalidConfig("ships overlap"));
                }
                taken |= mask;
                board.occupied[owner] |= mask;
                set.placements.push(pl);
            }
            set.boards.push(board);
        }
        Ok(set)
    }

    /// `(owner, placement)` for every ship of layout `i`.
    pub fn ships(&self, i: usize) -> impl Iterator<Item = (usize, Placement)> + '_ {
        let k = self.ship_owner.len();
        self.ship_owner
            .iter()
            .copied()
            .zip(self.placements[i * k..(i + 1) * k].iter().copied())
    }
}

struct Fleet {
    owner: Vec<usize>,
    options: Vec<Vec<(Placement, u128)>>,
}

impl Fleet {
    fn new(config: &BattleshipConfig) -> Self {
        let mut owner = Vec::new();
        let mut options = Vec::new();
        for (p, fleet) in config.fleets.iter().enumerate() {
            for &len in fleet {
                owner.push(p);
                options.push(
                    placements(config.rows, config.cols, len)
                        .into_iter()
                        .map(|pl| (pl, pl.mask(config.cols)))
                        .collect(),
                );
            }
        }
        Self { owner, options }
    }

    /// Depth-first enumeration of legal layouts; `visit` returns false to stop.
    fn enumerate(&self, visit: &mut impl FnMut(&[usize]) -> bool) {
        fn go(
            fleet: &Fleet,
            slot: usize,
            taken: u128,
            chosen: &mut Vec<usize>,
            visit: &mut impl FnMut(&[usize]) -> bool,
        ) -> bool {
            if slot == fleet.options.len() {
                return visit(chosen);
            }
            for (i, &(_, mask)) in fleet.options[slot].iter().enumerate() {
                if mask & taken != 0 {
                    continue;
                }
                chosen.push(i);
                let more = go(fleet, slot + 1, taken | mask, chosen, visit);
                chosen.pop();
                if !more {
                    return false;
                }
            }
            true
        }
        go(self, 0, 0, &mut Vec::new(), visit);
    }

    fn push(&self, choice: &[usize], set: &mut LayoutSet) {
        let mut board = Board::default();
        for (slot, &i) in choice.iter().enumerate() {
            let (pl, mask) = self.options[slot][i];
            board.occupied[self.owner[slot]] |= mask;
            set.placements.push(pl);
        }
        set.boards.push(board);
    }
}

/// Legal layouts for the configured fleets. Random sampling draws every
/// ship uniformly among its placements and rejects the whole layout on any
/// overlap, which is uniform over legal layouts.
pub fn battleship_layouts(config: &BattleshipConfig) -> Result<LayoutSet> {
    config.validate()?;
    let fleet = Fleet::new(config);
    let mut set = LayoutSet {
        rows: config.rows,
        cols: config.cols,
        players: config.players(),
        ship_owner: fleet.owner.clone(),
        placements: Vec::new(),
        boards: Vec::new(),
    };
    let mut feasible = false;
    fleet.enumerate(&mut |_| {
        feasible = true;
        false
    });
    if !feasible {
        return Err(Error::ImpossibleFleet);
    }
    match config.sampling {
        Sampling::Exhaustive => {
            let mut overflow = false;
            fleet.enumerate(&mut |choice| {
                if set.boards.len() == EXHAUSTIVE_LIMIT {
                    overflow = true;
                    return false;
                }
                fleet.push(choice, &mut set);
                true
            });
            if overflow {
                return Err(Error::TooLarge {
                    limit: EXHAUSTIVE_LIMIT as u64,
                });
            }
        }
        Sampling::Random => {
            let mut rng = stream_rng(config.seed, 0);
            let mut choice = alloc::vec![0; fleet.options.len()];
            while set.boards.len() < config.layout_count {
                let mut taken = 0u128;
                let legal = fleet
                    .options
                    .iter()
                    .zip(choice.iter_mut())
                    .all(|(opts, c)| {
                        *c = rng.random_range(0..opts.len());
                        let mask = opts[*c].1;
                        let ok = mask & taken == 0;
                        taken |= mask;
                        ok
                    });
                if legal {
                    fleet.push(&choice, &mut set);
                }
            }
        }
    }
    Ok(set)
}

/// One fired shot and the answer observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shot {
    pub cell: usize,
    pub answer: usize,
}

/// Recommended cell with the answer distribution that makes it best.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotAdvice {
    pub cell: usize,
    /// Probability of each answer (players, then miss).
    pub probabilities: Vec<f64>,
    /// Entropy of the answer, in base `players + 1`.
    pub entropy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Advice {
    /// Gather information at this cell.
    Probe(ShotAdvice),
    /// The layout is known; this cell is a certain hit not yet fired at.
    Finish(usize),
    /// Nothing left to do under the stop rule.
    Done,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BattleshipState {
    /// Indices into [`Game::boards`] consistent with every answer so far.
    pub survivors: Vec<u32>,
    pub shots: Vec<Shot>,
    /// `log_(players+1) |survivors|` before the first shot and after each.
    pub trace: Vec<f64>,
    fired: u128,
}

impl BattleshipState {
    pub fn is_identified(&self) -> bool {
        self.survivors.len() == 1
    }

    pub fn entropy(&self) -> f64 {
        self.trace.last().copied().unwrap_or(0.0)
    }

    pub fn has_fired(&self, cell: usize) -> bool {
        self.fired & (1u128 << cell) != 0
    }
}

/// The shooter's knowledge: the distinct boards among the sampled layouts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    pub rows: usize,
    pub cols: usize,
    pub players: usize,
    boards: Vec<Board>,
}

impl Game {
    pub fn new(layouts: &LayoutSet) -> Self {
        let mut boards = layouts.boards.clone();
        boards.sort_unstable();
        boards.dedup();
        Self {
            rows: layouts.rows,
            cols: layouts.cols,
            players: layouts.players,
            boards,
        }
    }

    pub fn boards(&self) -> &[Board] {
        &self.boards
    }

    pub fn cells(&self) -> usize {
        self.rows * self.cols
    }

    /// Size of the answer alphabet, which is also the entropy base.
    pub fn answers(&self) -> usize {
        self.players + 1
    }

    pub fn board_index(&self, board: &Board) -> Option<usize> {
        self.boards.binary_search(board).ok()
    }

    fn entropy_of_count(&self, survivors: usize) -> f64 {
        log_base(survivors as f64, self.answers() as f64)
    }

    pub fn start(&self) -> BattleshipState {
        BattleshipState {
            survivors: (0..self.boards.len() as u32).collect(),
            shots: Vec::new(),
            trace: alloc::vec![self.entropy_of_count(self.boards.len())],
            fired: 0,
        }
    }

    /// `counts[cell][p]`: surviving boards where player `p` occupies `cell`.
    fn hit_counts(&self, state: &BattleshipState, skip_fired: bool) -> Vec<[u32; MAX_PLAYERS]> {
        let mut counts = alloc::vec![[0u32; MAX_PLAYERS]; self.cells()];
        let mask = if skip_fired { !state.fired } else { u128::MAX };
        for &b in &state.survivors {
            let board = &self.boards[b as usize];
            for (p, &occupied) in board.occupied[..self.players].iter().enumerate() {
                let mut bits = occupied & mask;
                while bits != 0 {
                    counts[bits.trailing_zeros() as usize][p] += 1;
                    bits &= bits - 1;
                }
            }
        }
        counts
    }

    fn distribution(&self, hits: &[u32; MAX_PLAYERS], total: usize) -> Vec<f64> {
        let total_f = total as f64;
        let mut probs: Vec<f64> = hits[..self.players]
            .iter()
            .map(|&h| f64::from(h) / total_f)
            .collect();
        let hit_sum: u32 = hits[..self.players].iter().sum();
        probs.push(f64::from(total as u32 - hit_sum) / total_f);
        probs
    }

    /// The unfired cell whose answer has maximum entropy; ties go to the
    /// lowest cell index (row-major).
    pub fn next_shot(&self, state: &BattleshipState) -> Result<ShotAdvice> {
        if state.survivors.len() <= 1 {
            return Err(Error::Solved);
        }
        let total = state.survivors.len();
        let counts = self.hit_counts(state, true);
        let base = self.answers() as f64;
        let mut best: Option<ShotAdvice> = None;
        for (cell, hits) in counts.iter().enumerate() {
            if state.has_fired(cell) {
                continue;
            }
            let probabilities = self.distribution(hits, total);
            let entropy = crate::math::entropy(&probabilities, base);
            if best.as_ref().is_none_or(|b| entropy > b.entropy + TIE_EPS) {
                best = Some(ShotAdvice {
                    cell,
                    probabilities,
                    entropy,
                });
            }
        }
        best.ok_or(Error::Solved)
    }

    pub fn advise(&self, state: &BattleshipState, rule: StopRule) -> Advice {
        if !state.is_identified() {
            return match self.next_shot(state) {
                Ok(a) => Advice::Probe(a),
                Err(_) => Advice::Done,
            };
        }
        if rule == StopRule::Identify {
            return Advice::Done;
        }
        let left = self.boards[state.survivors[0] as usize].ships() & !state.fired;
        if left == 0 {
            Advice::Done
        } else {
            Advice::Finish(left.trailing_zeros() as usize)
        }
    }

    /// Answer probabilities for every cell (fired or not) under the uniform
    /// posterior, row-major.
    pub fn heatmap(&self, state: &BattleshipState) -> Vec<Vec<f64>> {
        let total = state.survivors.len();
        self.hit_counts(state, false)
            .iter()
            .map(|hits| self.distribution(hits, total))
            .collect()
    }

    /// Applies an observed answer. On contradiction the state is untouched.
    pub fn report(&self, state: &mut BattleshipState, cell: usize, answer: usize) -> Result<f64> {
        if cell >= self.cells() {
            return Err(Error::OutOfRangeIndex {
                index: cell,
                len: self.cells(),
            });
        }
        if answer >= self.answers() {
            return Err(Error::OutOfRangeIndex {
                index: answer,
                len: self.answers(),
            });
        }
        if state.has_fired(cell) {
            return Err(Error::CellAlreadyShot(cell));
        }
        let survivors: Vec<u32> = state
            .survivors
            .iter()
            .copied()
            .filter(|&b| self.boards[b as usize].answer(cell, self.players) == answer)
            .collect();
        if survivors.is_empty() {
            return Err(Error::ContradictoryAnswer);
        }
        let h = self.entropy_of_count(survivors.len());
        state.survivors = survivors;
        state.fired |= 1u128 << cell;
        state.shots.push(Shot { cell, answer });
        state.trace.push(h);
        Ok(h)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameTrace {
    /// Index of the target in [`Game::boards`].
    pub target: usize,
    pub tries: usize,
    pub shots: Vec<Shot>,
    pub trace: Vec<f64>,
}

/// Self-play against a known target board.
pub fn battleship_play(game: &Game, target: usize, rule: StopRule) -> Result<GameTrace> {
    let board = *game.boards.get(target).ok_or(Error::OutOfRangeIndex {
        index: target,
        len: game.boards.len(),
    })?;
    let mut state = game.start();
    loop {
        let cell = match game.advise(&state, rule) {
            Advice::Probe(a) => a.cell,
            Advice::Finish(cell) => cell,
            Advice::Done => break,
        };
        game.report(&mut state, cell, board.answer(cell, game.players))?;
    }
    Ok(GameTrace {
        target,
        tries: state.shots.len(),
        shots: state.shots,
        trace: state.trace,
    })
}

/// Target of game `g`: a uniform pick from the sampled list, so layouts
/// sampled twice are twice as likely.
pub fn bench_target(
    config: &BattleshipConfig,
    layouts: &LayoutSet,
    game: &Game,
    g: usize,
) -> usize {
    let mut rng = stream_rng(config.seed, (1u64 << 32) | g as u64);
    let pick = rng.random_range(0..layouts.len());
    game.board_index(layouts.board(pick))
        .expect("every sampled board is known to the game")
}

#[derive(Debug, Clone, PartialEq)]
pub struct BattleshipBench {
    pub layouts: usize,
    pub distinct_layouts: usize,
    pub games: Vec<GameTrace>,
}

impl BattleshipBench {
    pub fn tries(&self) -> Vec<usize> {
        self.games.iter().map(|g| g.tries).collect()
    }

    pub fn mean_tries(&self) -> f64 {
        self.games.iter().map(|g| g.tries as f64).sum::<f64>() / self.games.len() as f64
    }
}

pub fn battleship_bench(config: &BattleshipConfig, games: usize) -> Result<BattleshipBench> {
    if games == 0 {
        return Err(Error::InvalidConfig("need at least one game"));
    }
    let layouts = battleship_layouts(config)?;
    let game = Game::new(&layouts);
    let traces = (0..games)
        .map(|g| {
            let target = bench_target(config, &layouts, &game, g);
            battleship_play(&game, target, config.stop_rule)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BattleshipBench {
        layouts: layouts.len(),
        distinct_layouts: game.boards.len(),
        games: traces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn strip(ship: usize) -> BattleshipConfig {
        BattleshipConfig {
            rows: 1,
            cols: 5,
            fleets: vec![vec![ship]],
            sampling: Sampling::Exhaustive,
            ..BattleshipConfig::default()
        }
    }

    #[test]
    fn exhaustive_counts() {
        let set = battleship_layouts(&strip(3)).unwrap();
        assert_eq!(set.len(), 3);
        let masks: Vec<u128> = set.boards().iter().map(|b| b.occupied[0]).collect();
        assert_eq!(masks, vec![0b00111, 0b01110, 0b11100]);

        let single = BattleshipConfig {
            fleets: vec![vec![5]],
            sampling: Sampling::Exhaustive,
            ..BattleshipConfig::default()
        };
        assert_eq!(battleship_layouts(&single).unwrap().len(), 120);

        // a length-1 ship has one placement per cell
        assert_eq!(battleship_layouts(&strip(1)).unwrap().len(), 5);
    }

    #[test]
    fn from_ships_round_trip() {
        let config = BattleshipConfig {
            layout_count: 50,
            ..BattleshipConfig::default()
        };
        let set = battleship_layouts(&config).unwrap();
        let ships: Vec<Vec<(usize, Placement)>> =
            (0..set.len()).map(|i| set.ships(i).collect()).collect();
        let back = LayoutSet::from_ships(10, 10, 2, &ships).unwrap();
        assert_eq!(back, set);

        let mut clash = ships[0].clone();
        clash[1].1 = clash[0].1;
        assert!(LayoutSet::from_ships(10, 10, 2, &[clash]).is_err());
        let off = vec![(
            0,
            Placement {
                row: 9,
                col: 8,
                len: 3,
                horizontal: true,
            },
        )];
        assert!(LayoutSet::from_ships(10, 10, 1, &[off]).is_err());
    }

    #[test]
    fn impossible_fleet() {
        assert_eq!(battleship_layouts(&strip(6)), Err(Error::ImpossibleFleet));
        let crowded = BattleshipConfig {
            fleets: vec![vec![3], vec![3]],
            ..strip(3)
        };
        assert_eq!(battleship_layouts(&crowded), Err(Error::ImpossibleFleet));
    }

    #[test]
    fn sampled_layouts_never_overlap() {
        let config = BattleshipConfig {
            layout_count: 2000,
            seed: 5,
            ..BattleshipConfig::default()
        };
        let set = battleship_layouts(&config).unwrap();
        assert_eq!(set.len(), 2000);
        for (i, b) in set.boards().iter().enumerate() {
            assert_eq!(b.occupied[0] & b.occupied[1], 0);
            assert_eq!(b.ships().count_ones(), 16);
            let ships: u32 = set.ships(i).map(|(_, p)| u32::from(p.len)).sum();
            assert_eq!(ships, 16);
        }
        assert_eq!(battleship_layouts(&config).unwrap(), set);
    }

    #[test]
    fn recommends_end_cell_on_strip() {
        let game = Game::new(&battleship_layouts(&strip(3)).unwrap());
        let state = game.start();
        let advice = game.next_shot(&state).unwrap();
        assert_eq!(advice.cell, 0);
        assert!((advice.probabilities[0] - 1.0 / 3.0).abs() < 1e-12);
        // the middle cell is always a hit
        let heat = game.heatmap(&state);
        assert_eq!(heat[2], vec![1.0, 0.0]);
    }

    #[test]
    fn two_boards_differing_in_one_cell() {
        let config = BattleshipConfig {
            rows: 1,
            cols: 3,
            fleets: vec![vec![1], vec![1]],
            sampling: Sampling::Exhaustive,
            ..BattleshipConfig::default()
        };
        let game = Game::new(&battleship_layouts(&config).unwrap());
        let mut state = game.start();
        // keep P1 on cell 0 and P2 on cell 1 or 2
        state.survivors.retain(|&b| {
            let board = game.boards()[b as usize];
            board.occupied[0] == 0b001
        });
        assert_eq!(state.survivors.len(), 2);
        let advice = game.next_shot(&state).unwrap();
        assert_eq!(advice.cell, 1);
        assert!(advice.entropy <= 1.0 + 1e-12);
    }

    #[test]
    fn contradiction_leaves_state_untouched() {
        let game = Game::new(&battleship_layouts(&strip(3)).unwrap());
        let mut state = game.start();
        let before = state.clone();
        // cell 2 is always a hit
        assert_eq!(
            game.report(&mut state, 2, 1),
            Err(Error::ContradictoryAnswer)
        );
        assert_eq!(state, before);
        game.report(&mut state, 2, 0).unwrap();
        assert_eq!(
            game.report(&mut state, 2, 0),
            Err(Error::CellAlreadyShot(2))
        );
    }

    #[test]
    fn play_identifies_and_sinks() {
        let game = Game::new(&battleship_layouts(&strip(3)).unwrap());
        for target in 0..3 {
            let t = battleship_play(&game, target, StopRule::Identify).unwrap();
            assert_eq!(*t.trace.last().unwrap(), 0.0);
            assert!(t.trace.windows(2).all(|w| w[1] <= w[0]));
            let s = battleship_play(&game, target, StopRule::Sink).unwrap();
            let hits = s.shots.iter().filter(|sh| sh.answer == 0).count();
            assert_eq!(hits, 3);
            assert!(s.tries >= t.tries);
        }
    }

    #[test]
    fn small_bench_is_deterministic() {
        let config = BattleshipConfig {
            rows: 6,
            cols: 6,
            fleets: vec![vec![3, 2], vec![3, 2]],
            layout_count: 3000,
            seed: 11,
            ..BattleshipConfig::default()
        };
        let a = battleship_bench(&config, 5).unwrap();
        let b = battleship_bench(&config, 5).unwrap();
        assert_eq!(a, b);
        for g in &a.games {
            assert_eq!(*g.trace.last().unwrap(), 0.0);
            assert!(g.trace.windows(2).all(|w| w[1] <= w[0]));
        }
    }
}
