use migc_core::scenarios::{
    battleship_layouts, sample_simplex, stream_rng, BattleshipConfig, DnaBench, Game, Sampling,
};
use migc_core::{
    brute_force_optimal, coders::random_valid_tree, expected_length, huffman_dary,
    induced_partition, information_gain, migc_build, partition_entropy, run_coder, shannon_dary,
    tree_validate, Coder, Distribution, Query, QuerySet, RawQuery, SearchBudget, SymbolSet,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dist_strategy(max_n: usize) -> impl Strategy<Value = Distribution> {
    prop::collection::vec(0.01f64..1.0, 1..=max_n).prop_map(|raw| {
        let total: f64 = raw.iter().sum();
        Distribution::from_probs(raw.into_iter().map(|x| x / total).collect()).unwrap()
    })
}

/// A distribution, an arity, a canonical query over it and a nonempty
/// candidate subset.
fn triple() -> impl Strategy<Value = (Distribution, u32, Query, SymbolSet)> {
    (dist_strategy(12), 2u32..=4).prop_flat_map(|(dist, d)| {
        let n = dist.len();
        (
            Just(dist),
            Just(d),
            prop::collection::vec(0..d as usize, n),
            prop::collection::vec(any::<bool>(), n),
            0..n,
        )
            .prop_map(|(dist, d, answers, keep, anchor)| {
                let mut cells = vec![Vec::new(); d as usize];
                for (s, &a) in answers.iter().enumerate() {
                    cells[a].push(s);
                }
                let qset = QuerySet::new(d, dist.len(), vec![RawQuery { id: 0, cells }]).unwrap();
                let query = qset.queries()[0].clone();
                let mut candidates: SymbolSet = (0..dist.len()).filter(|&s| keep[s]).collect();
                candidates.insert(anchor);
                (dist, d, query, candidates)
            })
    })
}

fn random_pool(n: usize, d: u32, answers: &[Vec<usize>]) -> QuerySet {
    let mut raw: Vec<RawQuery> = answers
        .iter()
        .enumerate()
        .map(|(id, per_symbol)| {
            let mut cells = vec![Vec::new(); d as usize];
            for (s, &a) in per_symbol.iter().take(n).enumerate() {
                cells[a % d as usize].push(s);
            }
            RawQuery { id, cells }
        })
        .collect();
    loop {
        let qset = QuerySet::new(d, n, raw.clone()).unwrap();
        let classes = migc_core::distinguishability_classes(&qset);
        match classes.iter().find(|c| c.len() > 1) {
            None => return qset,
            Some(c) => raw.push(RawQuery {
                id: raw.len(),
                cells: vec![vec![c.first().unwrap()]],
            }),
        }
    }
}

fn constrained_instance() -> impl Strategy<Value = (Distribution, QuerySet)> {
    (
        dist_strategy(8),
        2u32..=4,
        prop::collection::vec(prop::collection::vec(0usize..4, 8), 1..8),
    )
        .prop_map(|(dist, d, answers)| {
            let qset = random_pool(dist.len(), d, &answers);
            (dist, qset)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn information_gain_equals_partition_entropy((dist, d, query, candidates) in triple()) {
        let base = f64::from(d);
        let ig = information_gain(&query, &candidates, &dist, base).unwrap();
        let view = induced_partition(&query, &candidates, &dist).unwrap();
        let h = partition_entropy(&view.cells, &dist, base).unwrap();
        prop_assert!((ig - h).abs() <= 1e-9, "{} vs {}", ig, h);
    }

    #[test]
    fn induced_partition_is_a_conditional_partition((dist, _d, query, candidates) in triple()) {
        let view = induced_partition(&query, &candidates, &dist).unwrap();
        let total: f64 = view.masses.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);
        let mut union = SymbolSet::new();
        for (i, c) in view.cells.iter().enumerate() {
            prop_assert!(!c.is_empty());
            prop_assert!(union.is_disjoint(c));
            union = union.union(c);
            prop_assert_eq!(query.cells()[view.answers[i]].intersection(&candidates), c.clone());
        }
        prop_assert_eq!(union, candidates);
    }

    #[test]
    fn partition_entropy_bounded_by_cell_count((dist, d, query, candidates) in triple()) {
        let view = induced_partition(&query, &candidates, &dist).unwrap();
        let base = f64::from(d);
        let h = view.entropy(base);
        let k = view.cells.len() as f64;
        prop_assert!(h <= k.ln() / base.ln() + 1e-12);
    }

    #[test]
    fn equal_cells_reach_the_bound(k in 1usize..=4, per in 1usize..=3) {
        let n = k * per;
        let dist = Distribution::uniform(n).unwrap();
        let cells: Vec<SymbolSet> =
            (0..k).map(|c| (c * per..(c + 1) * per).collect()).collect();
        let h = partition_entropy(&cells, &dist, 2.0).unwrap();
        prop_assert!((h - (k as f64).log2()).abs() < 1e-9);
    }

    #[test]
    fn coders_are_valid_and_above_entropy(dist in dist_strategy(10), d in 2u32..=4) {
        let free = QuerySet::unconstrained(d, dist.len()).unwrap();
        let h = dist.entropy(f64::from(d));
        for coder in [Coder::Migc, Coder::Huffman, Coder::Shannon, Coder::BruteForce] {
            let (report, tree) = run_coder(coder, &dist, &free, &SearchBudget::default()).unwrap();
            prop_assert!(tree_validate(&tree, &dist, &free).is_ok(), "{}", coder);
            let recomputed = expected_length(&tree, &dist, d).unwrap();
            prop_assert_eq!(&recomputed.per_symbol_lengths, &report.per_symbol_lengths);
            prop_assert!(report.expected_length >= h - 1e-9);
            prop_assert!(report.kraft_sum() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn sandwich_and_per_symbol_bound(dist in dist_strategy(10), d in 2u32..=4) {
        let free = QuerySet::unconstrained(d, dist.len()).unwrap();
        let tree = migc_build(&dist, &free, &SearchBudget::exact()).unwrap();
        let migc = expected_length(&tree, &dist, d).unwrap();
        let (huffman, _) = huffman_dary(&dist, d).unwrap();
        let shannon = shannon_dary(&dist, d).unwrap();
        for (m, s) in migc.per_symbol_lengths.iter().zip(&shannon.per_symbol_lengths) {
            prop_assert!(m <= s);
        }
        prop_assert!(huffman.expected_length <= migc.expected_length + 1e-9);
        prop_assert!(migc.expected_length <= shannon.expected_length + 1e-9);
        prop_assert!(migc.expected_length < dist.entropy(f64::from(d)) + 1.0);
    }

    #[test]
    fn oracle_dominance((dist, qset) in constrained_instance(), seed in any::<u64>()) {
        let budget = SearchBudget::default();
        let d = qset.arity();
        let (oracle, oracle_tree) = brute_force_optimal(&dist, &qset, &budget).unwrap();
        prop_assert!(tree_validate(&oracle_tree, &dist, &qset).is_ok());
        let tree = migc_build(&dist, &qset, &budget).unwrap();
        prop_assert!(tree_validate(&tree, &dist, &qset).is_ok());
        let migc = expected_length(&tree, &dist, d).unwrap().expected_length;
        prop_assert!(oracle.expected_length <= migc + 1e-9);
        prop_assert!(oracle.expected_length >= dist.entropy(f64::from(d)) - 1e-9);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let random = random_valid_tree(&dist, &qset, &mut rng).unwrap();
            prop_assert!(tree_validate(&random, &dist, &qset).is_ok());
            let cost = expected_length(&random, &dist, d).unwrap().expected_length;
            prop_assert!(oracle.expected_length <= cost + 1e-9);
        }
    }

    #[test]
    fn builds_are_deterministic((dist, qset) in constrained_instance()) {
        let budget = SearchBudget::default();
        prop_assert_eq!(
            migc_build(&dist, &qset, &budget).unwrap(),
            migc_build(&dist, &qset, &budget).unwrap()
        );
        let free = QuerySet::unconstrained(qset.arity(), dist.len()).unwrap();
        prop_assert_eq!(
            migc_build(&dist, &free, &budget).unwrap(),
            migc_build(&dist, &free, &budget).unwrap()
        );
    }

    #[test]
    fn simplex_samples_are_valid(n in 1usize..40, seed in any::<u64>(), stream in any::<u64>()) {
        let a = sample_simplex(n, &mut stream_rng(seed, stream));
        let b = sample_simplex(n, &mut stream_rng(seed, stream));
        prop_assert_eq!(a.probs(), b.probs());
        prop_assert!(a.probs().iter().all(|&p| p > 0.0));
        prop_assert!((a.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn dna_optimum_sits_between_entropy_and_greedy() {
    for exons in [3, 4, 5] {
        let bench = DnaBench::new(exons, 21, SearchBudget::default()).unwrap();
        for i in 0..25 {
            let row = bench.sample(i).unwrap();
            let h4 = bench.sample_distribution(i).unwrap().entropy(4.0);
            assert!(row.bruteforce >= h4 - 1e-9);
            assert!(row.migc >= row.bruteforce - 1e-9);
            assert!(row.gbsc >= bench.sample_distribution(i).unwrap().entropy(2.0) - 1e-9);
        }
    }
}

#[test]
fn battleship_filtering_invariants() {
    let config = BattleshipConfig {
        rows: 4,
        cols: 4,
        fleets: vec![vec![3], vec![2]],
        sampling: Sampling::Exhaustive,
        ..BattleshipConfig::default()
    };
    let layouts = battleship_layouts(&config).unwrap();
    let game = Game::new(&layouts);
    for target in (0..game.boards().len()).step_by(7) {
        let board = game.boards()[target];
        let mut state = game.start();
        while let Ok(advice) = game.next_shot(&state) {
            assert!(advice.entropy <= 1.0 + 1e-12);
            for probs in game.heatmap(&state) {
                assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
            let before = state.survivors.clone();
            game.report(
                &mut state,
                advice.cell,
                board.answer(advice.cell, game.players),
            )
            .unwrap();
            assert!(state.survivors.iter().all(|s| before.contains(s)));
            let h = state.trace[state.trace.len() - 1];
            let expected = (state.survivors.len() as f64).ln() / 3f64.ln();
            assert!((h - expected).abs() < 1e-12);
            assert!(h <= state.trace[state.trace.len() - 2] + 1e-12);
        }
        assert_eq!(state.survivors, [target as u32]);
        assert_eq!(state.entropy(), 0.0);
    }
}
