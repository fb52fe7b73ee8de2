mod common;

use proptest::prelude::*;

use closest_substring::exact::{
    solve_exact_patterns, solve_exact_tuples, solve_exact_tuples_pruned,
};
use closest_substring::gen_io::{
    parse_instance, parse_solution, serialize_instance, serialize_solution,
};
use closest_substring::model::{
    best_occurrence, consensus_of, decompose_cost, hamming, realign, solution_cost, Instance,
    Pattern, Solution,
};
use closest_substring::ptas::{enumerate_r_samples, ptas_solve, sample_count};
use closest_substring::{SampleMode, SolverOptions};

use common::*;

fn word(symbols: &'static [u8], len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(prop::sample::select(symbols), len)
}

/// `(sequences, l)` with `t ∈ 1..=max_t`, `n ∈ 1..=max_n`, `l ∈ 1..=min(n, max_l)`.
fn instance(
    symbols: &'static [u8],
    max_t: usize,
    max_n: usize,
    max_l: usize,
) -> impl Strategy<Value = Instance> {
    (1..=max_t, 1..=max_n)
        .prop_flat_map(move |(t, n)| (prop::collection::vec(word(symbols, n), t), 1..=n.min(max_l)))
        .prop_map(|(seqs, l)| Instance::new(seqs, l).unwrap())
}

fn with_positions(inst: Instance) -> impl Strategy<Value = (Instance, Vec<usize>)> {
    let w = inst.window_count();
    let t = inst.t();
    (Just(inst), prop::collection::vec(0..w, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hamming_is_a_metric(
        (a, b, c) in (1usize..10).prop_flat_map(|l| (word(b"ACGT", l), word(b"ACGT", l), word(b"ACGT", l)))
    ) {
        let d = |x: &[u8], y: &[u8]| hamming(x, y).unwrap();
        prop_assert_eq!(d(&a, &a), 0);
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &b) == 0, a == b);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        prop_assert_eq!(d(&a, &b), common::hamming(&a, &b));
    }

    #[test]
    fn consensus_attains_the_minimum(
        patterns in (1usize..5).prop_flat_map(|l| prop::collection::vec(word(b"ABC", l), 1..6))
    ) {
        let l = patterns[0].len();
        let ps: Vec<Pattern> = patterns.iter().cloned().map(Pattern::new).collect();
        let v = consensus_of(&ps).unwrap();
        let score = |x: &[u8]| patterns.iter().map(|p| common::hamming(x, p)).sum::<u64>();
        let best = all_patterns(b"ABC", l).iter().map(|x| score(x)).min().unwrap();
        prop_assert_eq!(score(v.as_bytes()), best);
    }

    #[test]
    fn instance_text_round_trips(inst in instance(b"ACGT", 5, 12, 6)) {
        let text = serialize_instance(&inst);
        prop_assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn solution_text_round_trips((inst, pos) in instance(b"AB", 5, 10, 4).prop_flat_map(with_positions)) {
        let costed = solution_cost(&inst, &Solution::from_positions(&pos)).unwrap();
        let text = serialize_solution(&costed).unwrap();
        prop_assert_eq!(parse_solution(&text).unwrap(), costed);
    }

    #[test]
    fn solution_cost_matches_reference((inst, pos) in instance(b"ABC", 5, 10, 4).prop_flat_map(with_positions)) {
        let costed = solution_cost(&inst, &Solution::from_positions(&pos)).unwrap();
        let l = inst.l();
        let v = costed.consensus().as_bytes();
        let direct: u64 = pos.iter().enumerate()
            .map(|(i, &p)| common::hamming(v, &inst.sequence(i)[p..p + l]))
            .sum();
        prop_assert_eq!(costed.cost(), direct);
    }

    #[test]
    fn cost_decomposes_around_each_sequence((inst, pos) in instance(b"ACGT", 6, 12, 5).prop_flat_map(with_positions)) {
        let sol = Solution::from_positions(&pos);
        let total = solution_cost(&inst, &sol).unwrap().cost();
        for i in 0..inst.t() {
            let (partial, leaf) = decompose_cost(&inst, &sol, i).unwrap();
            prop_assert_eq!(partial + leaf, total);
        }
    }

    #[test]
    fn best_occurrence_is_leftmost_minimum(
        (seq, v) in (1usize..5).prop_flat_map(|l| (word(b"AB", l + 6), word(b"AB", l)))
    ) {
        let inst = Instance::new(vec![seq.clone()], v.len()).unwrap();
        let (occ, d) = best_occurrence(&inst, &Pattern::new(v.clone()), 0).unwrap();
        let dists: Vec<u64> = windows(&seq, v.len()).map(|w| common::hamming(&v, w)).collect();
        let min = *dists.iter().min().unwrap();
        prop_assert_eq!(d, min);
        prop_assert_eq!(occ.position, dists.iter().position(|&x| x == min).unwrap());
    }

    #[test]
    fn realign_scores_the_pattern(
        (inst, v) in instance(b"AB", 5, 10, 4).prop_flat_map(|i| { let l = i.l(); (Just(i), word(b"AB", l)) })
    ) {
        let a = realign(&inst, &Pattern::new(v.clone())).unwrap();
        prop_assert_eq!(a.pattern_cost, pattern_cost(inst.sequences(), &v));
        prop_assert!(a.costed.cost() <= a.pattern_cost);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_solvers_agree_with_reference(inst in instance(b"ABC", 4, 8, 4)) {
        let opts = SolverOptions::default();
        let (reference, pattern) = brute_optimum(&inst);
        let tuples = solve_exact_tuples(&inst, &opts).unwrap();
        prop_assert_eq!(tuples.cost(), reference);
        prop_assert_eq!(solve_exact_tuples_pruned(&inst, &opts).unwrap(), tuples);
        let patterns = solve_exact_patterns(&inst, &opts).unwrap();
        prop_assert_eq!(patterns.cost(), reference);
        prop_assert_eq!(patterns.pattern.as_bytes(), &pattern[..]);
    }

    #[test]
    fn sample_enumeration_matches_counts(inst in instance(b"AB", 4, 6, 3), r in 1usize..4, multiset in any::<bool>()) {
        prop_assume!(r <= inst.t());
        let mode = if multiset { SampleMode::Multiset } else { SampleMode::DistinctSeq };
        let samples: Vec<_> = enumerate_r_samples(&inst, r, mode).unwrap().collect();
        let w = inst.window_count() as u128;
        let expected = match mode {
            SampleMode::DistinctSeq => n_choose_k(inst.t() as u128, r as u128) * w.pow(r as u32),
            SampleMode::Multiset => n_choose_k(inst.t() as u128 * w + r as u128 - 1, r as u128),
        };
        prop_assert_eq!(samples.len() as u128, expected);
        prop_assert_eq!(sample_count(inst.t(), inst.window_count(), r, mode), expected);
        let mut sorted = samples.clone();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), samples.len());
        let opts = SolverOptions::default().with_samples(mode);
        prop_assert_eq!(ptas_solve(&inst, r, &opts).unwrap().samples as u128, expected);
    }

    #[test]
    fn jobs_do_not_change_results(inst in instance(b"ACGT", 5, 9, 4), r in 1usize..4) {
        prop_assume!(r <= inst.t());
        let one = SolverOptions::default();
        let many = one.with_jobs(3);
        prop_assert_eq!(solve_exact_tuples(&inst, &one).unwrap(), solve_exact_tuples(&inst, &many).unwrap());
        prop_assert_eq!(solve_exact_patterns(&inst, &one).unwrap(), solve_exact_patterns(&inst, &many).unwrap());
        prop_assert_eq!(ptas_solve(&inst, r, &one).unwrap(), ptas_solve(&inst, r, &many).unwrap());
    }
}
