//! Property suites run by `csp verify`.
//!
//! Every property is checked over a run of seeds on freshly generated
//! instances and stops at the first violation, keeping the offending instance
//! as a counterexample.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::exact::{solve_exact_patterns, solve_exact_tuples, solve_exact_tuples_pruned};
use crate::gen_io::{gen_random, serialize_instance};
use crate::model::{
    consensus_of, decompose_cost, distance, hamming, realign, solution_cost, Alphabet, Instance,
    Pattern, Solution,
};
use crate::options::SolverOptions;
use crate::ptas::{ptas_solve, ratio_bound, sample_count, RatioParams};
use crate::reduction::{build_graph, clique_weight, min_weight_clique, Vertex};
use crate::reopt::{best_align, k_best_align, reopt_ptas, ModifiedInstance, ReoptInput};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifySuite {
    All,
    Oracles,
    Bounds,
    SelfReducibility,
}

impl std::str::FromStr for VerifySuite {
    type Err = crate::CspError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Self::All),
            "oracles" => Ok(Self::Oracles),
            "bounds" => Ok(Self::Bounds),
            "self-reducibility" => Ok(Self::SelfReducibility),
            other => invalid(format!("unknown verify suite {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyOutcome {
    pub suite: &'static str,
    pub name: &'static str,
    /// Seeds that passed before a failure or the end of the run.
    pub checked: u64,
    pub counterexample: Option<String>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// `Ok(None)` when the property holds for this seed.
type Check = fn(u64, &SolverOptions) -> Result<Option<String>>;

const ORACLES: &[(&str, Check)] = &[
    ("tuple-and-pattern-oracles-agree", oracles_agree),
    ("pruned-search-matches-full-walk", pruned_matches),
    ("optimum-monotone-under-addition", monotone_addition),
    ("optimum-within-0-and-tl", cost_range),
    ("consensus-minimizes-distance-sum", consensus_minimizes),
    ("hamming-is-a-metric", hamming_metric),
    ("clique-weight-is-sum-of-pairs", clique_sum_of_pairs),
    ("results-independent-of-jobs", jobs_determinism),
];

const BOUNDS: &[(&str, Check)] = &[
    ("ptas-within-ratio-at-r3", ptas_ratio),
    ("ptas-exact-at-r-equals-t", ptas_exact_at_t),
    ("greedy-extension-within-kl", additive_bound),
    ("reopt-ptas-dominates-and-within-ratio", reopt_dominance),
    ("reopt-ptas-sample-count", reopt_count),
];

const SELF_REDUCIBILITY: &[(&str, Check)] = &[
    ("cost-splits-around-any-sequence", decompose_additivity),
    ("best-align-adds-one-distance", best_align_identity),
    ("alignment-is-window-optimal", realign_optimality),
];

pub fn run_verify(
    suite: VerifySuite,
    seeds: u64,
    opts: &SolverOptions,
) -> Result<Vec<PropertyOutcome>> {
    let groups: Vec<(&'static str, &[(&str, Check)])> = match suite {
        VerifySuite::All => vec![
            ("oracles", ORACLES),
            ("bounds", BOUNDS),
            ("self-reducibility", SELF_REDUCIBILITY),
        ],
        VerifySuite::Oracles => vec![("oracles", ORACLES)],
        VerifySuite::Bounds => vec![("bounds", BOUNDS)],
        VerifySuite::SelfReducibility => vec![("self-reducibility", SELF_REDUCIBILITY)],
    };
    let mut outcomes = Vec::new();
    for (suite, checks) in groups {
        for &(name, check) in checks {
            let mut outcome = PropertyOutcome {
                suite,
                name,
                checked: 0,
                counterexample: None,
            };
            for seed in 0..seeds {
                if let Some(cx) = check(seed, opts)? {
                    outcome.counterexample = Some(format!("# {name}, seed {seed}\n{cx}"));
                    break;
                }
                outcome.checked += 1;
            }
            outcomes.push(outcome);
        }
    }
    Ok(outcomes)
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.rotate_left(17))
}

fn alphabet(size: usize) -> Alphabet {
    Alphabet::new(&b"ABCD"[..size]).expect("static alphabet")
}

/// A random instance with `t`, `n`, `l` and `|Σ|` drawn from the given ranges.
fn small_instance(
    seed: u64,
    salt: u64,
    sigmas: &[usize],
    t: (usize, usize),
    n: (usize, usize),
    l_max: usize,
) -> Result<Instance> {
    let mut rng = rng_for(seed, salt);
    let sigma = sigmas[rng.gen_range(0..sigmas.len())];
    let t = rng.gen_range(t.0..=t.1);
    let n = rng.gen_range(n.0..=n.1);
    let l = rng.gen_range(1..=l_max.min(n));
    gen_random(t, n, l, &alphabet(sigma), rng.gen())
}

fn fail(detail: String, inst: &Instance) -> Result<Option<String>> {
    Ok(Some(format!("# {detail}\n{}", serialize_instance(inst))))
}

fn oracle_instance(seed: u64) -> Result<Instance> {
    small_instance(seed, 1, &[2, 3], (1, 5), (3, 10), 4)
}

fn oracles_agree(seed: u64, opts: &SolverOptions) -> Result<Option<String>> {
    let inst = oracle_instance(seed)?;
    let tuples = solve_exact_tuples(&inst, opts)?.cost();
    let patterns = solve_exact_patterns(&inst, opts)?.cost();
    if tuples != patterns {
        return fail(
            format!("tuple optimum {tuples}, pattern optimum {patterns}"),
            &inst,
        );
    }
    Ok(None)
}

fn pruned_matches(seed: u64, opts: &SolverOptions) -> Result<Option<String>> {
    let inst = oracle_instance(seed)?;
    let full = solve_exact_tuples(&inst, opts)?;
    let pruned = solve_exact_tuples_pruned(&inst, opts)?;
    if full.costed != pruned.costed {
        return fail(
            format!(
                "full {:?} vs pruned {:?}",
                full.costed.solution().positions(),
                pruned.costed.solution().positions()
            ),
            &inst,
        );
    }
    Ok(None)
}

fn monotone_addition(seed: u64, opts: &SolverOptions) -> Result<Option<String>> {
    let inst = small_instance(seed, 2, &[2, 3], (2, 5), (3, 10), 4)?;
    let full = solve_exact_tuples_pruned(&inst, opts)?.cost();
    for t in 1..inst.t() {
        let part = solve_exact_tuples_pruned(&inst.prefix(t)?, opts)?.cost();
        if part > full {
            return fail(
                format!("first {t} sequences cost {part} > full cost {full}"),
                &inst,
            );
        }
    }
    Ok(None)
}

fn cost_range(seed: u64, opts: &SolverOptions) -> Result<Option<String>> {
    let inst = oracle_instance(seed)?;
    let cost = solve_exact_tuples_pruned(&inst, opts)?.cost();
    if cost > (inst.t() * inst.l()) as u64 {
        return fail(format!("cost {cost} above t*l"), &inst);
    }
    Ok(None)
}

fn all_patterns(symbols: &[u8], l: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..l {
        out = out
            .into_iter()
            .flat_map(|p| {
                symbols.iter().map(move |&s| {
                    let mut q = p.clone();
                    q.push(s);
                    q
                })
            })
            .collect();
    }
    out
}

fn consensus_minimizes(seed: u64, _: &SolverOptions) -> Result<Option<String>> {
    let mut rng = rng_for(seed, 3);
    let sigma = alphabet(rng.gen_range(1..=3));
    let l = rng.gen_range(1..=4);
    let count = rng.gen_range(1..=6);
    let patterns: Vec<Pattern> = (0..count)
        .map(|_| {
            Pattern::new(
                (0..l)
                    .map(|_| sigma.symbols()[rng.gen_range(0..sigma.len())])
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let sum = |v: &[u8]| {
        patterns
            .iter()
            .map(|p| distance(v, p.as_bytes()))
            .sum::<u64>()
    };
    let consensus = consensus_of(&patterns)?;
    let best = all_patterns(sigma.symbols(), l)
        .iter()
        .map(|v| sum(v))
        .min()
        .expect("non-empty alphabet");
    if sum(consensus.as_bytes()) != best {
        let listed: Vec<String> = patterns.iter().map(ToString::to_string).collect();
        return Ok(Some(format!(
            "consensus {consensus} of {listed:?} scores {}, minimum is {best}\n",
            sum(consensus.as_bytes())
        )));
    }
    Ok(None)
}

fn hamming_metric(seed: u64, _: &SolverOptions) -> Result<Option<String>> {
    let mut rng = rng_for(seed, 4);
    let l = rng.gen_range(1..=8);
    let mut draw = || -> Vec<u8> { (0..l).map(|_| b"ABC"[rng.gen_range(0..3)]).collect() };
    let (a, b, c) = (draw(), draw(), draw());
    let ab = hamming(&a, &b)?;
    let ok = hamming(&a, &a)? == 0
        && ab == hamming(&b, &a)?
        && (ab == 0) == (a == b)
        && hamming(&a, &c)? <= ab + hamming(&b, &c)?;
    if !ok {
        return Ok(Some(format!(
            "metric axioms fail on {:?} {:?} {:?}\n",
            String::from_utf8_lossy(&a),
            String::from_utf8_lossy(&b),
            String::from_utf8_lossy(&c)
        )));
    }
    Ok(None)
}

fn clique_sum_of_pairs(seed: u64, opts: &SolverOptions) -> Result<Option<String>> {
    let inst = small_instance(seed, 5, &[2, 3], (1, 4), (3, 6), 3)?;
    let g = build_graph(&inst);
    let (t, m) = (inst.t(), inst.window_count());
    let mut best = u64::MAX;
    let mut offsets = vec![0usize; t];
    loop {
        let selection: Vec<Vertex> = offsets
            .iter()
            .enumerate()
            .map(|(p, &o)| Vertex::new(p, o))
            .collect();
        let mut pairs = 0;
        for i in 0..t {
            for j in i + 1..t {
                pairs += distance(inst.window(i, offsets[i]), inst.window(j, offsets[j]));
            }
        }
        let weight = clique_weight(&g, &selection)?;
        if weight != pairs {
            return fail(
                format!("selection {offsets:?} weighs {weight}, pairs sum {pairs}"),
                &inst,
            );
        }
        best = best.min(pairs);
        let Some(i) = (0..t).rev().find(|&i| offsets[i] + 1 < m) else {
            break;
        };
        offsets[i] += 1;
        offsets[i + 1..].iter_mut().for_each(|o| *o = 0);
    }
    let (_, weight) = min_weight_clique(&g, opts)?;
    if weight != best {
        return fail(format!("min clique {weight}, brute force {best}"), &inst);
    }
    Ok(None)
}

fn jobs_determinism(seed: u64, opts: &SolverOptions) -> Result<Option<String>> {
    let inst = small_instance(seed, 6, &[2, 4], (3, 5), (6, 10), 4)?;
    let one = opts.with_jobs(1);
    let four = opts.with_jobs(4);
    let r = 3.min(inst.t());
    let same = solve_exact_tuples(&inst, &one)? == solve_exact_tuples(&inst, &four)?
        && solve_exact_tuples_pruned(&inst, &one)? == solve_exact_tuples_pruned(&inst, &four)?
        && solve_exact_patterns(&inst, &one)? == solve_exact_patterns(&inst, &four)?
        && ptas_solve(&inst, r, &one)? == ptas_solve(&inst, r, &four)?;
    if !same {
        return fail("results differ between 1 and 4 jobs".into(), &inst);
    }
    Ok(None)
}

fn ratio_instance(seed: u64) -> Result<Instance> {
    let mut rng = rng_for(seed, 7);
    let sigma = [2, 4][rng.gen_range(0..2)];
    let t = rng.gen_range(4..=6);
    let n = rng.gen_range(8..=12);
    let l = rng.gen_range(3..=5);
    gen_random(t, n, l, &alphabet(sigma), rng.gen())
}

/// `cost ≤ bound · optimum`, with a zero optimum demanding a zero cost.
fn within_ratio(cost: u64, optimum: u64, bound: f64) -> bool {
    if optimum == 0 {
        cost == 0
    } else {
        cost as f64 <= bound * optimum as f64
    }
}

fn ptas_ratio(seed: u64, opts: &SolverOptions) -> Result<Option<String>> {
    let inst = ratio_instance(seed)?;
    let exact = solve_exact_tuples_pruned(&inst, opts)?.cost();
    let cost = ptas_solve(&inst, 3, opts)?.cost();
    let bound = ratio_bound(RatioParams {
        r: 3,
        sigma_size: inst.alphabet().len(),
    })?;
    if cost < exact || !within_ratio(cost, exact, bound) {
        return fail(
            format!("ptas {cost}, optimum {exact}, ratio bound {bound}"),
            &inst,
        );
    }
    Ok(None)
}

fn ptas_exact_at_t(seed: u64, opts: &SolverOptions) -> Result<Option<String>> {
    let inst = small_instance(seed, 8, &[2, 4], (2, 5), (4, 9), 4)?;
    let exact = solve_exact_tuples_pruned(&inst, opts)?.cost();
    let cost = ptas_solve(&inst, inst.t(), opts)?.cost();
    if cost != exact {
        return fail(
            format!("ptas at r = t gives {cost}, optimum {exact}"),
            &inst,
        );
    }
    Ok(None)
}

/// Splits a random instance into a base of `base` sequences and `k` added
/// ones, redrawing until the added sequences are new.
fn reopt_instance(seed: u64, salt: u64, base: usize, k: usize, sigma: usize) -> Result<ReoptInput> {
    let mut rng = rng_for(seed, salt);
    let n = rng.gen_range(7..=9);
    let l = rng.gen_range(3..=4);
    loop {
        let merged = gen_random(base + k, n, l, &alphabet(sigma), rng.gen())?;
        if let Ok(modified) = ModifiedInstance::split(&merged, base) {
            let opt = solve_exact_tuples_pruned(modified.base(), &SolverOptions::default())?.costed;
            return ReoptInput::new(modified, opt);
        }
    }
}

fn additive_bound(seed: u64, opts: &SolverOptions) -> Result<Option<String>> {
    for k in 1..=3 {
        let input = reopt_instance(seed, 9 + k as u64, 3, k, 2)?;
        let merged = input.modified().merged();
        let ext = k_best_align(&input);
        let exact = solve_exact_tuples_pruned(merged, opts)?.cost();
        let v = input.base_opt().consensus().as_bytes();
        let increments: u64 = ext.costed.solution().occurrences()[input.modified().base().t()..]
            .iter()
            .map(|o| distance(v, merged.window(o.seq_index, o.position)))
            .sum();
        let bound = (k * merged.l()) as u64;
        if ext.cost > exact + bound || ext.cost != input.base_opt().cost() + increments {
            return fail(
                format!(
                    "k = {k}: extension {} vs optimum {exact}, bound {bound}",
                    ext.cost
                ),
                merged,
            );
        }
    }
    Ok(None)
}

fn reopt_dominance(seed: u64, opts: &SolverOptions) -> Result<Option<String>> {
    for r in [3, 4] {
        let k = 1 + (seed as usize % 2);
        let sigma = if seed.is_multiple_of(3) { 4 } else { 2 };
        let input = reopt_instance(seed, 20 + r as u64, r, k, sigma)?;
        let merged = input.modified().merged();
        let out = reopt_ptas(&input, opts)?;
        let greedy = k_best_align(&input);
        let exact = solve_exact_tuples_pruned(merged, opts)?.cost();
        let bound = ratio_bound(RatioParams {
            r,
            sigma_size: sigma,
        })?;
        if out.cost > greedy.cost || out.cost < exact || !within_ratio(out.cost, exact, bound) {
            return fail(
                format!(
                    "r = {r}: reopt {} greedy {} optimum {exact}",
                    out.cost, greedy.cost
                ),
                merged,
            );
        }
    }
    Ok(None)
}

fn reopt_count(seed: u64, opts: &SolverOptions) -> Result<Option<String>> {
    let r = 2 + (seed as usize % 3);
    let k = 1 + (seed as usize % 2);
    let input = reopt_instance(seed, 30, r, k, 2)?;
    let merged = input.modified().merged();
    let out = reopt_ptas(&input, opts)?;
    let w = merged.window_count();
    let expected =
        sample_count(merged.t(), w, r, opts.samples) - sample_count(r, w, r, opts.samples) + 1;
    let scratch = ptas_solve(merged, r, opts)?.samples;
    if out.evaluations() as u128 != expected || out.evaluations() >= scratch {
        return fail(
            format!(
                "evaluations {}, expected {expected}, scratch {scratch}",
                out.evaluations()
            ),
            merged,
        );
    }
    Ok(None)
}

fn random_solution(inst: &Instance, rng: &mut ChaCha8Rng) -> Solution {
    let positions: Vec<usize> = (0..inst.t())
        .map(|_| rng.gen_range(0..inst.window_count()))
        .collect();
    Solution::from_positions(&positions)
}

fn decompose_additivity(seed: u64, _: &SolverOptions) -> Result<Option<String>> {
    let inst = small_instance(seed, 40, &[2, 3, 4], (1, 6), (3, 12), 5)?;
    let sol = random_solution(&inst, &mut rng_for(seed, 41));
    let total = solution_cost(&inst, &sol)?.cost();
    for i in 0..inst.t() {
        let (partial, leaf) = decompose_cost(&inst, &sol, i)?;
        if partial + leaf != total {
            return fail(
                format!(
                    "{:?} at {i}: {partial} + {leaf} != {total}",
                    sol.positions()
                ),
                &inst,
            );
        }
    }
    Ok(None)
}

fn best_align_identity(seed: u64, _: &SolverOptions) -> Result<Option<String>> {
    let input = reopt_instance(seed, 42, 3, 1, 2)?;
    let merged = input.modified().merged();
    let ext = best_align(&input)?;
    let y = ext.costed.solution().occurrences()[3];
    let d = distance(
        input.base_opt().consensus().as_bytes(),
        merged.window(3, y.position),
    );
    if ext.cost != input.base_opt().cost() + d {
        return fail(
            format!(
                "extension {} != base {} + {d}",
                ext.cost,
                input.base_opt().cost()
            ),
            merged,
        );
    }
    Ok(None)
}

fn realign_optimality(seed: u64, _: &SolverOptions) -> Result<Option<String>> {
    let inst = small_instance(seed, 43, &[2, 3], (1, 5), (3, 10), 4)?;
    let mut rng = rng_for(seed, 44);
    let v: Vec<u8> = (0..inst.l())
        .map(|_| inst.alphabet().symbols()[rng.gen_range(0..inst.alphabet().len())])
        .collect();
    let aligned = realign(&inst, &Pattern::new(v.clone()))?;
    let any = random_solution(&inst, &mut rng);
    let any_cost: u64 = any
        .occurrences()
        .iter()
        .map(|o| distance(&v, inst.window(o.seq_index, o.position)))
        .sum();
    if aligned.pattern_cost > any_cost || aligned.costed.cost() > aligned.pattern_cost {
        return fail(
            format!(
                "aligned {} vs arbitrary {any_cost}, re-scored {}",
                aligned.pattern_cost,
                aligned.costed.cost()
            ),
            &inst,
        );
    }
    Ok(None)
}
