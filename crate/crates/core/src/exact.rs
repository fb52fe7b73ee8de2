//! Exhaustive oracles for the optimum.
//!
//! Two searches over disjoint spaces reach the same optimum:
//!
//! * [`solve_exact_tuples`] walks every occurrence tuple, one window per
//!   sequence, in odometer order with sequence 0 slowest, and scores each
//!   tuple against its own consensus;
//! * [`solve_exact_patterns`] walks every pattern in `Σ^l` and aligns it.
//!
//! The majority consensus minimizes the distance sum of a fixed tuple, so the
//! tuple walk is complete, and the two optima must agree.

use crate::error::{CspError, Result};
use crate::model::{
    align_unchecked, cost_positions, pattern_cost_below, CostedSolution, Instance, Pattern,
};
use crate::options::SolverOptions;
use crate::par::{ordered_min, ChunkBest};

/// Leading prefixes are expanded until at least this many chunks exist.
const MIN_CHUNKS: u128 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub costed: CostedSolution,
    /// The optimal pattern: the winning tuple's consensus, or the winning
    /// enumerated pattern.
    pub pattern: Pattern,
    /// Candidates scored.
    pub nodes_explored: u64,
}

impl ExactResult {
    pub fn cost(&self) -> u64 {
        self.costed.cost()
    }
}

pub(crate) fn saturating_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

pub(crate) fn check_budget(candidates: u128, budget: u64) -> Result<()> {
    if candidates > budget as u128 {
        return Err(CspError::InstanceTooLarge { candidates, budget });
    }
    Ok(())
}

/// Number of leading digits to fix per chunk so that `radix^depth` reaches
/// [`MIN_CHUNKS`] or the digits run out.
fn prefix_depth(radix: usize, digits: usize) -> usize {
    let mut depth = 0;
    while depth < digits && saturating_pow(radix, depth) < MIN_CHUNKS {
        depth += 1;
    }
    depth
}

/// Writes the base-`radix` digits of `index` into `out`, most significant first.
fn decode(mut index: usize, radix: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = index % radix;
        index /= radix;
    }
}

struct TupleSearch {
    codes: Vec<Vec<u8>>,
    t: usize,
    l: usize,
    sigma: usize,
    windows: usize,
    prune: bool,
}

impl TupleSearch {
    fn new(inst: &Instance, prune: bool) -> Self {
        let alphabet = inst.alphabet();
        let codes = inst
            .sequences()
            .iter()
            .map(|s| {
                s.iter()
                    .map(|&b| alphabet.index_of(b).expect("validated symbol") as u8)
                    .collect()
            })
            .collect();
        Self {
            codes,
            t: inst.t(),
            l: inst.l(),
            sigma: alphabet.len(),
            windows: inst.window_count(),
            prune,
        }
    }

    #[inline]
    fn add(&self, counts: &mut [u32], seq: usize, pos: usize) {
        let code = &self.codes[seq][pos..pos + self.l];
        for (c, &s) in code.iter().enumerate() {
            counts[c * self.sigma + s as usize] += 1;
        }
    }

    #[inline]
    fn remove(&self, counts: &mut [u32], seq: usize, pos: usize) {
        let code = &self.codes[seq][pos..pos + self.l];
        for (c, &s) in code.iter().enumerate() {
            counts[c * self.sigma + s as usize] -= 1;
        }
    }

    /// Consensus cost of the first `depth` chosen windows.
    #[inline]
    fn cost(&self, counts: &[u32], depth: usize) -> u64 {
        counts
            .chunks_exact(self.sigma)
            .map(|col| (depth as u32 - col.iter().copied().max().unwrap_or(0)) as u64)
            .sum()
    }

    fn run_chunk(&self, chunk: usize, prefix: usize) -> ChunkBest<Vec<usize>> {
        let mut positions = vec![0; prefix];
        decode(chunk, self.windows, &mut positions);
        let mut counts = vec![0u32; self.l * self.sigma];
        for (seq, &pos) in positions.iter().enumerate() {
            self.add(&mut counts, seq, pos);
        }
        let mut best = ChunkBest::empty();
        self.descend(prefix, &mut counts, &mut positions, &mut best);
        best
    }

    fn descend(
        &self,
        depth: usize,
        counts: &mut [u32],
        positions: &mut Vec<usize>,
        best: &mut ChunkBest<Vec<usize>>,
    ) {
        if depth == self.t {
            best.evaluated += 1;
            let cost = self.cost(counts, depth);
            best.offer(cost, || positions.clone());
            return;
        }
        for pos in 0..self.windows {
            self.add(counts, depth, pos);
            // The consensus cost of a prefix never exceeds that of any
            // completion, so a prefix already at the incumbent is dead.
            let open =
                !self.prune || depth + 1 == self.t || self.cost(counts, depth + 1) < best.bound();
            if open {
                positions.push(pos);
                self.descend(depth + 1, counts, positions, best);
                positions.pop();
            }
            self.remove(counts, depth, pos);
        }
    }
}

fn tuple_search(inst: &Instance, opts: &SolverOptions, prune: bool) -> Result<ExactResult> {
    let w = inst.window_count();
    check_budget(saturating_pow(w, inst.t()), opts.budget)?;
    let search = TupleSearch::new(inst, prune);
    let prefix = prefix_depth(w, inst.t());
    let chunks = saturating_pow(w, prefix) as usize;
    let found = ordered_min(chunks, opts.jobs, |c| search.run_chunk(c, prefix));
    let (cost, positions) = found.best.expect("at least one tuple exists");
    let costed = cost_positions(inst, &positions);
    debug_assert_eq!(costed.cost(), cost);
    Ok(ExactResult {
        pattern: costed.consensus().clone(),
        costed,
        nodes_explored: found.evaluated,
    })
}

/// Optimum over all `(n - l + 1)^t` occurrence tuples.
///
/// Ties go to the lexicographically smallest position tuple.
pub fn solve_exact_tuples(inst: &Instance, opts: &SolverOptions) -> Result<ExactResult> {
    tuple_search(inst, opts, false)
}

/// Same result as [`solve_exact_tuples`], skipping subtrees whose prefix
/// consensus cost already matches the incumbent.
pub fn solve_exact_tuples_pruned(inst: &Instance, opts: &SolverOptions) -> Result<ExactResult> {
    tuple_search(inst, opts, true)
}

/// Optimum over all `|Σ|^l` patterns, ties to the smallest pattern.
pub fn solve_exact_patterns(inst: &Instance, opts: &SolverOptions) -> Result<ExactResult> {
    let symbols = inst.alphabet().symbols();
    let sigma = symbols.len();
    let l = inst.l();
    check_budget(saturating_pow(sigma, l), opts.budget)?;
    let prefix = prefix_depth(sigma, l);
    let chunks = saturating_pow(sigma, prefix) as usize;
    let tail = saturating_pow(sigma, l - prefix) as usize;

    let found = ordered_min(chunks, opts.jobs, |chunk| {
        let mut digits = vec![0usize; l];
        decode(chunk, sigma, &mut digits[..prefix]);
        let mut v: Vec<u8> = digits.iter().map(|&d| symbols[d]).collect();
        let mut best = ChunkBest::empty();
        for i in 0..tail {
            decode(i, sigma, &mut digits[prefix..]);
            for c in prefix..l {
                v[c] = symbols[digits[c]];
            }
            best.evaluated += 1;
            if let Some(cost) = pattern_cost_below(inst, &v, best.bound()) {
                best.offer(cost, || v.clone());
            }
        }
        best
    });
    let (cost, v) = found.best.expect("alphabet is non-empty");
    let aligned = align_unchecked(inst, &v);
    debug_assert_eq!(aligned.pattern_cost, cost);
    debug_assert_eq!(aligned.costed.cost(), cost);
    Ok(ExactResult {
        costed: aligned.costed,
        pattern: aligned.pattern,
        nodes_explored: found.evaluated,
    })
}

/// Optimal cost, by the pruned tuple search.
pub fn exact_cost(inst: &Instance, opts: &SolverOptions) -> Result<u64> {
    solve_exact_tuples_pruned(inst, opts).map(|r| r.cost())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1() -> Instance {
        Instance::from_strs(&["AAAABBBB", "BBBBAAAA", "AAAABBBA", "BBBBAAAA"], 4).unwrap()
    }

    fn ex1_added() -> Instance {
        Instance::from_strs(
            &["AAAABBBB", "BBBBAAAA", "AAAABBBA", "BBBBAAAA", "BBBBBBBB"],
            4,
        )
        .unwrap()
    }

    #[test]
    fn tuples_on_worked_example() {
        let opts = SolverOptions::default();
        let r = solve_exact_tuples(&ex1(), &opts).unwrap();
        assert_eq!(r.cost(), 0);
        assert_eq!(r.pattern, Pattern::from("AAAA"));
        assert_eq!(r.nodes_explored, 625);

        let r = solve_exact_tuples(&ex1_added(), &opts).unwrap();
        assert_eq!(r.cost(), 1);
        assert_eq!(r.pattern, Pattern::from("BBBB"));
        assert_eq!(r.costed.solution().positions(), vec![4, 0, 3, 0, 0]);
    }

    #[test]
    fn single_sequence_is_free() {
        let inst = Instance::from_strs(&["ABCABD"], 3).unwrap();
        let opts = SolverOptions::default();
        assert_eq!(solve_exact_tuples(&inst, &opts).unwrap().cost(), 0);
        assert_eq!(solve_exact_patterns(&inst, &opts).unwrap().cost(), 0);
    }

    #[test]
    fn patterns_on_worked_example() {
        let r = solve_exact_patterns(&ex1_added(), &SolverOptions::default()).unwrap();
        assert_eq!(r.cost(), 1);
        assert_eq!(r.pattern, Pattern::from("BBBB"));
        assert_eq!(r.nodes_explored, 16);
    }

    #[test]
    fn identical_sequences_cost_nothing() {
        let inst = Instance::from_strs(&["ABBAB", "ABBAB", "ABBAB"], 3).unwrap();
        assert_eq!(
            solve_exact_patterns(&inst, &SolverOptions::default())
                .unwrap()
                .cost(),
            0
        );
    }

    #[test]
    fn budget_is_enforced() {
        let opts = SolverOptions::default().with_budget(100);
        let err = solve_exact_tuples(&ex1(), &opts).unwrap_err();
        assert_eq!(
            err,
            CspError::InstanceTooLarge {
                candidates: 625,
                budget: 100
            }
        );
        let opts = SolverOptions::default().with_budget(15);
        assert!(matches!(
            solve_exact_patterns(&ex1(), &opts),
            Err(CspError::InstanceTooLarge { candidates: 16, .. })
        ));
    }

    #[test]
    fn pruning_matches_full_walk() {
        let opts = SolverOptions::default();
        for inst in [ex1(), ex1_added()] {
            let full = solve_exact_tuples(&inst, &opts).unwrap();
            let pruned = solve_exact_tuples_pruned(&inst, &opts).unwrap();
            assert_eq!(full.costed, pruned.costed);
            assert!(pruned.nodes_explored <= full.nodes_explored);
        }
    }

    #[test]
    fn decode_is_big_endian() {
        let mut d = [0; 3];
        decode(7, 2, &mut d);
        assert_eq!(d, [1, 1, 1]);
        decode(5, 3, &mut d);
        assert_eq!(d, [0, 1, 2]);
    }
}
