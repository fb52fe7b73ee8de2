//! Reoptimization after appending sequences to a solved instance.
//!
//! Given an optimal solution of the base instance, [`k_best_align`] keeps its
//! consensus fixed and greedily aligns it into each appended sequence, and
//! [`reopt_ptas`] combines that extension with an r-sample sweep restricted to
//! samples that touch an appended sequence.

use crate::error::{invalid, CspError, Result};
use crate::exact::exact_cost;
use crate::model::{
    align_unchecked, best_window, cost_positions, solution_cost, Alignment, CostedSolution,
    Instance, Pattern,
};
use crate::options::SolverOptions;
use crate::ptas::{sweep, SampleSpace};

/// A base instance plus `k ≥ 1` appended sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModifiedInstance {
    base: Instance,
    merged: Instance,
}

impl ModifiedInstance {
    pub fn new(base: Instance, added: Vec<Vec<u8>>) -> Result<Self> {
        if added.is_empty() {
            return invalid("at least one sequence must be added");
        }
        for (i, s) in added.iter().enumerate() {
            if s.len() != base.n() {
                return invalid(format!(
                    "added sequence {i} has length {}, expected {}",
                    s.len(),
                    base.n()
                ));
            }
            if let Some(&b) = s.iter().find(|&&b| !base.alphabet().contains(b)) {
                return invalid(format!(
                    "added sequence {i} uses symbol {:?} outside the base alphabet",
                    b as char
                ));
            }
            if base.sequences().iter().any(|b| b == s) {
                return invalid(format!(
                    "added sequence {i} is already in the base instance"
                ));
            }
        }
        let mut sequences = base.sequences().to_vec();
        sequences.extend(added);
        let merged = Instance::with_alphabet(sequences, base.l(), base.alphabet().clone())?;
        Ok(Self { base, merged })
    }

    /// Splits `merged` after its first `base_count` sequences.
    pub fn split(merged: &Instance, base_count: usize) -> Result<Self> {
        if base_count >= merged.t() {
            return invalid(format!(
                "base of {base_count} sequences leaves nothing added out of {}",
                merged.t()
            ));
        }
        let base = merged.prefix(base_count)?;
        Self::new(base, merged.sequences()[base_count..].to_vec())
    }

    pub fn base(&self) -> &Instance {
        &self.base
    }

    pub fn merged(&self) -> &Instance {
        &self.merged
    }

    pub fn added(&self) -> &[Vec<u8>] {
        &self.merged.sequences()[self.base.t()..]
    }

    pub fn k(&self) -> usize {
        self.merged.t() - self.base.t()
    }
}

/// A modified instance with a solution of its base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReoptInput {
    modified: ModifiedInstance,
    base_opt: CostedSolution,
}

impl ReoptInput {
    /// Checks that `base_opt` is a consistently scored solution of the base.
    ///
    /// Optimality is a separate, more expensive check: [`Self::verify_optimal`].
    pub fn new(modified: ModifiedInstance, base_opt: CostedSolution) -> Result<Self> {
        let rescored = solution_cost(modified.base(), base_opt.solution())?;
        if rescored.cost() != base_opt.cost() || rescored.consensus() != base_opt.consensus() {
            return invalid(format!(
                "base solution claims cost {} with pattern {}, but scores {} with pattern {}",
                base_opt.cost(),
                base_opt.consensus(),
                rescored.cost(),
                rescored.consensus()
            ));
        }
        Ok(Self { modified, base_opt })
    }

    /// Fails with [`CspError::NotOptimal`] unless the base solution is optimal.
    pub fn verify_optimal(&self, opts: &SolverOptions) -> Result<()> {
        let optimum = exact_cost(self.modified.base(), opts)?;
        if optimum != self.base_opt.cost() {
            return Err(CspError::NotOptimal {
                given: self.base_opt.cost(),
                optimum,
            });
        }
        Ok(())
    }

    pub fn modified(&self) -> &ModifiedInstance {
        &self.modified
    }

    pub fn base_opt(&self) -> &CostedSolution {
        &self.base_opt
    }
}

/// A base solution extended over the appended sequences with its consensus held fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    /// Consensus of the base solution.
    pub pattern: Pattern,
    /// `cost(base_opt) + Σ_i d(pattern, y_{t+i})`.
    pub cost: u64,
    /// `d(pattern, y_{t+i})` per appended sequence.
    pub increments: Vec<u64>,
    /// The extended occurrences re-scored against their own consensus.
    pub costed: CostedSolution,
}

/// Extends over all appended sequences.
pub fn k_best_align(input: &ReoptInput) -> Extension {
    let merged = input.modified.merged();
    let v = input.base_opt.consensus();
    let (positions, increments): (Vec<usize>, Vec<u64>) = input
        .modified
        .added()
        .iter()
        .map(|seq| best_window(seq, v.as_bytes()))
        .unzip();
    let solution = input.base_opt.solution().extended(&positions);
    Extension {
        pattern: v.clone(),
        cost: input.base_opt.cost() + increments.iter().sum::<u64>(),
        increments,
        costed: cost_positions(merged, &solution.positions()),
    }
}

/// [`k_best_align`] for exactly one appended sequence.
pub fn best_align(input: &ReoptInput) -> Result<Extension> {
    if input.modified.k() != 1 {
        return invalid(format!(
            "best-align takes one added sequence, got {}",
            input.modified.k()
        ));
    }
    Ok(k_best_align(input))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// The greedy extension of the base optimum.
    SolA,
    /// The best sample touching an appended sequence.
    SolB,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::SolA => "SOL_A",
            Branch::SolB => "SOL_B",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReoptOutcome {
    pub branch: Branch,
    pub cost: u64,
    pub sol_a: Extension,
    pub sol_b: Alignment,
    /// Aligned cost of the base consensus over the whole merged instance.
    /// Diagnostic only; the SOL_A branch is scored without realignment.
    pub sol_a_realigned_cost: u64,
    /// Samples swept for SOL_B.
    pub samples: u64,
}

impl ReoptOutcome {
    /// Candidate evaluations: the SOL_B samples plus the one extension.
    pub fn evaluations(&self) -> u64 {
        self.samples + 1
    }

    /// The winning occurrences, scored against their own consensus.
    pub fn costed(&self) -> &CostedSolution {
        match self.branch {
            Branch::SolA => &self.sol_a.costed,
            Branch::SolB => &self.sol_b.costed,
        }
    }
}

/// Sampling scheme seeded with a base optimum; `r` is the base size.
///
/// SOL_B sweeps only the r-samples of the merged instance that use at least
/// one window of an appended sequence, aligning each sample consensus over
/// all sequences. SOL_A wins ties.
pub fn reopt_ptas(input: &ReoptInput, opts: &SolverOptions) -> Result<ReoptOutcome> {
    let merged = input.modified.merged();
    let r = input.modified.base().t();
    let mut space = SampleSpace::new(merged, r, opts.samples)?;
    space.min_last_seq = r;

    let sol_a = k_best_align(input);
    let sol_a_realigned_cost = align_unchecked(merged, sol_a.pattern.as_bytes()).pattern_cost;

    let found = sweep(merged, space, opts.jobs);
    let (cost_b, v) = found.best.expect("an appended sequence yields samples");
    let sol_b = align_unchecked(merged, &v);
    debug_assert_eq!(sol_b.pattern_cost, cost_b);

    let (branch, cost) = if sol_a.cost <= cost_b {
        (Branch::SolA, sol_a.cost)
    } else {
        (Branch::SolB, cost_b)
    };
    Ok(ReoptOutcome {
        branch,
        cost,
        sol_a,
        sol_b,
        sol_a_realigned_cost,
        samples: found.evaluated,
    })
}

/// `(cost − optimum(merged), k·l)`.
pub fn additive_gap(input: &ReoptInput, cost: u64, opts: &SolverOptions) -> Result<(i64, u64)> {
    let merged = input.modified.merged();
    let optimum = exact_cost(merged, opts)?;
    let bound = (input.modified.k() * merged.l()) as u64;
    Ok((cost as i64 - optimum as i64, bound))
}
