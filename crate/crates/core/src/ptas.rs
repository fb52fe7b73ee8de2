//! The deterministic r-sampling approximation scheme.
//!
//! Every r-sample of windows is collapsed to its consensus, the consensus is
//! aligned against all sequences, and the cheapest alignment wins.
//!
//! Samples are identified by window ids `seq * (n - l + 1) + pos`. The
//! canonical order lists picks ascending by `(seq, pos)` and samples
//! lexicographically by their pick lists, which is plain lexicographic order
//! on the id vectors.

use crate::error::{invalid, CspError, Result};
use crate::model::{
    align_unchecked, consensus_into, pattern_cost_below, Alignment, Instance, Occurrence,
};
use crate::options::{SampleMode, SolverOptions};
use crate::par::{ordered_min, ChunkBest};

/// `r` windows taken from an instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RSample {
    picks: Vec<Occurrence>,
}

impl RSample {
    pub fn picks(&self) -> &[Occurrence] {
        &self.picks
    }

    pub fn r(&self) -> usize {
        self.picks.len()
    }
}

/// Describes which window-id vectors are samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct SampleSpace {
    pub t: usize,
    pub windows: usize,
    pub r: usize,
    pub mode: SampleMode,
    /// The last pick must come from a sequence at or after this index.
    pub min_last_seq: usize,
}

impl SampleSpace {
    pub fn new(inst: &Instance, r: usize, mode: SampleMode) -> Result<Self> {
        if r == 0 || r > inst.t() {
            return invalid(format!("sample size r = {r} out of range 1..={}", inst.t()));
        }
        Ok(Self {
            t: inst.t(),
            windows: inst.window_count(),
            r,
            mode,
            min_last_seq: 0,
        })
    }

    /// Smallest id allowed at `level` given the previous pick.
    fn lower(&self, level: usize, prev: Option<usize>) -> usize {
        let after_prev = match (prev, self.mode) {
            (None, _) => 0,
            (Some(g), SampleMode::DistinctSeq) => (g / self.windows + 1) * self.windows,
            (Some(g), SampleMode::Multiset) => g,
        };
        if level + 1 == self.r {
            after_prev.max(self.min_last_seq * self.windows)
        } else {
            after_prev
        }
    }

    /// Largest id allowed at `level` (inclusive).
    fn upper(&self, level: usize) -> usize {
        match self.mode {
            SampleMode::DistinctSeq => (self.t - self.r + level + 1) * self.windows - 1,
            SampleMode::Multiset => self.t * self.windows - 1,
        }
    }

    /// Ids the first pick can take; each one heads a chunk.
    pub fn first_picks(&self) -> std::ops::RangeInclusive<usize> {
        self.lower(0, None)..=self.upper(0)
    }

    pub fn count(&self) -> u128 {
        let full = sample_count(self.t, self.windows, self.r, self.mode);
        if self.min_last_seq == 0 {
            return full;
        }
        full - sample_count(self.min_last_seq, self.windows, self.r, self.mode)
    }

    pub fn occurrence(&self, id: usize) -> Occurrence {
        Occurrence::new(id / self.windows, id % self.windows)
    }
}

/// Lexicographic walk over the samples of a [`SampleSpace`], optionally with
/// the first pick held fixed.
#[derive(Debug, Clone)]
pub(crate) struct Cursor {
    space: SampleSpace,
    picks: Vec<usize>,
    frozen: usize,
    started: bool,
}

impl Cursor {
    pub fn new(space: SampleSpace) -> Self {
        Self {
            space,
            picks: vec![0; space.r],
            frozen: 0,
            started: false,
        }
    }

    pub fn with_first(space: SampleSpace, first: usize) -> Self {
        let mut cursor = Self::new(space);
        cursor.picks[0] = first;
        cursor.frozen = 1;
        cursor
    }

    fn fill_from(&mut self, level: usize) -> bool {
        for j in level..self.space.r {
            let prev = j.checked_sub(1).map(|p| self.picks[p]);
            self.picks[j] = self.space.lower(j, prev);
            if self.picks[j] > self.space.upper(j) {
                return false;
            }
        }
        true
    }

    pub fn advance(&mut self) -> Option<&[usize]> {
        if !self.started {
            self.started = true;
            return self.fill_from(self.frozen).then_some(&self.picks[..]);
        }
        for j in (self.frozen..self.space.r).rev() {
            if self.picks[j] < self.space.upper(j) {
                self.picks[j] += 1;
                if self.fill_from(j + 1) {
                    return Some(&self.picks);
                }
            }
        }
        None
    }
}

/// Iterator over every r-sample in canonical order.
#[derive(Debug, Clone)]
pub struct RSamples {
    cursor: Cursor,
}

impl Iterator for RSamples {
    type Item = RSample;

    fn next(&mut self) -> Option<RSample> {
        let space = self.cursor.space;
        let ids = self.cursor.advance()?;
        Some(RSample {
            picks: ids.iter().map(|&g| space.occurrence(g)).collect(),
        })
    }
}

pub fn enumerate_r_samples(inst: &Instance, r: usize, mode: SampleMode) -> Result<RSamples> {
    Ok(RSamples {
        cursor: Cursor::new(SampleSpace::new(inst, r, mode)?),
    })
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Closed-form number of r-samples over `t` sequences with `windows` windows
/// each: `C(t, r) · windows^r`, or `C(t·windows + r − 1, r)` for multisets.
pub fn sample_count(t: usize, windows: usize, r: usize, mode: SampleMode) -> u128 {
    match mode {
        SampleMode::DistinctSeq => binomial(t, r) * crate::exact::saturating_pow(windows, r),
        SampleMode::Multiset => binomial(t * windows + r - 1, r),
    }
}

/// Cheapest aligned sample consensus over `space`.
pub(crate) fn sweep(inst: &Instance, space: SampleSpace, jobs: usize) -> ChunkBest<Vec<u8>> {
    let firsts = space.first_picks();
    let base = *firsts.start();
    let chunks = firsts.count();
    let found = ordered_min(chunks, jobs, |chunk| {
        let mut cursor = Cursor::with_first(space, base + chunk);
        let mut windows: Vec<&[u8]> = Vec::with_capacity(space.r);
        let mut column = Vec::with_capacity(space.r);
        let mut v = Vec::with_capacity(inst.l());
        let mut best = ChunkBest::empty();
        while let Some(ids) = cursor.advance() {
            windows.clear();
            windows.extend(ids.iter().map(|&g| {
                let occ = space.occurrence(g);
                inst.window(occ.seq_index, occ.position)
            }));
            consensus_into(&windows, &mut column, &mut v);
            best.evaluated += 1;
            if let Some(cost) = pattern_cost_below(inst, &v, best.bound()) {
                best.offer(cost, || v.clone());
            }
        }
        best
    });
    debug_assert_eq!(found.evaluated as u128, space.count());
    found
}

/// Outcome of the sampling scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtasOutcome {
    /// Winning sample consensus aligned against every sequence.
    pub alignment: Alignment,
    /// Samples evaluated.
    pub samples: u64,
}

impl PtasOutcome {
    /// The objective minimized across samples: the aligned pattern cost.
    pub fn cost(&self) -> u64 {
        self.alignment.pattern_cost
    }
}

/// Runs the r-sampling scheme.
///
/// Samples are compared by the aligned cost of their consensus; equal costs
/// keep the earliest sample in canonical order.
pub fn ptas_solve(inst: &Instance, r: usize, opts: &SolverOptions) -> Result<PtasOutcome> {
    let space = SampleSpace::new(inst, r, opts.samples)?;
    let found = sweep(inst, space, opts.jobs);
    let (cost, v) = found.best.expect("sample space is non-empty");
    let alignment = align_unchecked(inst, &v);
    debug_assert_eq!(alignment.pattern_cost, cost);
    Ok(PtasOutcome {
        alignment,
        samples: found.evaluated,
    })
}

/// Parameters of the guaranteed approximation ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioParams {
    pub r: usize,
    pub sigma_size: usize,
}

/// `1 + (4|Σ| − 4) / (√e · (√(4r + 1) − 3))`.
pub fn ratio_bound(p: RatioParams) -> Result<f64> {
    if p.sigma_size < 2 {
        return invalid(format!("alphabet size {} is below 2", p.sigma_size));
    }
    if p.r <= 2 {
        return Err(CspError::UnboundedRatio { r: p.r });
    }
    let sigma = p.sigma_size as f64;
    let denom = std::f64::consts::E.sqrt() * ((4.0 * p.r as f64 + 1.0).sqrt() - 3.0);
    Ok(1.0 + (4.0 * sigma - 4.0) / denom)
}
