use crate::error::{invalid, Result};

/// Default cap on the number of candidates an exhaustive search may enumerate.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "CSP_BUDGET";

/// Which collections of windows count as an r-sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampleMode {
    /// `r` windows from `r` distinct sequences.
    #[default]
    DistinctSeq,
    /// Any multiset of `r` windows drawn from all sequences.
    Multiset,
}

impl std::str::FromStr for SampleMode {
    type Err = crate::CspError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distinct-seq" => Ok(Self::DistinctSeq),
            "multiset" => Ok(Self::Multiset),
            other => invalid(format!("unknown sample mode {other:?}")),
        }
    }
}

/// Knobs shared by the enumerative solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    pub budget: u64,
    /// Worker count; `1` runs on the calling thread.
    pub jobs: usize,
    pub samples: SampleMode,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            jobs: 1,
            samples: SampleMode::DistinctSeq,
        }
    }
}

impl SolverOptions {
    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_samples(mut self, samples: SampleMode) -> Self {
        self.samples = samples;
        self
    }

    /// Defaults, with the budget taken from `CSP_BUDGET` when set.
    pub fn from_env() -> Result<Self> {
        let mut opts = Self::default();
        if let Ok(raw) = std::env::var(BUDGET_ENV) {
            opts.budget = raw
                .trim()
                .parse()
                .or_else(|_| invalid(format!("{BUDGET_ENV}={raw:?} is not an unsigned integer")))?;
        }
        Ok(opts)
    }
}
