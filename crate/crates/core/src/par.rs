//! Deterministic chunked min-reduction, parallel when the `parallel` feature is on.
//!
//! A search space is cut into a fixed, ordered list of chunks whose layout
//! depends only on the instance, never on the worker count. Each chunk keeps
//! the first strictly-best candidate in its own enumeration order, and the
//! merge scans chunk results in chunk order with the same strict comparison,
//! so the winner is the first minimum of the whole sequential enumeration.

/// Best candidate of one chunk plus the number of candidates it scored.
#[derive(Debug)]
pub(crate) struct ChunkBest<T> {
    pub best: Option<(u64, T)>,
    pub evaluated: u64,
}

impl<T> ChunkBest<T> {
    pub fn empty() -> Self {
        Self {
            best: None,
            evaluated: 0,
        }
    }

    /// Keeps `value` only if it is strictly cheaper than the incumbent.
    #[inline]
    pub fn offer(&mut self, cost: u64, value: impl FnOnce() -> T) {
        if self.best.as_ref().is_none_or(|(c, _)| cost < *c) {
            self.best = Some((cost, value()));
        }
    }

    /// Cost a candidate has to beat, `u64::MAX` before the first one.
    #[inline]
    pub fn bound(&self) -> u64 {
        self.best.as_ref().map_or(u64::MAX, |(c, _)| *c)
    }
}

fn merge<T>(parts: impl IntoIterator<Item = ChunkBest<T>>) -> ChunkBest<T> {
    let mut total = ChunkBest::empty();
    for part in parts {
        total.evaluated += part.evaluated;
        if let Some((cost, value)) = part.best {
            total.offer(cost, || value);
        }
    }
    total
}

/// Runs `search` on every chunk index in `0..chunks` and merges in order.
pub(crate) fn ordered_min<T, F>(chunks: usize, jobs: usize, search: F) -> ChunkBest<T>
where
    T: Send,
    F: Fn(usize) -> ChunkBest<T> + Sync,
{
    #[cfg(feature = "parallel")]
    if jobs > 1 && chunks > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("failed to build worker pool");
        let parts: Vec<ChunkBest<T>> =
            pool.install(|| (0..chunks).into_par_iter().map(&search).collect());
        return merge(parts);
    }
    let _ = jobs;
    merge((0..chunks).map(search))
}

/// Whether this build can use more than one worker.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
