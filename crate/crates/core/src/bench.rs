//! Benchmark suites and the CSV record format.
//!
//! Each suite walks a seeded family of instances and emits one
//! [`BenchRecord`] per (instance, method). Everything except `time_ns` is a
//! deterministic function of the configuration.

use std::io;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::exact::{exact_cost, solve_exact_tuples_pruned};
use crate::gen_io::{gen_planted, gen_random, serialize_instance, serialize_solution, PlantedSpec};
use crate::model::{Alphabet, Instance};
use crate::options::SolverOptions;
use crate::ptas::{ptas_solve, ratio_bound, sample_count, RatioParams};
use crate::reopt::{k_best_align, reopt_ptas, ModifiedInstance, ReoptInput};

/// CSV header, in column order.
pub const CSV_HEADER: &str = "instance,method,r,k,cost,exact_cost,ratio,gap,samples,time_ns,seed";

/// One CSV row; absent values are empty fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: String,
    pub method: String,
    pub r: Option<usize>,
    pub k: Option<usize>,
    pub cost: u64,
    pub exact_cost: Option<u64>,
    /// `cost / exact_cost`, present only when `exact_cost > 0`.
    pub ratio: Option<f64>,
    pub gap: Option<i64>,
    pub samples: Option<u64>,
    pub time_ns: u64,
    pub seed: u64,
}

impl BenchRecord {
    fn new(instance: &str, method: &str, seed: u64) -> Self {
        Self {
            instance: instance.to_string(),
            method: method.to_string(),
            r: None,
            k: None,
            cost: 0,
            exact_cost: None,
            ratio: None,
            gap: None,
            samples: None,
            time_ns: 0,
            seed,
        }
    }

    fn with_exact(mut self, exact: u64) -> Self {
        self.exact_cost = Some(exact);
        self.gap = Some(self.cost as i64 - exact as i64);
        self.ratio = (exact > 0).then(|| self.cost as f64 / exact as f64);
        self
    }
}

pub fn write_csv<W: io::Write>(records: &[BenchRecord], out: W) -> Result<(), csv::Error> {
    let mut writer = csv::Writer::from_writer(out);
    if records.is_empty() {
        writer.write_record(CSV_HEADER.split(','))?;
    }
    for rec in records {
        writer.serialize(rec)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<BenchRecord>, csv::Error> {
    csv::Reader::from_reader(input).deserialize().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// The restricted sampling scheme against the from-scratch one.
    ReoptVsScratch,
    /// Greedy extension gap as more sequences are appended.
    ErrorGrowth,
    /// Sampling-scheme ratio against the guarantee, over `r`.
    RatioSweep,
}

impl std::str::FromStr for Suite {
    type Err = crate::CspError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reopt-vs-scratch" => Ok(Self::ReoptVsScratch),
            "error-growth" => Ok(Self::ErrorGrowth),
            "ratio-sweep" => Ok(Self::RatioSweep),
            other => invalid(format!("unknown suite {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Random,
    Planted,
    /// The fixed two-letter example: four sequences plus `BBBBBBBB`.
    Ex1,
}

impl std::str::FromStr for Family {
    type Err = crate::CspError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Self::Random),
            "planted" => Ok(Self::Planted),
            "ex1" => Ok(Self::Ex1),
            other => invalid(format!("unknown family {other:?}")),
        }
    }
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::Planted => "planted",
            Family::Ex1 => "ex1",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub suite: Suite,
    pub family: Family,
    /// Number of seeds, starting at `first_seed`.
    pub seeds: u64,
    pub first_seed: u64,
    /// Base sequence count (reopt suites) or total sequence count (ratio sweep).
    pub t: usize,
    pub n: usize,
    pub l: usize,
    /// Sample size; for the ratio sweep, the largest `r` tried.
    pub r: usize,
    /// Appended sequences; for error growth, the largest `k` tried.
    pub k: usize,
    /// Substitutions per planted copy.
    pub d: usize,
    pub sigma: Alphabet,
    pub opts: SolverOptions,
}

impl BenchConfig {
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            family: match suite {
                Suite::ErrorGrowth => Family::Planted,
                _ => Family::Random,
            },
            seeds: 10,
            first_seed: 0,
            t: 4,
            n: 8,
            l: 4,
            r: 4,
            k: 1,
            d: 1,
            sigma: Alphabet::new("AB").expect("static alphabet"),
            opts: SolverOptions::default(),
        }
    }
}

/// A serialized input that broke an expectation or disagreed with a reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    /// Human-readable summary lines.
    pub notes: Vec<String>,
    pub counterexamples: Vec<Counterexample>,
    /// Violated guarantees; non-empty means the run failed.
    pub failures: Vec<String>,
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, u64)> {
    let start = Instant::now();
    let value = f()?;
    Ok((value, start.elapsed().as_nanos() as u64))
}

const EX1_MERGED: [&str; 5] = ["AAAABBBB", "BBBBAAAA", "AAAABBBA", "BBBBAAAA", "BBBBBBBB"];

fn draw_instance(cfg: &BenchConfig, total: usize, seed: u64) -> Result<Instance> {
    match cfg.family {
        Family::Ex1 => Instance::from_strs(&EX1_MERGED, 4),
        Family::Random => gen_random(total, cfg.n, cfg.l, &cfg.sigma, seed),
        Family::Planted => {
            let spec = PlantedSpec {
                t: total,
                n: cfg.n,
                l: cfg.l,
                d: cfg.d,
                sigma: cfg.sigma.clone(),
                seed,
            };
            Ok(gen_planted(&spec)?.0)
        }
    }
}

/// Draws `total` sequences for `seed`; retries with derived seeds until the
/// sequences after `base_count` differ from every base sequence.
fn draw_split(
    cfg: &BenchConfig,
    total: usize,
    base_count: usize,
    seed: u64,
) -> Result<ModifiedInstance> {
    if cfg.family == Family::Ex1 {
        return ModifiedInstance::split(&draw_instance(cfg, total, seed)?, 4);
    }
    let mut last_err = None;
    for attempt in 0..64u64 {
        let merged = draw_instance(cfg, total, seed.wrapping_add(attempt << 32))?;
        match ModifiedInstance::split(&merged, base_count) {
            Ok(m) => return Ok(m),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn reopt_input(modified: ModifiedInstance, opts: &SolverOptions) -> Result<ReoptInput> {
    let opt = solve_exact_tuples_pruned(modified.base(), opts)?.costed;
    ReoptInput::new(modified, opt)
}

fn counterexample(name: String, input: &ReoptInput, note: &str) -> Counterexample {
    let mut contents = format!("# {note}\n# merged instance\n");
    contents.push_str(&serialize_instance(input.modified().merged()));
    contents.push_str(&format!(
        "# base size {}\n# base optimum\n",
        input.modified().base().t()
    ));
    contents.push_str(&serialize_solution(input.base_opt()).expect("base optimum is non-empty"));
    Counterexample { name, contents }
}

pub fn run_suite(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.seeds == 0 {
        return invalid("at least one seed is required");
    }
    match cfg.suite {
        Suite::ReoptVsScratch => reopt_vs_scratch(cfg),
        Suite::ErrorGrowth => error_growth(cfg),
        Suite::RatioSweep => ratio_sweep(cfg),
    }
}

fn reopt_vs_scratch(cfg: &BenchConfig) -> Result<BenchReport> {
    let mut report = BenchReport::default();
    let (r, k) = match cfg.family {
        Family::Ex1 => (4, 1),
        _ => (cfg.r, cfg.k),
    };
    if k == 0 {
        return invalid("reopt-vs-scratch needs k >= 1");
    }
    let (mut agree, mut total) = (0u64, 0u64);
    for seed in cfg.first_seed..cfg.first_seed + cfg.seeds {
        let id = format!("{}-{seed}", cfg.family.name());
        let input = reopt_input(draw_split(cfg, r + k, r, seed)?, &cfg.opts)?;
        let merged = input.modified().merged();
        let exact = exact_cost(merged, &cfg.opts)?;

        let (alg4, t4) = timed(|| reopt_ptas(&input, &cfg.opts))?;
        let (alg1, t1) = timed(|| ptas_solve(merged, r, &cfg.opts))?;
        let (greedy, tg) = timed(|| Ok(k_best_align(&input)))?;

        let mut rec = BenchRecord::new(&id, "reopt-ptas", seed);
        rec.cost = alg4.cost;
        rec = rec.with_exact(exact);
        (rec.r, rec.k, rec.samples, rec.time_ns) = (Some(r), Some(k), Some(alg4.evaluations()), t4);
        report.records.push(rec);

        let mut rec = BenchRecord::new(&id, "ptas", seed);
        rec.cost = alg1.cost();
        rec = rec.with_exact(exact);
        (rec.r, rec.k, rec.samples, rec.time_ns) = (Some(r), Some(k), Some(alg1.samples), t1);
        report.records.push(rec);

        let mut rec = BenchRecord::new(&id, "k-best-align", seed);
        rec.cost = greedy.cost;
        rec = rec.with_exact(exact);
        (rec.k, rec.samples, rec.time_ns) = (Some(k), Some(1), tg);
        report.records.push(rec);

        if alg4.cost > greedy.cost {
            report.failures.push(format!(
                "{id}: reopt-ptas cost {} exceeds k-best-align cost {}",
                alg4.cost, greedy.cost
            ));
        }
        let windows = merged.window_count();
        let expected = sample_count(merged.t(), windows, r, cfg.opts.samples)
            - sample_count(r, windows, r, cfg.opts.samples)
            + 1;
        if alg4.evaluations() as u128 != expected {
            report.failures.push(format!(
                "{id}: reopt-ptas evaluated {} candidates, expected {expected}",
                alg4.evaluations()
            ));
        }
        if alg4.evaluations() >= alg1.samples {
            report.failures.push(format!(
                "{id}: reopt-ptas evaluated {} candidates, not fewer than ptas's {}",
                alg4.evaluations(),
                alg1.samples
            ));
        }
        total += 1;
        if alg4.cost == alg1.cost() {
            agree += 1;
        } else {
            report.counterexamples.push(counterexample(
                format!("reopt-vs-scratch-{id}.txt"),
                &input,
                &format!(
                    "reopt-ptas cost {} vs ptas cost {} at r = {r}",
                    alg4.cost,
                    alg1.cost()
                ),
            ));
        }
    }
    report.notes.push(format!(
        "reopt-ptas matched from-scratch ptas on {agree}/{total} instances"
    ));
    Ok(report)
}

fn error_growth(cfg: &BenchConfig) -> Result<BenchReport> {
    let mut report = BenchReport::default();
    let (t, max_k) = match cfg.family {
        Family::Ex1 => (4, 1),
        _ => (cfg.t, cfg.k),
    };
    if max_k == 0 {
        return invalid("error-growth needs k >= 1");
    }
    let mut worst = vec![0i64; max_k + 1];
    for seed in cfg.first_seed..cfg.first_seed + cfg.seeds {
        let id = format!("{}-{seed}", cfg.family.name());
        let full = draw_split(cfg, t + max_k, t, seed)?;
        let base_opt = solve_exact_tuples_pruned(full.base(), &cfg.opts)?.costed;
        for (k, worst_k) in worst.iter_mut().enumerate().skip(1) {
            let modified = ModifiedInstance::split(&full.merged().prefix(t + k)?, t)?;
            let input = ReoptInput::new(modified, base_opt.clone())?;
            let (ext, time) = timed(|| Ok(k_best_align(&input)))?;
            let exact = exact_cost(input.modified().merged(), &cfg.opts)?;
            let mut rec = BenchRecord::new(&id, "k-best-align", seed);
            rec.cost = ext.cost;
            rec = rec.with_exact(exact);
            (rec.k, rec.samples, rec.time_ns) = (Some(k), Some(1), time);
            let gap = rec.gap.expect("exact cost present");
            *worst_k = (*worst_k).max(gap);
            let bound = (k * cfg.l) as i64;
            if gap > bound {
                report
                    .failures
                    .push(format!("{id}: gap {gap} exceeds k*l = {bound} at k = {k}"));
            }
            report.records.push(rec);
        }
    }
    for (k, w) in worst.iter().enumerate().skip(1) {
        report
            .notes
            .push(format!("k = {k}: worst gap {w} (bound {})", k * cfg.l));
    }
    Ok(report)
}

fn ratio_sweep(cfg: &BenchConfig) -> Result<BenchReport> {
    let mut report = BenchReport::default();
    let max_r = cfg.r.min(cfg.t);
    if max_r == 0 {
        return invalid("ratio-sweep needs r >= 1");
    }
    let mut worst = vec![1.0f64; max_r + 1];
    for seed in cfg.first_seed..cfg.first_seed + cfg.seeds {
        let id = format!("{}-{seed}", cfg.family.name());
        let inst = draw_instance(cfg, cfg.t, seed)?;
        let (exact, time) = timed(|| solve_exact_tuples_pruned(&inst, &cfg.opts))?;
        let mut rec = BenchRecord::new(&id, "exact", seed);
        rec.cost = exact.cost();
        rec = rec.with_exact(exact.cost());
        (rec.samples, rec.time_ns) = (Some(exact.nodes_explored), time);
        report.records.push(rec);

        let top = max_r.min(inst.t());
        for (r, worst_r) in worst.iter_mut().enumerate().take(top + 1).skip(1) {
            let (out, time) = timed(|| ptas_solve(&inst, r, &cfg.opts))?;
            let mut rec = BenchRecord::new(&id, "ptas", seed);
            rec.cost = out.cost();
            rec = rec.with_exact(exact.cost());
            (rec.r, rec.samples, rec.time_ns) = (Some(r), Some(out.samples), time);
            if let Some(ratio) = rec.ratio {
                *worst_r = worst_r.max(ratio);
            }
            if out.cost() < exact.cost() {
                report
                    .failures
                    .push(format!("{id}: ptas cost below the optimum at r = {r}"));
            }
            let params = RatioParams {
                r,
                sigma_size: cfg.sigma.len(),
            };
            if let Ok(bound) = ratio_bound(params) {
                if out.cost() as f64 > bound * exact.cost() as f64 {
                    report.failures.push(format!(
                        "{id}: ptas cost {} exceeds {bound:.9} x optimum {} at r = {r}",
                        out.cost(),
                        exact.cost()
                    ));
                }
            }
            report.records.push(rec);
        }
    }
    for (r, w) in worst.iter().enumerate().skip(1) {
        let bound = ratio_bound(RatioParams {
            r,
            sigma_size: cfg.sigma.len(),
        })
        .map_or_else(|_| "unbounded".to_string(), |b| format!("{b:.9}"));
        report.notes.push(format!(
            "r = {r}: max observed ratio {w:.6}, guarantee {bound}"
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut rec = BenchRecord::new("random-3", "ptas", 3);
        rec.cost = 5;
        rec = rec.with_exact(4);
        rec.r = Some(3);
        let mut buf = Vec::new();
        write_csv(&[rec.clone(), BenchRecord::new("x", "exact", 0)], &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert!(text.contains("random-3,ptas,3,,5,4,1.25,1,,0,3\n"));
        assert_eq!(read_csv(&buf[..]).unwrap()[0], rec);
    }

    #[test]
    fn empty_csv_still_has_header() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn ex1_reopt_counts() {
        let mut cfg = BenchConfig::new(Suite::ReoptVsScratch);
        cfg.family = Family::Ex1;
        cfg.seeds = 1;
        let report = run_suite(&cfg).unwrap();
        assert!(report.failures.is_empty(), "{:?}", report.failures);
        let samples = |m: &str| {
            report
                .records
                .iter()
                .find(|r| r.method == m)
                .and_then(|r| r.samples)
                .unwrap()
        };
        assert_eq!(samples("reopt-ptas"), 2501);
        assert_eq!(samples("ptas"), 3125);
    }

    #[test]
    fn planted_exact_motif_has_no_gap() {
        // over two letters other zero-cost patterns can tie with the motif
        let mut cfg = BenchConfig::new(Suite::ErrorGrowth);
        cfg.sigma = Alphabet::new("ACGT").unwrap();
        cfg.d = 0;
        cfg.k = 3;
        cfg.seeds = 3;
        let report = run_suite(&cfg).unwrap();
        assert!(report.records.iter().all(|r| r.gap == Some(0)));
        assert_eq!(report.records.len(), 9);
    }
}
