//! The `csp` command line.
//!
//! Exit codes: 0 ok, 1 property failure, 2 input error, 3 budget exceeded,
//! 4 base solution not optimal.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{run_suite, write_csv, BenchConfig, Family, Suite};
use crate::error::{CspError, Result};
use crate::exact::{solve_exact_patterns, solve_exact_tuples_pruned};
use crate::gen_io::{parse_fasta, parse_instance, parse_solution, serialize_solution};
use crate::model::{Alphabet, CostedSolution, Instance};
use crate::options::{SampleMode, SolverOptions};
use crate::ptas::ptas_solve;
use crate::reopt::{
    additive_gap, best_align, k_best_align, reopt_ptas, ModifiedInstance, ReoptInput,
};
use crate::verify::{run_verify, VerifySuite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_NOT_OPTIMAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "csp",
    version,
    about = "Closest substring solvers and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance from scratch.
    Solve(SolveArgs),
    /// Reoptimize after appending sequences to an instance with a known optimum.
    Reopt(ReoptArgs),
    /// Run a benchmark suite and write CSV.
    Bench(BenchArgs),
    /// Check invariants on generated instances.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolveMethod {
    Exact,
    ExactPatterns,
    Ptas,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReoptMethod {
    BestAlign,
    KBestAlign,
    ReoptPtas,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Worker threads for inner enumerations.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// How r-samples are drawn.
    #[arg(long, default_value = "distinct-seq", value_parser = parse_mode)]
    samples: SampleMode,
}

impl Common {
    fn options(&self) -> Result<SolverOptions> {
        Ok(SolverOptions::from_env()?
            .with_jobs(self.jobs)
            .with_samples(self.samples))
    }
}

fn parse_mode(s: &str) -> std::result::Result<SampleMode, String> {
    s.parse().map_err(|e: CspError| e.to_string())
}

#[derive(clap::Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    method: SolveMethod,
    /// Sample size for `ptas`.
    #[arg(long, default_value_t = 3)]
    r: usize,
    /// Solution file; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Read FASTA instead of the native format; needs `--l`.
    #[arg(long, requires = "l")]
    fasta: bool,
    #[arg(long)]
    l: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(clap::Args, Debug)]
struct ReoptArgs {
    #[arg(long)]
    base: PathBuf,
    /// Appended sequences, one per line; an instance file is accepted too.
    #[arg(long)]
    added: PathBuf,
    /// Solution file holding an optimum of the base instance.
    #[arg(long)]
    opt: PathBuf,
    #[arg(long, value_enum)]
    method: ReoptMethod,
    /// Skip the exhaustive optimality check of `--opt`.
    #[arg(long)]
    no_verify_opt: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(clap::Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    suite: Suite,
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long, default_value_t = 0)]
    first_seed: u64,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Alphabet symbols, e.g. `ACGT`.
    #[arg(long)]
    sigma: Option<String>,
    /// Where counterexample files go; defaults to the CSV's directory.
    #[arg(long)]
    dump_dir: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: VerifySuite,
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    /// Where counterexample files go.
    #[arg(long, default_value = ".")]
    dump_dir: PathBuf,
    #[command(flatten)]
    common: Common,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<CspError> for Failure {
    fn from(e: CspError) -> Self {
        let code = match e {
            CspError::InstanceTooLarge { .. } => EXIT_BUDGET,
            CspError::NotOptimal { .. } => EXIT_NOT_OPTIMAL,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn write(path: &Path, contents: &str) -> std::result::Result<(), Failure> {
    fs::write(path, contents).map_err(|e| io_failure(path, e))
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Reopt(a) => reopt(a),
        Command::Bench(a) => bench(a),
        Command::Verify(a) => verify(a),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("csp: {}", f.message);
            f.code
        }
    }
}

fn emit_solution(costed: &CostedSolution, out: Option<&Path>) -> std::result::Result<(), Failure> {
    let text = serialize_solution(costed)?;
    match out {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve(a: SolveArgs) -> std::result::Result<i32, Failure> {
    let opts = a.common.options()?;
    let text = read(&a.input)?;
    let inst = if a.fasta {
        parse_fasta(&text, a.l.expect("clap enforces --l"))?
    } else {
        parse_instance(&text)?
    };
    let start = Instant::now();
    let (name, costed, samples) = match a.method {
        SolveMethod::Exact => {
            let res = solve_exact_tuples_pruned(&inst, &opts)?;
            ("exact", res.costed, res.nodes_explored)
        }
        SolveMethod::ExactPatterns => {
            let res = solve_exact_patterns(&inst, &opts)?;
            ("exact-patterns", res.costed, res.nodes_explored)
        }
        SolveMethod::Ptas => {
            let res = ptas_solve(&inst, a.r, &opts)?;
            ("ptas", res.alignment.costed, res.samples)
        }
    };
    let time_ns = start.elapsed().as_nanos();
    println!(
        "{name} {} {} {time_ns} {samples}",
        costed.cost(),
        costed.consensus()
    );
    emit_solution(&costed, a.out.as_deref())?;
    Ok(EXIT_OK)
}

/// Appended sequences: an instance file, or bare lines.
fn parse_added(text: &str, base: &Instance) -> Result<Vec<Vec<u8>>> {
    if text.starts_with("l=") {
        let inst = parse_instance(text)?;
        if inst.l() != base.l() {
            return Err(CspError::InvalidArgument(format!(
                "added file has l = {}, base has l = {}",
                inst.l(),
                base.l()
            )));
        }
        return Ok(inst.sequences().to_vec());
    }
    Ok(text
        .lines()
        .map(str::trim_end)
        .filter(|s| !s.is_empty())
        .map(|s| s.as_bytes().to_vec())
        .collect())
}

fn reopt(a: ReoptArgs) -> std::result::Result<i32, Failure> {
    let opts = a.common.options()?;
    let base = parse_instance(&read(&a.base)?)?;
    let added = parse_added(&read(&a.added)?, &base)?;
    let modified = ModifiedInstance::new(base, added)?;
    let opt = parse_solution(&read(&a.opt)?)?;
    let input = match ReoptInput::new(modified, opt) {
        Ok(input) => input,
        // A mis-scored solution cannot be the optimum it claims to be.
        Err(e) if !a.no_verify_opt => {
            return Err(Failure {
                code: EXIT_NOT_OPTIMAL,
                message: e.to_string(),
            })
        }
        Err(e) => return Err(e.into()),
    };
    if !a.no_verify_opt {
        input.verify_optimal(&opts)?;
    }

    let start = Instant::now();
    let (name, cost, costed, branch) = match a.method {
        ReoptMethod::BestAlign => {
            let ext = best_align(&input)?;
            ("best-align", ext.cost, ext.costed, None)
        }
        ReoptMethod::KBestAlign => {
            let ext = k_best_align(&input);
            ("k-best-align", ext.cost, ext.costed, None)
        }
        ReoptMethod::ReoptPtas => {
            let out = reopt_ptas(&input, &opts)?;
            let costed = out.costed().clone();
            (
                "reopt-ptas",
                out.cost,
                costed,
                Some((out.branch, out.evaluations())),
            )
        }
    };
    let time_ns = start.elapsed().as_nanos();

    println!("method={name}");
    println!("cost={cost}");
    println!("consensus={}", costed.consensus());
    if let Some((branch, evaluations)) = branch {
        println!("branch={branch}");
        println!("samples={evaluations}");
    }
    match additive_gap(&input, cost, &opts) {
        Ok((gap, bound)) => {
            println!("gap={gap}");
            println!("bound={bound}");
        }
        Err(CspError::InstanceTooLarge { .. }) => println!("gap=unavailable"),
        Err(e) => return Err(e.into()),
    }
    println!("time_ns={time_ns}");
    if let Some(path) = &a.out {
        write(path, &serialize_solution(&costed)?)?;
    }
    Ok(EXIT_OK)
}

fn bench(a: BenchArgs) -> std::result::Result<i32, Failure> {
    let mut cfg = BenchConfig::new(a.suite);
    cfg.seeds = a.seeds;
    cfg.first_seed = a.first_seed;
    cfg.opts = a.common.options()?;
    if let Some(f) = a.family {
        cfg.family = f;
    }
    let fields = [
        (a.t, &mut cfg.t),
        (a.n, &mut cfg.n),
        (a.l, &mut cfg.l),
        (a.r, &mut cfg.r),
        (a.k, &mut cfg.k),
        (a.d, &mut cfg.d),
    ];
    for (given, slot) in fields {
        if let Some(v) = given {
            *slot = v;
        }
    }
    if let Some(s) = &a.sigma {
        cfg.sigma = Alphabet::new(s)?;
    }

    let report = run_suite(&cfg)?;
    let file = fs::File::create(&a.out).map_err(|e| io_failure(&a.out, e))?;
    write_csv(&report.records, file).map_err(|e| io_failure(&a.out, e))?;
    for note in &report.notes {
        println!("{note}");
    }
    let dump_dir = a
        .dump_dir
        .or_else(|| a.out.parent().map(Path::to_path_buf))
        .unwrap_or_default();
    for cx in &report.counterexamples {
        let path = dump_dir.join(&cx.name);
        write(&path, &cx.contents)?;
        println!("counterexample written to {}", path.display());
    }
    for f in &report.failures {
        eprintln!("FAIL {f}");
    }
    Ok(if report.failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_PROPERTY
    })
}

fn verify(a: VerifyArgs) -> std::result::Result<i32, Failure> {
    let opts = a.common.options()?;
    let outcomes = run_verify(a.suite, a.seeds, &opts)?;
    let mut code = EXIT_OK;
    for o in &outcomes {
        match &o.counterexample {
            None => println!("PASS {}/{} ({} seeds)", o.suite, o.name, o.checked),
            Some(cx) => {
                let path = a.dump_dir.join(format!("counterexample-{}.txt", o.name));
                write(&path, cx)?;
                println!(
                    "FAIL {}/{} after {} seeds, counterexample in {}",
                    o.suite,
                    o.name,
                    o.checked,
                    path.display()
                );
                code = EXIT_PROPERTY;
            }
        }
    }
    Ok(code)
}
