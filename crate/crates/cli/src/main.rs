//! Command-line harness: single solves, the Newton vs modified-Newton
//! benchmark table, lambda sweeps, and matrix classification.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use stieltjes_newton_cli::report::{
    bench_rows_to_csv, fmt_f64, sweep_rows_to_csv, BenchRow, Method, SweepRow,
};
use stieltjes_newton::error::Error;
use stieltjes_newton::linalg::{classify, read_matrix_market, SymmetricSparseMatrix};
use stieltjes_newton::nonlinearity::Nonlinearity;
use stieltjes_newton::problems::{discretize_gp1d, generate_synthetic, Gp1dSpec, SyntheticSpec};
use stieltjes_newton::solver::{
    lambda_sweep, solve, BetaMode, InnerSchedule, ProblemInstance, SolveResult, SolverConfig,
    TraceVerbosity,
};

/// Environment variable capping benchmark parallelism.
const THREADS_ENV: &str = "STIELTJES_NEWTON_THREADS";

#[derive(Parser)]
#[command(
    name = "stieltjes-newton",
    version,
    about = "Monotone Newton-type solvers for A x + F(x) = lambda x with Stieltjes A"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and report the result
    Solve(SolveArgs),
    /// Run Newton and modified Newton over a list of sizes and emit a table
    Bench(BenchArgs),
    /// Solve an ascending list of lambdas on one matrix
    Sweep(SweepArgs),
    /// Classify a Matrix Market file (Z / positive definite / irreducible / Stieltjes)
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProblemKind {
    /// 1-D Gross-Pitaevskii finite-difference discretization
    Gp1d,
    /// Seeded random irreducible Stieltjes instance (chooses its own lambda)
    Synthetic,
    /// Matrix Market file given by --matrix
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NlKind {
    Cubic,
    Power,
}

#[derive(Args)]
struct InstanceArgs {
    /// Problem source
    #[arg(long, value_enum, default_value_t = ProblemKind::Gp1d)]
    problem: ProblemKind,

    /// Matrix Market file (required for --problem file)
    #[arg(long)]
    matrix: Option<PathBuf>,

    /// Nonlinearity family (file problems; gp1d is cubic by construction)
    #[arg(long, value_enum, default_value_t = NlKind::Cubic)]
    nl: NlKind,

    /// Nonlinearity coefficient k
    #[arg(long, default_value_t = 1.0)]
    k: f64,

    /// Power-family exponent (must exceed 2; 3 reproduces the cubic)
    #[arg(long, default_value_t = 3.0)]
    p: f64,

    /// Interior grid points (gp1d) or dimension (synthetic)
    #[arg(long, default_value_t = 500)]
    n: usize,

    /// Seed for synthetic instances
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Off-diagonal fill fraction for synthetic instances
    #[arg(long, default_value_t = 0.25)]
    density: f64,

    /// Diagonal boost for synthetic instances
    #[arg(long, default_value_t = 1.0)]
    boost: f64,
}

impl InstanceArgs {
    fn nonlinearity(&self) -> Result<Nonlinearity, Error> {
        match self.nl {
            NlKind::Cubic => Nonlinearity::cubic(self.k),
            NlKind::Power => Nonlinearity::power(self.k, self.p),
        }
    }

    /// Builds the full instance for a single solve.
    fn instance(&self, lambda: f64) -> Result<(ProblemInstance, String), Error> {
        match self.problem {
            ProblemKind::Gp1d => {
                let spec = Gp1dSpec {
                    k: self.k,
                    ..Gp1dSpec::new(self.n)
                }
                .with_lambda(lambda);
                let desc = format!("gp1d n={} lambda={} k={}", self.n, lambda, self.k);
                Ok((discretize_gp1d(&spec)?, desc))
            }
            ProblemKind::Synthetic => {
                let spec = SyntheticSpec {
                    density: self.density,
                    diagonal_boost: self.boost,
                    ..SyntheticSpec::new(self.n, self.seed)
                };
                let inst = generate_synthetic(&spec)?;
                let desc = format!(
                    "synthetic n={} seed={} lambda={}",
                    self.n,
                    self.seed,
                    inst.lambda()
                );
                Ok((inst, desc))
            }
            ProblemKind::File => {
                let path = self.matrix.as_ref().ok_or_else(|| {
                    Error::InvalidParameter("--matrix is required for --problem file".into())
                })?;
                let inst =
                    stieltjes_newton::problems::load_instance(path, self.nonlinearity()?, lambda)?;
                let desc = format!("file {} lambda={}", path.display(), lambda);
                Ok((inst, desc))
            }
        }
    }

    /// Builds just the matrix and nonlinearity, for sweeps.
    fn matrix_and_nl(&self) -> Result<(SymmetricSparseMatrix, Nonlinearity), Error> {
        match self.problem {
            ProblemKind::Gp1d => {
                let spec = Gp1dSpec {
                    k: self.k,
                    ..Gp1dSpec::new(self.n)
                };
                let inst = discretize_gp1d(&spec)?;
                Ok((inst.matrix().clone(), inst.nonlinearity().clone()))
            }
            ProblemKind::Synthetic => {
                let spec = SyntheticSpec {
                    density: self.density,
                    diagonal_boost: self.boost,
                    ..SyntheticSpec::new(self.n, self.seed)
                };
                let inst = generate_synthetic(&spec)?;
                Ok((inst.matrix().clone(), inst.nonlinearity().clone()))
            }
            ProblemKind::File => {
                let path = self.matrix.as_ref().ok_or_else(|| {
                    Error::InvalidParameter("--matrix is required for --problem file".into())
                })?;
                Ok((read_matrix_market(path)?, self.nonlinearity()?))
            }
        }
    }
}

#[derive(Args)]
struct SolverArgs {
    /// Starting scale: `auto` (doubling search) or a fixed value
    #[arg(long, default_value = "10", value_parser = parse_beta)]
    beta: BetaMode,

    /// Inner steps per derivative factorization (1 = standard Newton)
    #[arg(long, default_value_t = 3)]
    inner_steps: usize,

    /// Residual stopping tolerance, infinity norm
    #[arg(long, default_value_t = 1e-10)]
    eps: f64,

    /// Cap on outer steps (factorizations)
    #[arg(long, default_value_t = 200)]
    max_outer: usize,

    /// Trace verbosity in JSON output
    #[arg(long, value_enum, default_value_t = TraceArg::Summary)]
    trace: TraceArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TraceArg {
    Summary,
    Full,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            beta_mode: self.beta,
            inner_steps: InnerSchedule::Constant(self.inner_steps),
            eps: self.eps,
            max_outer: self.max_outer,
            trace_verbosity: match self.trace {
                TraceArg::Summary => TraceVerbosity::Summary,
                TraceArg::Full => TraceVerbosity::Full,
            },
            ..SolverConfig::default()
        }
    }
}

fn parse_beta(s: &str) -> Result<BetaMode, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(BetaMode::Auto(1.0));
    }
    s.parse::<f64>()
        .map(BetaMode::Fixed)
        .map_err(|_| format!("expected `auto` or a number, got `{s}`"))
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,

    /// Eigenvalue parameter (ignored for synthetic problems, which draw
    /// their own lambda above mu)
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,

    #[command(flatten)]
    solver: SolverArgs,

    /// Write the full result (including trace) as JSON to this path
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Sizes of the Gross-Pitaevskii instance to run
    #[arg(long = "n-list", value_delimiter = ',', default_values_t = [500usize, 1000])]
    n_list: Vec<usize>,

    /// Methods to run
    #[arg(long, value_delimiter = ',', value_enum, default_values_t = [Method::Newton, Method::Modified])]
    methods: Vec<Method>,

    #[arg(long, default_value_t = 2.0)]
    lambda: f64,

    #[arg(long, default_value_t = 1.0)]
    k: f64,

    #[command(flatten)]
    solver: SolverArgs,

    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,

    /// Write the table to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    instance: InstanceArgs,

    /// Ascending lambda values
    #[arg(long = "lambda-list", value_delimiter = ',', required = true)]
    lambda_list: Vec<f64>,

    #[command(flatten)]
    solver: SolverArgs,

    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,

    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Matrix Market file to classify
    #[arg(long)]
    matrix: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Check(args) => cmd_check(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| e.to_string()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<(), String> {
    let (instance, desc) = args
        .instance
        .instance(args.lambda)
        .map_err(|e| e.to_string())?;
    let cfg = args.solver.config();
    let result = match solve(&instance, &cfg) {
        Ok(r) => r,
        Err(Error::NoConvergence { reason, partial }) => {
            print_solve_summary(&desc, &instance, &partial);
            return Err(format!("did not converge: {reason}"));
        }
        Err(e) => return Err(e.to_string()),
    };
    print_solve_summary(&desc, &instance, &result);
    if let Some(path) = &args.out {
        let json = serde_json::to_string_pretty(&result).map_err(|e| e.to_string())?;
        fs::write(path, json).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn print_solve_summary(desc: &str, instance: &ProblemInstance, r: &SolveResult) {
    let gnorm = instance
        .residual(&r.x)
        .map(|g| g.iter().fold(0.0f64, |m, &v| m.max(v.abs())))
        .unwrap_or(f64::NAN);
    let x_inf = r.x.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let x_min = r.x.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    println!("problem:     {desc}");
    println!("converged:   {}", r.converged);
    println!(
        "outer-iter:  {} (inner steps: {})",
        r.trace.factorizations, r.trace.total_inner_steps
    );
    println!(
        "beta:        {} (starting condition satisfied: {})",
        r.beta_used, r.condition9_satisfied
    );
    println!("|G(x)|_inf:  {gnorm:.6e}");
    println!("NRes:        {:.6e}", r.nres);
    println!("|x|_inf:     {x_inf:.15}  min x: {x_min:.6e}");
    println!("time:        {:.6} s", r.trace.wall_time_s);
}

fn cmd_bench(args: BenchArgs) -> Result<(), String> {
    let mut runs = Vec::new();
    for &n in &args.n_list {
        for &method in &args.methods {
            runs.push((n, method));
        }
    }
    let pool = build_pool()?;
    let rows: Vec<BenchRow> = pool.install(|| {
        use rayon::prelude::*;
        runs.par_iter()
            .map(|&(n, method)| run_bench_row(n, method, &args))
            .collect()
    });

    let text = match args.format {
        FormatArg::Csv => bench_rows_to_csv(&rows),
        FormatArg::Json => {
            let mut s = serde_json::to_string_pretty(&rows).map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
    };
    emit(args.out.as_ref(), &text)?;
    let failures: Vec<&BenchRow> = rows.iter().filter(|r| r.error.is_some()).collect();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(format!("{} of {} runs failed", failures.len(), rows.len()))
    }
}

fn build_pool() -> Result<rayon::ThreadPool, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let threads: usize = v
            .parse()
            .map_err(|_| format!("{THREADS_ENV} must be a positive integer, got `{v}`"))?;
        if threads == 0 {
            return Err(format!("{THREADS_ENV} must be positive"));
        }
        builder = builder.num_threads(threads);
    }
    builder.build().map_err(|e| e.to_string())
}

fn run_bench_row(n: usize, method: Method, args: &BenchArgs) -> BenchRow {
    let cfg = SolverConfig {
        beta_mode: args.solver.beta,
        inner_steps: InnerSchedule::Constant(match method {
            Method::Newton => 1,
            Method::Modified => args.solver.inner_steps,
        }),
        eps: args.solver.eps,
        max_outer: args.solver.max_outer,
        ..SolverConfig::default()
    };
    let started = Instant::now();
    let outcome = discretize_gp1d(
        &Gp1dSpec {
            k: args.k,
            ..Gp1dSpec::new(n)
        }
        .with_lambda(args.lambda),
    )
    .and_then(|p| solve(&p, &cfg));
    let time_s = started.elapsed().as_secs_f64();
    match outcome {
        Ok(r) => BenchRow {
            n,
            method,
            time_s,
            nres: r.nres,
            outer_iter: r.trace.factorizations,
            inner_total: r.trace.total_inner_steps,
            condition9: r.condition9_satisfied,
            error: None,
        },
        Err(Error::NoConvergence { reason, partial }) => BenchRow {
            n,
            method,
            time_s,
            nres: partial.nres,
            outer_iter: partial.trace.factorizations,
            inner_total: partial.trace.total_inner_steps,
            condition9: partial.condition9_satisfied,
            error: Some(reason),
        },
        Err(e) => BenchRow {
            n,
            method,
            time_s,
            nres: f64::NAN,
            outer_iter: 0,
            inner_total: 0,
            condition9: false,
            error: Some(e.to_string()),
        },
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<(), String> {
    let (matrix, nl) = args.instance.matrix_and_nl().map_err(|e| e.to_string())?;
    let cfg = args.solver.config();
    let results = lambda_sweep(&matrix, &nl, &args.lambda_list, &cfg, false)
        .map_err(|e| e.to_string())?;
    let rows: Vec<SweepRow> = args
        .lambda_list
        .iter()
        .zip(&results)
        .map(|(&lambda, r)| SweepRow {
            lambda,
            x_inf_norm: r.x.iter().fold(0.0f64, |m, &v| m.max(v.abs())),
            x_min: r.x.iter().fold(f64::INFINITY, |m, &v| m.min(v)),
            outer_iter: r.trace.factorizations,
        })
        .collect();
    let text = match args.format {
        FormatArg::Csv => sweep_rows_to_csv(&rows),
        FormatArg::Json => {
            let mut s = serde_json::to_string_pretty(&rows).map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
    };
    emit(args.out.as_ref(), &text)
}

fn cmd_check(args: CheckArgs) -> Result<(), String> {
    let matrix = read_matrix_market(&args.matrix).map_err(|e| e.to_string())?;
    let c = classify(&matrix).map_err(|e| e.to_string())?;
    println!("file:               {}", args.matrix.display());
    println!("dimension:          {}", matrix.dim());
    println!("layout:             {:?}", matrix.layout());
    println!("z_matrix:           {}", c.is_z_matrix);
    println!("symmetric:          {}", c.is_symmetric);
    println!("positive_definite:  {}", c.is_positive_definite);
    println!("irreducible:        {}", c.is_irreducible);
    println!("stieltjes:          {}", c.is_stieltjes);
    match &c.certificate_vector {
        Some(v) => {
            let v_min = v.iter().fold(f64::INFINITY, |m, &v| m.min(v));
            println!(
                "certificate:        available (v = A^-1 e > 0, min v_i = {})",
                fmt_f64(v_min)
            );
        }
        None => println!("certificate:        none (not a Stieltjes matrix)"),
    }
    Ok(())
}
