//! Command-line surface for the regularised factorisation library.
//!
//! Subcommands: `svd`, `rpca`, `rsvd`, `gen-noisy`, `denoise-demo`. Every
//! run writes its artifacts plus a `manifest.json` into `--output-dir`.
//! Exit codes: 0 on success, 2 on usage errors, 1 on runtime failures.

pub mod experiment;
pub mod io;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use regmf::{
    realize, reconstruct, solve_rpca, solve_rsvd, svd, truncate_svd, DescentConfig, InitialQ,
    Matrix, PcaProblem, RegularizerMatrix, RegularizerSpec, RsvdProblem, Strategy,
};

use experiment::{
    run_denoise_demo, DescentSummary, ExperimentSpec, ExperimentSummary, Metrics, RegSummary,
    RunManifest, Signal, Timings,
};
use io::{read_matrix_csv, write_matrix_csv, write_vector_csv};

#[derive(Parser)]
#[command(
    name = "regmf",
    version,
    about = "Regularised PCA- and SVD-type matrix factorisations",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Truncated SVD baseline of a CSV matrix
    Svd(SvdArgs),
    /// Closed-form regularised PCA: A ≈ PQᵀ
    Rpca(SolverArgs),
    /// Iterative regularised SVD: A ≈ P·diag(b)·Qᵀ
    Rsvd(RsvdArgs),
    /// Draw a noisy rank-1 matrix A = uvᵀ + τZ
    GenNoisy(GenNoisyArgs),
    /// Denoising comparison: truncated SVD vs regularised SVD
    DenoiseDemo(DenoiseArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Input matrix CSV (comma-separated, one row per line, no header)
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    /// Directory for artifacts and manifest.json
    #[arg(long, value_name = "PATH", default_value = ".")]
    output_dir: PathBuf,
    /// Target rank k
    #[arg(long, value_name = "K", default_value_t = 1)]
    rank: usize,
}

#[derive(Args)]
struct SvdArgs {
    #[command(flatten)]
    common: InputArgs,
}

#[derive(Args)]
struct SolverArgs {
    #[command(flatten)]
    common: InputArgs,
    /// Weight of the left-factor penalty λ‖DP‖²
    #[arg(long, value_name = "X", default_value_t = 0.0)]
    lambda: f64,
    /// Weight of the right-factor penalty μ‖GQ‖²
    #[arg(long, value_name = "X", default_value_t = 0.0)]
    mu: f64,
    /// Left regulariser: none|identity|second_difference|graph_laplacian:ADJ.csv|custom:L.csv
    #[arg(long, value_name = "KIND[:PATH]", default_value = "none")]
    reg_d: String,
    /// Right regulariser, same format as --reg-d
    #[arg(long, value_name = "KIND[:PATH]", default_value = "none")]
    reg_g: String,
}

#[derive(Args)]
struct DescentArgs {
    /// Descent strategy over the rotation group
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    /// Budget of accepted rotations
    #[arg(long, value_name = "N", default_value_t = 2000)]
    max_iters: usize,
    /// Relative convergence tolerance (the absolute floor stays 1e-12)
    #[arg(long, value_name = "X", default_value_t = 1e-9)]
    tol: f64,
    /// Initial rotation angle for line searches / largest random angle
    #[arg(long, value_name = "X", default_value_t = 0.5)]
    step: f64,
    /// Start from the leading singular vectors (warm) or a seeded random frame
    #[arg(long, value_enum, default_value_t = InitArg::Warm)]
    init: InitArg,
}

#[derive(Args)]
struct RsvdArgs {
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    descent: DescentArgs,
    /// Seed for the random strategy and random initialisation
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Rows of the generated matrix
    #[arg(long, value_name = "N", default_value_t = 60)]
    rows: usize,
    /// Columns of the generated matrix
    #[arg(long, value_name = "M", default_value_t = 60)]
    cols: usize,
    /// Noise scale τ in A = uvᵀ + τZ
    #[arg(long, value_name = "X", default_value_t = 0.25)]
    tau: f64,
    /// Ground-truth signal shape
    #[arg(long, value_enum, default_value_t = SignalArg::GaussianBump)]
    signal: SignalArg,
    /// u signal CSV (required for --signal custom)
    #[arg(long, value_name = "PATH")]
    u_csv: Option<PathBuf>,
    /// v signal CSV (required for --signal custom)
    #[arg(long, value_name = "PATH")]
    v_csv: Option<PathBuf>,
    /// Seed for the noise draw
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
    /// Directory for artifacts and manifest.json
    #[arg(long, value_name = "PATH", default_value = ".")]
    output_dir: PathBuf,
}

#[derive(Args)]
struct GenNoisyArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
}

#[derive(Args)]
struct DenoiseArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    /// Target rank k
    #[arg(long, value_name = "K", default_value_t = 1)]
    rank: usize,
    /// Weight of the left-factor penalty
    #[arg(long, value_name = "X", default_value_t = 1.5)]
    lambda: f64,
    /// Weight of the right-factor penalty
    #[arg(long, value_name = "X", default_value_t = 1.5)]
    mu: f64,
    #[command(flatten)]
    descent: DescentArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Steepest,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Warm,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignalArg {
    GaussianBump,
    Sine,
    Custom,
}

enum AppError {
    Usage(String),
    Failure(anyhow::Error),
}

impl From<anyhow::Error> for AppError {
    fn from(e: anyhow::Error) -> Self {
        AppError::Failure(e)
    }
}

impl From<regmf::Error> for AppError {
    fn from(e: regmf::Error) -> Self {
        AppError::Failure(e.into())
    }
}

fn usage(msg: impl Into<String>) -> AppError {
    AppError::Usage(msg.into())
}

/// Parses argv and executes one run. Returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    2
                }
            };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(AppError::Failure(e)) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn execute(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Svd(args) => run_svd(args),
        Command::Rpca(args) => run_rpca(args),
        Command::Rsvd(args) => run_rsvd(args),
        Command::GenNoisy(args) => run_gen_noisy(args),
        Command::DenoiseDemo(args) => run_denoise(args),
    }
}

fn prepare_out_dir(dir: &Path) -> Result<(), AppError> {
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    Ok(())
}

/// Splits `KIND[:PATH]` and loads the regulariser at the required size.
fn parse_regularizer(
    flag: &str,
    value: &str,
    size: usize,
) -> Result<(RegularizerMatrix, RegSummary), AppError> {
    let (kind_raw, path) = match value.split_once(':') {
        Some((k, p)) => (k, Some(p.to_string())),
        None => (value, None),
    };
    let kind = kind_raw.trim().to_ascii_lowercase().replace('-', "_");
    let spec = match kind.as_str() {
        "none" => RegularizerSpec::none(size),
        "identity" => RegularizerSpec::identity(size),
        "second_difference" => RegularizerSpec::second_difference(size),
        "graph_laplacian" => {
            let p = path
                .as_ref()
                .ok_or_else(|| usage(format!("{flag} graph_laplacian needs :PATH to an adjacency CSV")))?;
            let adjacency = read_matrix_csv(Path::new(p))?;
            RegularizerSpec::graph_laplacian(adjacency)
        }
        "custom" => {
            let p = path
                .as_ref()
                .ok_or_else(|| usage(format!("{flag} custom needs :PATH to a PSD matrix CSV")))?;
            let custom = read_matrix_csv(Path::new(p))?;
            RegularizerSpec::custom(custom)
        }
        other => {
            return Err(usage(format!(
                "{flag}: unknown regulariser kind {other:?} (expected none, identity, second_difference, graph_laplacian, custom)"
            )))
        }
    };
    if spec.size != size {
        return Err(AppError::Failure(anyhow::anyhow!(
            "{flag}: regulariser is {}x{0}, input needs {size}x{size}",
            spec.size
        )));
    }
    let summary = RegSummary { kind, path };
    Ok((realize(&spec)?, summary))
}

fn descent_config(args: &DescentArgs, seed: u64, default_strategy: Strategy) -> DescentConfig {
    DescentConfig {
        strategy: match args.strategy {
            Some(StrategyArg::Steepest) => Strategy::Steepest,
            Some(StrategyArg::Random) => Strategy::Random,
            None => default_strategy,
        },
        t0: args.step,
        max_iters: args.max_iters,
        tol_rel: args.tol,
        seed,
        ..DescentConfig::default()
    }
}

fn relative_error(recon: &Matrix, reference: &Matrix) -> f64 {
    recon.sub(reference).frobenius_norm() / reference.frobenius_norm().max(f64::MIN_POSITIVE)
}

fn run_svd(args: SvdArgs) -> Result<(), AppError> {
    let started = Instant::now();
    let common = args.common;
    prepare_out_dir(&common.output_dir)?;
    let a = read_matrix_csv(&common.input)?;
    let bound = a.rows().min(a.cols());
    if common.rank == 0 || common.rank > bound {
        return Err(usage(format!(
            "--rank {} out of range 1..={bound} for a {}x{} input",
            common.rank,
            a.rows(),
            a.cols()
        )));
    }
    let dec = svd(&a);
    let approx = truncate_svd(&dec, common.rank)?;

    let out = &common.output_dir;
    write_matrix_csv(&dec.u, &out.join("svd_u.csv"))?;
    write_vector_csv(&dec.sigma, &out.join("svd_sigma.csv"))?;
    write_matrix_csv(&dec.v, &out.join("svd_v.csv"))?;
    write_matrix_csv(&approx, &out.join("approx.csv"))?;

    let manifest = RunManifest {
        solver: "svd".into(),
        k: common.rank,
        lambda: 0.0,
        mu: 0.0,
        reg_d: RegSummary {
            kind: "none".into(),
            path: None,
        },
        reg_g: RegSummary {
            kind: "none".into(),
            path: None,
        },
        seed: 0,
        experiment: None,
        descent: None,
        input: Some(common.input.display().to_string()),
        output_dir: out.display().to_string(),
        outputs: vec![
            "svd_u.csv".into(),
            "svd_sigma.csv".into(),
            "svd_v.csv".into(),
            "approx.csv".into(),
        ],
        metrics: Metrics {
            err_vs_input: Some(relative_error(&approx, &a)),
            ..Metrics::default()
        },
        timings_ms: Timings {
            total: started.elapsed().as_secs_f64() * 1e3,
            solve: None,
        },
    };
    manifest.write(out)?;
    Ok(())
}

fn run_rpca(args: SolverArgs) -> Result<(), AppError> {
    let started = Instant::now();
    prepare_out_dir(&args.common.output_dir)?;
    let a = read_matrix_csv(&args.common.input)?;
    let (l, reg_d) = parse_regularizer("--reg-d", &args.reg_d, a.rows())?;
    let (m, reg_g) = parse_regularizer("--reg-g", &args.reg_g, a.cols())?;
    let prob = PcaProblem::new(a.clone(), args.common.rank, args.lambda, args.mu, l, m)?;
    let solve_started = Instant::now();
    let sol = solve_rpca(&prob)?;
    let solve_ms = solve_started.elapsed().as_secs_f64() * 1e3;
    let approx = sol.p.mul(&sol.q.transpose());

    let out = &args.common.output_dir;
    write_matrix_csv(&sol.p, &out.join("p.csv"))?;
    write_matrix_csv(&sol.q, &out.join("q.csv"))?;
    write_matrix_csv(&approx, &out.join("approx.csv"))?;
    write_vector_csv(&sol.k_spectrum, &out.join("k_spectrum.csv"))?;

    let manifest = RunManifest {
        solver: "rpca".into(),
        k: args.common.rank,
        lambda: args.lambda,
        mu: args.mu,
        reg_d,
        reg_g,
        seed: 0,
        experiment: None,
        descent: None,
        input: Some(args.common.input.display().to_string()),
        output_dir: out.display().to_string(),
        outputs: vec![
            "p.csv".into(),
            "q.csv".into(),
            "approx.csv".into(),
            "k_spectrum.csv".into(),
        ],
        metrics: Metrics {
            err_vs_input: Some(relative_error(&approx, &a)),
            objective: Some(sol.objective),
            ..Metrics::default()
        },
        timings_ms: Timings {
            total: started.elapsed().as_secs_f64() * 1e3,
            solve: Some(solve_ms),
        },
    };
    manifest.write(out)?;
    Ok(())
}

fn run_rsvd(args: RsvdArgs) -> Result<(), AppError> {
    let started = Instant::now();
    let solver = args.solver;
    prepare_out_dir(&solver.common.output_dir)?;
    let a = read_matrix_csv(&solver.common.input)?;
    let (l, reg_d) = parse_regularizer("--reg-d", &solver.reg_d, a.rows())?;
    let (m, reg_g) = parse_regularizer("--reg-g", &solver.reg_g, a.cols())?;
    let config = descent_config(&args.descent, args.seed, Strategy::Steepest);
    let seed = config.seed;
    let descent_summary = DescentSummary::from_config(&config);
    let prob = RsvdProblem::new(
        a.clone(),
        solver.common.rank,
        solver.lambda,
        solver.mu,
        l,
        m,
        config,
    )?
    .with_init(match args.descent.init {
        InitArg::Warm => InitialQ::LeadingSingularVectors,
        InitArg::Random => InitialQ::RandomOrthonormal,
    });
    let solve_started = Instant::now();
    let sol = solve_rsvd(&prob)?;
    let solve_ms = solve_started.elapsed().as_secs_f64() * 1e3;
    let approx = reconstruct(&sol.p, &sol.b, &sol.q);

    let out = &solver.common.output_dir;
    write_matrix_csv(&sol.p, &out.join("p.csv"))?;
    write_vector_csv(&sol.b, &out.join("b.csv"))?;
    write_matrix_csv(&sol.q, &out.join("q.csv"))?;
    write_matrix_csv(&approx, &out.join("approx.csv"))?;
    write_vector_csv(&sol.psi_trace, &out.join("psi_trace.csv"))?;

    let manifest = RunManifest {
        solver: "rsvd".into(),
        k: solver.common.rank,
        lambda: solver.lambda,
        mu: solver.mu,
        reg_d,
        reg_g,
        seed,
        experiment: None,
        descent: Some(descent_summary),
        input: Some(solver.common.input.display().to_string()),
        output_dir: out.display().to_string(),
        outputs: vec![
            "p.csv".into(),
            "b.csv".into(),
            "q.csv".into(),
            "approx.csv".into(),
            "psi_trace.csv".into(),
        ],
        metrics: Metrics {
            err_vs_input: Some(relative_error(&approx, &a)),
            psi_final: Some(*sol.psi_trace.last().expect("trace is never empty")),
            iters: Some(sol.iterations),
            objective: Some(sol.objective),
            converged: Some(sol.converged),
            p_gram_residual: Some(sol.diagnostics.p_gram_residual),
            ..Metrics::default()
        },
        timings_ms: Timings {
            total: started.elapsed().as_secs_f64() * 1e3,
            solve: Some(solve_ms),
        },
    };
    manifest.write(out)?;
    Ok(())
}

fn experiment_spec(args: &ExperimentArgs) -> Result<ExperimentSpec, AppError> {
    let signal = match args.signal {
        SignalArg::GaussianBump => Signal::GaussianBump,
        SignalArg::Sine => Signal::Sine,
        SignalArg::Custom => {
            let u_path = args
                .u_csv
                .clone()
                .ok_or_else(|| usage("--signal custom needs --u-csv PATH"))?;
            let v_path = args
                .v_csv
                .clone()
                .ok_or_else(|| usage("--signal custom needs --v-csv PATH"))?;
            Signal::Custom { u_path, v_path }
        }
    };
    Ok(ExperimentSpec {
        n: args.rows,
        m: args.cols,
        signal,
        tau: args.tau,
        seed: args.seed,
    })
}

fn run_gen_noisy(args: GenNoisyArgs) -> Result<(), AppError> {
    let started = Instant::now();
    let spec = experiment_spec(&args.experiment)?;
    let out = &args.experiment.output_dir;
    prepare_out_dir(out)?;
    let (a, u, v) = experiment::gen_noisy(&spec)?;
    write_matrix_csv(&a, &out.join("noisy.csv"))?;
    write_vector_csv(&u, &out.join("u.csv"))?;
    write_vector_csv(&v, &out.join("v.csv"))?;

    let manifest = RunManifest {
        solver: "gen-noisy".into(),
        k: 1,
        lambda: 0.0,
        mu: 0.0,
        reg_d: RegSummary {
            kind: "none".into(),
            path: None,
        },
        reg_g: RegSummary {
            kind: "none".into(),
            path: None,
        },
        seed: spec.seed,
        experiment: Some(ExperimentSummary {
            n: spec.n,
            m: spec.m,
            tau: spec.tau,
            signal: spec.signal.name().into(),
        }),
        descent: None,
        input: None,
        output_dir: out.display().to_string(),
        outputs: vec!["noisy.csv".into(), "u.csv".into(), "v.csv".into()],
        metrics: Metrics::default(),
        timings_ms: Timings {
            total: started.elapsed().as_secs_f64() * 1e3,
            solve: None,
        },
    };
    manifest.write(out)?;
    Ok(())
}

fn run_denoise(args: DenoiseArgs) -> Result<(), AppError> {
    let spec = experiment_spec(&args.experiment)?;
    // Random descent is the default here: each ψ evaluation costs an
    // eigendecomposition, and sampled rotations need far fewer of them per
    // accepted step than a full steepest-direction sweep. One seed drives
    // both the noise draw and the descent.
    let config = descent_config(&args.descent, args.experiment.seed, Strategy::Random);
    run_denoise_demo(
        &spec,
        args.rank,
        args.lambda,
        args.mu,
        config,
        &args.experiment.output_dir,
    )?;
    Ok(())
}
