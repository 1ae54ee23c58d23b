//! `sskern`: simulate stable-spline and Wiener processes, verify their
//! entropy properties, compute entropy-rate curves, and estimate impulse
//! responses from input/output data.

mod config;
mod io;
mod svg;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use config::{parse_grid_spec, FileConfig};
use sskern_core::{
    entropy_rate_curve, gram, sample_stable_spline, sample_white, sample_wiener,
    tune_hyperparameters, KernelSpec, SearchGrid,
};

#[derive(Parser)]
#[command(name = "sskern", version, about)]
struct Cli {
    /// Optional JSON config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample process paths and write them as CSV.
    Simulate(SimulateArgs),
    /// Run the numerical property suites and print a pass/fail table.
    Verify(VerifyArgs),
    /// Compute entropy-rate curves for a kernel on a grid.
    Entropy(EntropyArgs),
    /// Estimate an impulse response from a t,u,y dataset.
    Estimate(EstimateArgs),
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// white | wiener | stable-spline
    #[arg(long)]
    process: Option<String>,
    /// uniform:<n>,<ts> | inline:<t0>,<t1>,... | csv:<path>
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV (header t,path_0,...).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the kernel Gram matrix on the grid to this CSV.
    #[arg(long)]
    emit_gram: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// all | lemma1 | lemma2 | lemma3 | prop2 | prop3 | psd | chain
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write entropy-rate curves for the reference kernels to this CSV.
    #[arg(long)]
    rates_out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct EntropyArgs {
    /// tc | wiener | white
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    sigma2: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Output CSV (header n,joint_entropy,rate,reference_rate).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional SVG plot of the rate curve.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(clap::Args)]
struct EstimateArgs {
    /// Input CSV with header t,u,y and uniform sampling.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Number of impulse-response coefficients (default min(N, 100)).
    #[arg(long)]
    m: Option<usize>,
    /// Output CSV (header k,t,f_mean,f_std).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Diagnostics JSON path (default: <out> with a .json extension).
    #[arg(long)]
    diagnostics: Option<PathBuf>,
    /// Log-spaced search grid lo,hi,n for beta.
    #[arg(long)]
    beta_grid: Option<String>,
    /// Log-spaced search grid lo,hi,n for lambda.
    #[arg(long)]
    lambda_grid: Option<String>,
    /// Log-spaced search grid lo,hi,n for sigma2.
    #[arg(long)]
    sigma2_grid: Option<String>,
    /// Optional SVG plot of the posterior mean with a 2-sigma band.
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let file = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Simulate(args) => run_simulate(args, &file),
        Command::Verify(args) => run_verify(args, &file),
        Command::Entropy(args) => run_entropy(args, &file),
        Command::Estimate(args) => run_estimate(args, &file),
    }
}

fn required<T>(flag: Option<T>, cfg: Option<T>, name: &str) -> Result<T> {
    flag.or(cfg)
        .with_context(|| format!("--{name} is required (flag or config file)"))
}

fn run_simulate(args: SimulateArgs, file: &FileConfig) -> Result<ExitCode> {
    let process = required(args.process, file.process.clone(), "process")?;
    let grid_spec = required(args.grid, file.grid.clone(), "grid")?;
    let grid = io::parse_grid_source(&grid_spec)?;
    let lambda = args.lambda.or(file.lambda).unwrap_or(1.0);
    let n_paths = args.paths.or(file.paths).unwrap_or(1);
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let out = required(args.out, file.out.clone().map(PathBuf::from), "out")?;

    let (paths, kernel) = match process.as_str() {
        "white" => (
            sample_white(&grid, lambda, seed, n_paths)?,
            KernelSpec::WhiteNoise { sigma2: lambda },
        ),
        "wiener" => (
            sample_wiener(&grid, lambda, seed, n_paths)?,
            KernelSpec::Wiener { lambda },
        ),
        "stable-spline" => {
            let beta = required(args.beta, file.beta, "beta")?;
            (
                sample_stable_spline(&grid, beta, lambda, seed, n_paths)?,
                KernelSpec::Tc { beta, lambda },
            )
        }
        other => bail!("unknown process `{other}`; expected white, wiener or stable-spline"),
    };
    io::write_paths_csv(&out, &paths)?;
    println!(
        "wrote {} ({} points x {} paths, seed {})",
        out.display(),
        paths.n_points(),
        paths.n_paths(),
        seed
    );
    if let Some(gram_path) = args.emit_gram.or(file.emit_gram.clone().map(PathBuf::from)) {
        let k = gram(&kernel, &grid)?;
        io::write_matrix_csv(&gram_path, k.entries())?;
        println!("wrote {}", gram_path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn run_verify(args: VerifyArgs, file: &FileConfig) -> Result<ExitCode> {
    let suite = args
        .suite
        .or(file.suite.clone())
        .unwrap_or_else(|| "all".into());
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let results = verify::run_suite(&suite, seed).map_err(anyhow::Error::msg)?;
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut all_pass = true;
    for r in &results {
        let status = if r.pass { "PASS" } else { "FAIL" };
        println!("{status}  {:width$}  {}", r.name, r.detail);
        all_pass &= r.pass;
    }
    println!(
        "{}/{} checks passed",
        results.iter().filter(|r| r.pass).count(),
        results.len()
    );
    if let Some(path) = args.rates_out.or(file.rates_out.clone().map(PathBuf::from)) {
        write_reference_rates(&path)?;
        println!("wrote {}", path.display());
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

/// Entropy-rate curves of the reference kernels on uniform grids.
fn write_reference_rates(path: &Path) -> Result<()> {
    use std::fmt::Write as _;
    let grid = sskern_core::TimeGrid::uniform(51, 1.0)?;
    let grid4 = sskern_core::TimeGrid::uniform(51, 4.0)?;
    let cases = [
        ("white_lambda1", KernelSpec::WhiteNoise { sigma2: 1.0 }, &grid),
        ("wiener_ts1", KernelSpec::Wiener { lambda: 1.0 }, &grid),
        ("wiener_ts4", KernelSpec::Wiener { lambda: 1.0 }, &grid4),
        (
            "tc_beta1",
            KernelSpec::Tc {
                beta: 1.0,
                lambda: 1.0,
            },
            &grid,
        ),
    ];
    let mut out = String::from("kernel,n,joint_entropy,rate,reference_rate\n");
    for (name, spec, g) in cases {
        for r in entropy_rate_curve(&spec, g, 50)? {
            writeln!(
                out,
                "{name},{},{},{},{}",
                r.n,
                io::fmt(r.joint_entropy),
                io::fmt(r.rate),
                r.reference_rate.map(io::fmt).unwrap_or_default()
            )?;
        }
    }
    std::fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))
}

fn run_entropy(args: EntropyArgs, file: &FileConfig) -> Result<ExitCode> {
    let kernel_name = required(args.kernel, file.kernel.clone(), "kernel")?;
    let grid_spec = required(args.grid, file.grid.clone(), "grid")?;
    let grid = io::parse_grid_source(&grid_spec)?;
    let spec = match kernel_name.as_str() {
        "tc" => KernelSpec::Tc {
            beta: required(args.beta, file.beta, "beta")?,
            lambda: args.lambda.or(file.lambda).unwrap_or(1.0),
        },
        "wiener" => KernelSpec::Wiener {
            lambda: args.lambda.or(file.lambda).unwrap_or(1.0),
        },
        "white" => KernelSpec::WhiteNoise {
            sigma2: args.sigma2.or(file.sigma2).unwrap_or(1.0),
        },
        other => bail!("unknown kernel `{other}`; expected tc, wiener or white"),
    };
    let n_max = args.n_max.or(file.n_max).unwrap_or(grid.len());
    let reports = entropy_rate_curve(&spec, &grid, n_max)?;
    println!("n,joint_entropy,rate,reference_rate");
    for r in &reports {
        println!(
            "{},{:.6},{:.6},{}",
            r.n,
            r.joint_entropy,
            r.rate,
            r.reference_rate
                .map(|v| format!("{v:.6}"))
                .unwrap_or_default()
        );
    }
    if let Some(out) = args.out.or(file.out.clone().map(PathBuf::from)) {
        io::write_rates_csv(&out, &reports)?;
        println!("wrote {}", out.display());
    }
    if let Some(svg_path) = args.svg.or(file.svg.clone().map(PathBuf::from)) {
        svg::write_rate_plot(&svg_path, &reports)?;
        println!("wrote {}", svg_path.display());
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(serde::Serialize)]
struct Diagnostics {
    beta: f64,
    lambda: f64,
    sigma2: f64,
    log_evidence: f64,
    residual_norm: f64,
    degrees_of_freedom: f64,
    m: usize,
    n: usize,
    sample_period: f64,
    beta_grid: Vec<f64>,
    lambda_grid: Vec<f64>,
    sigma2_grid: Vec<f64>,
}

fn run_estimate(args: EstimateArgs, file: &FileConfig) -> Result<ExitCode> {
    let data_path = required(args.data, file.data.clone().map(PathBuf::from), "data")?;
    let out = required(args.out, file.out.clone().map(PathBuf::from), "out")?;
    let data = io::read_io_dataset(&data_path)?;
    let n = data.len();
    let m = args.m.or(file.m).unwrap_or_else(|| n.min(100));

    let defaults = SearchGrid::default();
    let pick = |flag: Option<String>, cfg: Option<&String>, dflt: &[f64]| -> Result<Vec<f64>> {
        match flag.or_else(|| cfg.cloned()) {
            Some(spec) => parse_grid_spec(&spec),
            None => Ok(dflt.to_vec()),
        }
    };
    let search = SearchGrid {
        betas: pick(args.beta_grid, file.beta_grid.as_ref(), &defaults.betas)?,
        lambdas: pick(args.lambda_grid, file.lambda_grid.as_ref(), &defaults.lambdas)?,
        sigma2s: pick(args.sigma2_grid, file.sigma2_grid.as_ref(), &defaults.sigma2s)?,
    };
    let result = tune_hyperparameters(&data, m, &search)?;

    let ts = data.sample_period();
    let mut csv = String::from("k,t,f_mean,f_std\n");
    for k in 0..m {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            k,
            io::fmt(k as f64 * ts),
            io::fmt(result.f_mean[k]),
            io::fmt(result.f_std[k]),
        ));
    }
    std::fs::write(&out, csv).with_context(|| format!("cannot write {}", out.display()))?;
    println!("wrote {}", out.display());

    let diag_path = args
        .diagnostics
        .or(file.diagnostics.clone().map(PathBuf::from))
        .unwrap_or_else(|| out.with_extension("json"));
    let diag = Diagnostics {
        beta: result.beta,
        lambda: result.lambda,
        sigma2: result.sigma2,
        log_evidence: result.log_evidence,
        residual_norm: result.residual_norm,
        degrees_of_freedom: result.degrees_of_freedom,
        m,
        n,
        sample_period: ts,
        beta_grid: search.betas.clone(),
        lambda_grid: search.lambdas.clone(),
        sigma2_grid: search.sigma2s.clone(),
    };
    let json = serde_json::to_string_pretty(&diag)?;
    std::fs::write(&diag_path, json)
        .with_context(|| format!("cannot write {}", diag_path.display()))?;
    println!("wrote {}", diag_path.display());
    println!(
        "selected beta={:.6} lambda={:.6} sigma2={:.6} log_evidence={:.4}",
        result.beta, result.lambda, result.sigma2, result.log_evidence
    );

    if let Some(svg_path) = args.svg.or(file.svg.clone().map(PathBuf::from)) {
        let times: Vec<f64> = (0..m).map(|k| k as f64 * ts).collect();
        let mean: Vec<f64> = result.f_mean.iter().cloned().collect();
        let std: Vec<f64> = result.f_std.iter().cloned().collect();
        svg::write_estimate_plot(&svg_path, &times, &mean, &std)?;
        println!("wrote {}", svg_path.display());
    }
    Ok(ExitCode::SUCCESS)
}
