use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use certnorm::cone::diameter_report;
use certnorm::experiment::{kappa_distribution, medians, write_csv};
use certnorm::io::{parse_vector, read_matrix};
use certnorm::log_sobolev::{default_t_grid, two_state_sigma};
use certnorm::{Error, MarkovChain, NormSpec, ProblemInstance, SolveOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod report;

use report::{KappaReport, LscOutput, NormParams, NormReport};

const EXIT_INPUT: u8 = 1;
const EXIT_NOT_CERTIFIED: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "certnorm",
    version,
    about = "Certified mixed-subordinate norms of nonnegative matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute ||A||_{beta -> alpha} with a contraction certificate.
    Norm(NormArgs),
    /// Projective diameters and Birkhoff ratios of A and A^T.
    Kappa(KappaArgs),
    /// Log-Sobolev bounds for the chain with kernel K.
    Lsc(LscArgs),
    /// Reproducible random-matrix experiments.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Subcommand)]
enum Experiment {
    /// Birkhoff ratios of random matrices with entries uniform on [k, 10].
    KappaDist(KappaDistArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct NormArgs {
    /// MatrixMarket or dense CSV file.
    #[arg(long)]
    matrix: PathBuf,
    /// Norm on the range: JSON file, or inline JSON.
    #[arg(long)]
    alpha: String,
    /// Norm on the domain: JSON file, or inline JSON.
    #[arg(long)]
    beta: String,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iters: usize,
    /// Iterate even when tau >= 1. No enclosure is reported then.
    #[arg(long)]
    force: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct KappaArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct LscArgs {
    /// Row-stochastic kernel K.
    #[arg(long)]
    matrix: PathBuf,
    /// Stationary distribution; computed from K when omitted.
    #[arg(long)]
    pi: Option<PathBuf>,
    /// `start:stop:count`, log-spaced; defaults to 2^-k for k = 0..20.
    #[arg(long)]
    t_grid: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct KappaDistArgs {
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k_min: u32,
    #[arg(long, default_value_t = 5)]
    k_max: u32,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Self {
            code: EXIT_INPUT,
            err: e.into(),
        }
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which is reserved for refusals here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Norm(a) => cmd_norm(&a),
        Command::Kappa(a) => cmd_kappa(&a).map(|_| 0),
        Command::Lsc(a) => cmd_lsc(&a).map(|_| 0),
        Command::Experiment(Experiment::KappaDist(a)) => cmd_kappa_dist(&a).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn load_spec(arg: &str) -> anyhow::Result<NormSpec> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).with_context(|| format!("cannot read norm spec {arg}"))?
    };
    NormSpec::from_json(&text).with_context(|| format!("norm spec {arg}"))
}

fn emit(
    format: Format,
    json: &impl serde::Serialize,
    text: impl FnOnce() -> String,
) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(json)?)?,
        Format::Text => write!(out, "{}", text())?,
    }
    Ok(())
}

fn cmd_norm(args: &NormArgs) -> Result<u8, Failure> {
    let a = read_matrix(&args.matrix)?;
    let alpha = load_spec(&args.alpha)?;
    let beta = load_spec(&args.beta)?;
    let params = NormParams {
        matrix: args.matrix.display().to_string(),
        alpha: alpha.clone(),
        beta: beta.clone(),
        tol: args.tol,
        max_iters: args.max_iters,
        force: args.force,
    };
    let inst = ProblemInstance::new(a, alpha, beta)?;
    let opts = SolveOptions {
        tol: args.tol,
        max_iters: args.max_iters,
        force: args.force,
        ..SolveOptions::default()
    };
    let res = match inst.solve(&opts) {
        Ok(r) => r,
        Err(e @ Error::NotCertified { .. }) => {
            return Err(Failure {
                code: EXIT_NOT_CERTIFIED,
                err: e.into(),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let report = NormReport::new(params, &res);
    emit(args.format, &report, || report.to_text())?;
    if res.converged {
        Ok(0)
    } else {
        eprintln!(
            "warning: iteration budget of {} exhausted before convergence",
            args.max_iters
        );
        Ok(EXIT_BUDGET)
    }
}

fn cmd_kappa(args: &KappaArgs) -> Result<(), Failure> {
    let a = read_matrix(&args.matrix)?;
    let report = KappaReport::new(
        args.matrix.display().to_string(),
        diameter_report(&a, 0.0),
        diameter_report(&a.transpose(), 0.0),
    );
    emit(args.format, &report, || report.to_text())?;
    Ok(())
}

/// `start:stop:count` with `count` points spaced evenly in `ln t`.
fn parse_t_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        bail!("t grid must look like start:stop:count, got {spec:?}");
    };
    let start: f64 = start.trim().parse().context("t grid start")?;
    let stop: f64 = stop.trim().parse().context("t grid stop")?;
    let count: usize = count.trim().parse().context("t grid count")?;
    if !(start > 0.0 && stop > 0.0 && start.is_finite() && stop.is_finite()) || count == 0 {
        bail!("t grid needs positive finite endpoints and count >= 1");
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let (l0, l1) = (start.ln(), stop.ln());
    Ok((0..count)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (count - 1) as f64).exp())
        .collect())
}

fn cmd_lsc(args: &LscArgs) -> Result<(), Failure> {
    let k = read_matrix(&args.matrix)?;
    let chain = match &args.pi {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            MarkovChain::new(k, parse_vector(&text)?)?
        }
        None => MarkovChain::from_kernel(k)?,
    };
    let grid = match &args.t_grid {
        Some(s) => parse_t_grid(s)?,
        None => default_t_grid(),
    };
    let report = chain.sigma_lower_bound(&grid)?;
    let two_state = if chain.len() == 2 {
        let (a, b) = (chain.kernel().get(0, 1), chain.kernel().get(1, 0));
        Some((two_state_sigma(a, b)?, (a * b).sqrt()))
    } else {
        None
    };
    let out = LscOutput::new(
        args.matrix.display().to_string(),
        chain.pi().to_vec(),
        report,
        two_state,
    );
    emit(args.format, &out, || out.to_text())?;
    Ok(())
}

fn write_experiment(
    path: Option<&Path>,
    rows: &[certnorm::experiment::KappaSample],
) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            let file =
                fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            let mut w = io::BufWriter::new(file);
            write_csv(rows, &mut w)?;
            w.flush()?;
        }
        None => write_csv(rows, &mut io::stdout().lock())?,
    }
    Ok(())
}

fn cmd_kappa_dist(args: &KappaDistArgs) -> Result<(), Failure> {
    let rows = kappa_distribution(args.n, args.k_min, args.k_max, args.samples, args.seed)?;
    write_experiment(args.out.as_deref(), &rows)?;
    if args.out.is_some() {
        for (k, m) in medians(&rows) {
            eprintln!("k = {k}: median kappa = {m:.6}");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::parse_t_grid;

    #[test]
    fn t_grid_is_log_spaced() {
        let g = parse_t_grid("1:0.01:3").unwrap();
        assert_eq!(g.len(), 3);
        assert!(
            (g[0] - 1.0).abs() < 1e-15 && (g[1] - 0.1).abs() < 1e-15 && (g[2] - 0.01).abs() < 1e-15
        );
        assert_eq!(parse_t_grid("5:1:1").unwrap(), vec![5.0]);
        assert!(parse_t_grid("1:0").is_err());
        assert!(parse_t_grid("0:1:3").is_err());
        assert!(parse_t_grid("1:2:0").is_err());
    }
}
