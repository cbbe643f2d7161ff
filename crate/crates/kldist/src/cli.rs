//! The `kldist` command line.
//!
//! Exit codes: 0 on success, 2 on argument errors, 1 on data or IO errors.
//! Every command is deterministic for a fixed `--seed`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kldist_core::bounds::{self, InstanceLower};
use kldist_core::estimators::estimate;
use kldist_core::sampling::thin;
use kldist_core::source::SourceKind;
use kldist_core::{
    normalize, EstimatorKind, Histogram, LossKind, NoiseMode, NoiseSource, PrivacyParams, ProbVector, Sample,
    SamplingScheme, SplitSample,
};

use crate::error::{Error, Result};
use crate::format::sig9;
use crate::io::{load_token_histogram, parse_token_histogram, render_results_csv};
use crate::runner::default_threads;
use crate::sweep::{self, ConfigOverrides, DistSpec, SweepSpec, ALPHA_GRID, TAU_MULT_GRID};

#[derive(Debug, Parser)]
#[command(name = "kldist", version, about = "Distribution estimation under KL loss, with and without differential privacy")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one estimator on a histogram and print `index,probability` lines.
    Estimate(EstimateArgs),
    /// Monte-Carlo sweep over n, d and ε; writes a results CSV.
    Benchmark(BenchmarkArgs),
    /// Print minimax rates and per-instance lower bounds as `key=value` lines.
    Bounds(BoundsArgs),
    /// Grid search over α and τ for a sampling-twice estimator.
    Gridsearch(GridArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Addconst,
    #[value(name = "addconst_dp")]
    AddconstDp,
    Gt,
    St,
    #[value(name = "st_dp")]
    StDp,
}

impl From<EstimatorArg> for EstimatorKind {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Addconst => EstimatorKind::AddConstant,
            EstimatorArg::AddconstDp => EstimatorKind::AddConstantDp,
            EstimatorArg::Gt => EstimatorKind::GoodTuring,
            EstimatorArg::St => EstimatorKind::SamplingTwice,
            EstimatorArg::StDp => EstimatorKind::SamplingTwiceDp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistArg {
    Powerlaw,
    Uniform,
    Concentrated,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LossArg {
    Kl,
    Nll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Poisson,
    Multinomial,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long, value_enum)]
    pub est: EstimatorArg,
    /// Full histogram, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub counts: Option<Vec<f64>>,
    /// First half for sampling-twice estimators.
    #[arg(long, value_delimiter = ',')]
    pub x: Option<Vec<f64>>,
    /// Second half for sampling-twice estimators.
    #[arg(long, value_delimiter = ',')]
    pub xprime: Option<Vec<f64>>,
    /// Token histogram file instead of --counts.
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long = "tau-mult")]
    pub tau_mult: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Replace every random draw by its deterministic stand-in.
    #[arg(long = "zero-noise")]
    pub zero_noise: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Distribution selection shared by `benchmark`, `bounds` and `gridsearch`.
#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(long, value_enum, default_value = "powerlaw")]
    pub dist: DistArg,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Masses of the leading symbols for `--dist concentrated`; `a/b` fractions allowed.
    #[arg(long, value_delimiter = ',', default_value = "1/3,2/3")]
    pub masses: Vec<String>,
    /// Token histogram for `--dist file`.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long, value_delimiter = ',', default_value = "1000")]
    pub d: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1000")]
    pub n: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// KL for synthetic distributions, NLL for files when omitted.
    #[arg(long, value_enum)]
    pub loss: Option<LossArg>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long = "tau-mult")]
    pub tau_mult: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, value_enum, default_value = "poisson")]
    pub sampling: SchemeArg,
    /// Worker threads; defaults to available parallelism.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "addconst,addconst_dp,gt,st,st_dp")]
    pub estimators: Vec<EstimatorArg>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "st")]
    pub estimators: Vec<EstimatorArg>,
    #[arg(long = "alpha-grid", value_delimiter = ',')]
    pub alpha_grid: Option<Vec<f64>>,
    /// Threshold multipliers of ln d.
    #[arg(long = "tau-grid", value_delimiter = ',')]
    pub tau_grid: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long, default_value_t = 1000)]
    pub d: usize,
    #[arg(long)]
    pub n: f64,
    /// Adds the private bounds when given.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Non-private neighborhood size; defaults to max{1, 2·ln ln d}.
    #[arg(long)]
    pub t: Option<f64>,
    /// Private neighborhood size; defaults to 24·ln d.
    #[arg(long = "t-dp")]
    pub t_dp: Option<f64>,
}

/// Parses `std::env::args`, runs the command and exits.
pub fn main() -> ! {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    let code = match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code)
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Estimate(args) => {
            let (out, text) = (args.out.clone(), cmd_estimate(&args)?);
            emit(out, &text)
        }
        Command::Benchmark(args) => {
            let spec = sweep_spec(&args.sweep, &args.estimators)?;
            emit(args.sweep.out.clone(), &render_results_csv(&sweep::benchmark(&spec)?))
        }
        Command::Bounds(args) => emit(None, &cmd_bounds(&args)?),
        Command::Gridsearch(args) => {
            let spec = sweep_spec(&args.sweep, &args.estimators)?;
            let alphas = args.alpha_grid.clone().unwrap_or_else(|| ALPHA_GRID.to_vec());
            let taus = args.tau_grid.clone().unwrap_or_else(|| TAU_MULT_GRID.to_vec());
            let rows = sweep::grid_search(&spec, &alphas, &taus)?;
            emit(args.sweep.out.clone(), &sweep::render_grid_csv(&rows))
        }
    }
}

fn emit(out: Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(&path, text).map_err(|e| Error::io(path, e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e)),
    }
}

pub fn cmd_estimate(args: &EstimateArgs) -> Result<String> {
    let kind = EstimatorKind::from(args.est);
    let privacy = match (kind.is_private(), args.eps) {
        (true, None) => return Err(Error::Usage(format!("--eps is required for {kind}"))),
        (_, Some(eps)) => PrivacyParams::pure(eps)?,
        (false, None) => PrivacyParams::pure(1.0)?,
    };
    let mode = if args.zero_noise { NoiseMode::ZeroNoise } else { NoiseMode::Random };
    let mut rng = NoiseSource::new(args.seed, mode);

    let halves = match (&args.x, &args.xprime) {
        (Some(x), Some(xp)) => Some((Histogram::new(x.clone())?, Histogram::new(xp.clone())?)),
        (None, None) => None,
        _ => return Err(Error::Usage("--x and --xprime go together".into())),
    };
    let full = match (&args.counts, &args.file) {
        (Some(_), Some(_)) => return Err(Error::Usage("give either --counts or --file".into())),
        (Some(c), None) => Some(Histogram::new(c.clone())?),
        (None, Some(path)) => Some(read_counts(path)?),
        (None, None) => None,
    };
    let d = match (&halves, &full) {
        (Some((x, _)), _) => x.len(),
        (None, Some(h)) => h.len(),
        (None, None) => return Err(Error::Usage("no data: pass --counts, --file or --x/--xprime".into())),
    };
    let overrides = ConfigOverrides { alpha: args.alpha, tau_mult: args.tau_mult, c: args.c };
    let config = overrides.config(kind, d, &privacy)?;

    let sample = match (halves, full) {
        (Some(_), Some(_)) => return Err(Error::Usage("give either --x/--xprime or a full histogram".into())),
        (Some((x, xp)), None) if kind.needs_split() => Sample::Split(SplitSample::from_halves(x, xp, config.alpha)?),
        (Some((x, xp)), None) => Sample::Full(x.merged(&xp)?),
        (None, Some(h)) if kind.needs_split() => {
            let (x, xp) = thin(&h, config.alpha, &mut rng);
            Sample::Split(SplitSample::from_halves(x, xp, config.alpha)?)
        }
        (None, Some(h)) => Sample::Full(h),
        (None, None) => unreachable!("checked above"),
    };
    let q = estimate(kind, &sample, &config, &privacy, &mut rng)?;
    Ok(render_estimate(&q))
}

pub fn render_estimate(q: &ProbVector) -> String {
    let mut out = String::new();
    for (i, p) in q.probs().iter().enumerate() {
        let _ = writeln!(out, "{i},{}", sig9(*p));
    }
    out
}

fn read_counts(path: &PathBuf) -> Result<Histogram> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_token_histogram(&text)
}

fn parse_mass(s: &str) -> Result<f64> {
    let bad = || Error::Usage(format!("bad mass `{s}`"));
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            Ok(a / b)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

fn dist_spec(args: &DistArgs) -> Result<DistSpec> {
    Ok(match args.dist {
        DistArg::Powerlaw => DistSpec::PowerLaw { beta: args.beta },
        DistArg::Uniform => DistSpec::Uniform,
        DistArg::Concentrated => {
            DistSpec::Concentrated { masses: args.masses.iter().map(|m| parse_mass(m)).collect::<Result<_>>()? }
        }
        DistArg::File => {
            let path = args.file.as_ref().ok_or_else(|| Error::Usage("--dist file needs --file".into()))?;
            DistSpec::File(load_token_histogram(path)?)
        }
    })
}

fn sweep_spec(args: &SweepArgs, estimators: &[EstimatorArg]) -> Result<SweepSpec> {
    let dist = dist_spec(&args.dist)?;
    let loss = match args.loss {
        Some(LossArg::Kl) => LossKind::Kl,
        Some(LossArg::Nll) => LossKind::Nll,
        None => dist.default_loss(),
    };
    let scheme = match args.sampling {
        SchemeArg::Poisson => SamplingScheme::Poisson,
        SchemeArg::Multinomial => SamplingScheme::Multinomial,
    };
    let spec = SweepSpec {
        dist,
        n_values: args.n.clone(),
        d_values: args.d.clone(),
        eps_values: args.eps.clone(),
        estimators: estimators.iter().map(|&e| e.into()).collect(),
        trials: args.trials,
        seed: args.seed,
        loss,
        overrides: ConfigOverrides { alpha: args.alpha, tau_mult: args.tau_mult, c: args.c },
        scheme,
        threads: args.threads.unwrap_or_else(default_threads).max(1),
    };
    spec.validate()?;
    Ok(spec)
}

pub fn cmd_bounds(args: &BoundsArgs) -> Result<String> {
    let dist = dist_spec(&args.dist)?;
    let p = match dist.source(args.d)?.kind {
        SourceKind::Synthetic(p) => p,
        SourceKind::Empirical(h) => normalize(h.counts())?,
    };
    let privacy = args.eps.map(|e| PrivacyParams::new(e, args.delta)).transpose()?;
    let report = bounds::report(&p, args.n, privacy.as_ref(), args.t, args.t_dp)?;

    let mut out = String::new();
    let _ = writeln!(out, "d={}", p.len());
    let _ = writeln!(out, "n={}", sig9(args.n));
    let _ = writeln!(out, "nondp_minimax={}", sig9(report.nondp_minimax));
    write_instance(&mut out, "nondp", &report.nondp_instance);
    if let (Some(eps), Some(minimax), Some(inst)) = (args.eps, report.dp_minimax, report.dp_instance) {
        let _ = writeln!(out, "eps={}", sig9(eps));
        let _ = writeln!(out, "dp_minimax={}", sig9(minimax));
        write_instance(&mut out, "dp", &inst);
    }
    Ok(out)
}

fn write_instance(out: &mut String, prefix: &str, b: &InstanceLower) {
    let _ = writeln!(out, "{prefix}_instance_lower={}", sig9(b.value));
    let _ = writeln!(out, "{prefix}_t_used={}", sig9(b.t_used));
    let _ = writeln!(out, "{prefix}_small_set_size={}", b.small_set_size);
    let _ = writeln!(out, "{prefix}_small_set_mass={}", sig9(b.small_set_mass));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Command {
        let mut full = vec!["kldist"];
        full.extend_from_slice(args);
        Cli::try_parse_from(full).unwrap().command
    }

    fn estimate_text(args: &[&str]) -> Result<String> {
        match parse(&[&["estimate"], args].concat()) {
            Command::Estimate(a) => cmd_estimate(&a),
            _ => unreachable!(),
        }
    }

    #[test]
    fn estimate_examples() {
        assert_eq!(estimate_text(&["--est", "addconst", "--c", "1", "--counts", "2,0"]).unwrap(), "0,0.75\n1,0.25\n");
        assert_eq!(estimate_text(&["--est", "st", "--x", "0,0", "--xprime", "0,0"]).unwrap(), "0,0.5\n1,0.5\n");
        let err = estimate_text(&["--est", "addconst_dp", "--counts", "1,2"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert_eq!(
            estimate_text(&["--est", "st", "--x", "0,2,0", "--xprime", "1,3,0"]).unwrap(),
            "0,0.125\n1,0.75\n2,0.125\n"
        );
        let dp = estimate_text(&[
            "--est", "st_dp", "--eps", "1", "--alpha", "0.5", "--tau-mult", "4", "--zero-noise", "--x", "7,0,1,0",
            "--xprime", "6,1,0,0",
        ])
        .unwrap();
        assert_eq!(dp, "0,0.866666667\n1,0.0444444444\n2,0.0444444444\n3,0.0444444444\n");
    }

    #[test]
    fn estimate_argument_errors() {
        assert_eq!(estimate_text(&["--est", "gt"]).unwrap_err().exit_code(), 2);
        assert_eq!(estimate_text(&["--est", "st", "--x", "1,2"]).unwrap_err().exit_code(), 2);
        assert_eq!(estimate_text(&["--est", "gt", "--counts", "0,0"]).unwrap_err().exit_code(), 1);
        assert_eq!(estimate_text(&["--est", "addconst", "--counts", "1,-1"]).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn bounds_examples() {
        let text = match parse(&["bounds", "--dist", "concentrated", "--d", "10", "--n", "10", "--t", "1"]) {
            Command::Bounds(a) => cmd_bounds(&a).unwrap(),
            _ => unreachable!(),
        };
        assert!(text.contains("nondp_instance_lower=0.419722458\n"), "{text}");
        assert!(!text.contains("\ndp_minimax"));

        let text = match parse(&["bounds", "--dist", "uniform", "--d", "100", "--n", "100", "--eps", "1"]) {
            Command::Bounds(a) => cmd_bounds(&a).unwrap(),
            _ => unreachable!(),
        };
        assert!(text.contains(&format!("dp_minimax={}\n", sig9(std::f64::consts::LN_2))), "{text}");

        let err = match parse(&["bounds", "--dist", "uniform", "--d", "100", "--n", "10", "--eps", "0.01"]) {
            Command::Bounds(a) => cmd_bounds(&a).unwrap_err(),
            _ => unreachable!(),
        };
        assert!(err.to_string().contains("n·ε ≥ 1"), "{err}");
    }

    #[test]
    fn fraction_masses() {
        assert!((parse_mass("1/3").unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(parse_mass("0.25").unwrap(), 0.25);
        assert!(parse_mass("a/b").is_err());
    }
}
