//! Command-line front end shared by the `gronwall-lab` binary.
//!
//! Exit status: 0 when every experiment passes, 1 when any fails or is
//! inconclusive, 2 on configuration, validation or I/O errors.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::ExperimentSpec;
use crate::config::{
    default_out_dir, default_suite, parse_run_config, resolve_seed, Format, GridSpec, ModelKind, Overrides, RunConfig,
    Target,
};
use crate::error::{LabError, Result};
use crate::estimate::Verdict;
use crate::report::{run_experiment, write_outputs, ExperimentReport};

const CSV_HELP: &str = "\
Output files (in --out): <name>.json, <name>.csv per experiment, summary.json, summary.csv.

CSV columns:
  constants         p,pi_p_over_sin,c_p,improved_constant
  prop1, gronwall   bound,lhs_mean,lhs_half_width,rhs_mean,rhs_half_width,constant,
                    scaled_rhs_upper,margin,ratio,verdict,method,n,truncated_fraction
  sharpness         p,ratio_mean,ratio_half_width,ratio_truth,c_p,regime_factor,gap_factor,covered,verdict
  divergence        k,estimate,half_width,analytic,within_ci
  jump              q,delta,ratio
  estim             dt,paths,max_violation,rms_violation,max_sign_violation
  ladder            index,level,rung_moment,reach_probability
  summary           name,target,seed,verdict,headline

Grids are written start:stop:step (inclusive) or as comma-separated lists.
The seed comes from --seed, then the config file, then GRONWALL_LAB_SEED.

Exit status: 0 all PASS, 1 any FAIL or INCONCLUSIVE, 2 invalid input.";

#[derive(Debug, Parser)]
#[command(name = "gronwall-lab", version, about = "Numerical checks of sup/inf moment inequalities for continuous martingales and stochastic Gronwall bounds", after_help = CSV_HELP)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Master seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (results do not depend on this)
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output formats
    #[arg(long, global = true, value_enum, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
    /// Confidence level of the intervals
    #[arg(long, global = true)]
    pub confidence: Option<f64>,
    /// Print nothing but errors
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every experiment of a TOML config
    Run { config: PathBuf },
    /// Tabulate πp/sin(πp), c_p and the optimised constant
    Constants(ConstantsArgs),
    /// Check E sup M^p <= c_p E(-inf M)^p on a model
    Prop1(Prop1Args),
    /// Extremal ratio for Brownian motion stopped at -1
    Sharpness(SharpnessArgs),
    /// E(sup ∧ K) against ln(1 + K) at p = 1
    Divergence(DivergenceArgs),
    /// Single-jump counterexample scan
    Jump(JumpArgs),
    /// Stochastic Gronwall moment bounds on a scenario
    Gronwall(GronwallArgs),
    /// Pathwise Gronwall estimate under step refinement
    Estim(EstimArgs),
    /// Geometric ladder decomposition of the stopped supremum
    Ladder(LadderArgs),
    /// Run the built-in suite
    All,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, default_value = "0.01:0.99:0.01")]
    pub p_grid: String,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct Prop1Args {
    #[arg(long, value_enum, default_value = "stopped-bm")]
    pub model: ModelArg,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Lower barrier -b (stopped-bm) or upper barrier b (exit-bm)
    #[arg(long)]
    pub b: Option<f64>,
    /// Lower exit level -a (exit-bm)
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Constant volatility (sigma-integral)
    #[arg(long)]
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum ModelArg {
    StoppedBm,
    ExitBm,
    SigmaIntegral,
}

#[derive(Debug, Args)]
pub struct SharpnessArgs {
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DivergenceArgs {
    #[arg(long)]
    pub k_grid: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct JumpArgs {
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, conflicts_with = "q_grid")]
    pub q: Option<f64>,
    #[arg(long)]
    pub q_grid: Option<String>,
    #[arg(long)]
    pub delta_grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    #[arg(long)]
    pub x0: Option<f64>,
    /// Constant rate ψ (drift a = ψ/2)
    #[arg(long)]
    pub psi: Option<f64>,
    /// Rate ψ = 2·rate·1{X >= 0} (random rate)
    #[arg(long)]
    pub feedback_rate: Option<f64>,
    /// Scale of the random factor in the slope of H
    #[arg(long)]
    pub h_noise: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GronwallArgs {
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
}

#[derive(Debug, Args)]
pub struct EstimArgs {
    #[arg(long)]
    pub dt_grid: Option<String>,
    #[arg(long)]
    pub paths: Option<usize>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
}

#[derive(Debug, Args)]
pub struct LadderArgs {
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    /// Ladder ratio; defaults to 2^(1/p)
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Barrier -b of the stopped motion
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
}

/// Reads a command-line grid: `start:stop:step` or `a,b,c`.
pub fn parse_grid(s: &str) -> Result<GridSpec> {
    if s.contains(':') {
        return Ok(GridSpec::Range(s.to_string()));
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| LabError::Config(format!("grid `{s}`: `{x}` is not a number")))
        })
        .collect::<Result<Vec<f64>>>()
        .map(GridSpec::List)
}

fn grid(s: &Option<String>) -> Result<Option<GridSpec>> {
    s.as_deref().map(parse_grid).transpose()
}

fn apply_scenario(spec: &mut ExperimentSpec, s: &ScenarioArgs) {
    spec.x0 = s.x0;
    spec.psi = s.psi;
    spec.feedback_rate = s.feedback_rate;
    spec.h_noise = s.h_noise;
    spec.horizon = s.horizon;
}

fn single_spec(cmd: &Command) -> Result<ExperimentSpec> {
    let spec = match cmd {
        Command::Constants(a) => ExperimentSpec {
            p_grid: Some(parse_grid(&a.p_grid)?),
            tol: a.tol,
            ..ExperimentSpec::new("constants", Target::Constants)
        },
        Command::Prop1(a) => ExperimentSpec {
            model: Some(match a.model {
                ModelArg::StoppedBm => ModelKind::StoppedBm,
                ModelArg::ExitBm => ModelKind::ExitBm,
                ModelArg::SigmaIntegral => ModelKind::SigmaIntegral,
            }),
            p: a.p,
            n: a.n,
            dt: a.dt,
            b: a.b,
            a: a.a,
            horizon: a.horizon,
            sigma: a.sigma,
            ..ExperimentSpec::new("prop1", Target::Prop1)
        },
        Command::Sharpness(a) => ExperimentSpec {
            p: a.p,
            n: a.n,
            ..ExperimentSpec::new("sharpness", Target::Sharpness)
        },
        Command::Divergence(a) => ExperimentSpec {
            k_grid: grid(&a.k_grid)?,
            n: a.n,
            ..ExperimentSpec::new("divergence", Target::Divergence)
        },
        Command::Jump(a) => ExperimentSpec {
            p: a.p,
            q: a.q,
            q_grid: grid(&a.q_grid)?,
            delta_grid: grid(&a.delta_grid)?,
            ..ExperimentSpec::new("jump", Target::Jump)
        },
        Command::Gronwall(a) => {
            let mut spec = ExperimentSpec {
                p: a.p,
                mu: a.mu,
                nu: a.nu,
                n: a.n,
                dt: a.dt,
                ..ExperimentSpec::new("gronwall", Target::Gronwall)
            };
            apply_scenario(&mut spec, &a.scenario);
            spec
        }
        Command::Estim(a) => {
            let mut spec = ExperimentSpec {
                dt_grid: grid(&a.dt_grid)?,
                paths: a.paths,
                threshold: a.threshold,
                ..ExperimentSpec::new("estim", Target::Estim)
            };
            apply_scenario(&mut spec, &a.scenario);
            spec
        }
        Command::Ladder(a) => ExperimentSpec {
            p: a.p,
            c: a.c,
            gamma: a.gamma,
            b: a.b,
            n: a.n,
            ..ExperimentSpec::new("ladder", Target::Ladder)
        },
        Command::Run { .. } | Command::All => unreachable!("not a single-experiment command"),
    };
    Ok(spec)
}

/// Turns parsed arguments into a validated run.
pub fn build_run(cli: &Cli) -> Result<RunConfig> {
    let g = &cli.global;
    let overrides = Overrides {
        seed: g.seed,
        workers: g.workers,
        out: g.out.clone(),
        formats: g.format.clone(),
    };
    let mut cfg = match &cli.command {
        Command::Run { config } => {
            let src = std::fs::read_to_string(config)
                .map_err(|e| LabError::Config(format!("cannot read {}: {e}", config.display())))?;
            parse_run_config(&src, &overrides).map_err(|e| LabError::Config(format!("{}: {e}", config.display())))?
        }
        cmd => {
            let seed = resolve_seed(g.seed, None)?;
            let specs = match cmd {
                Command::All => default_suite(),
                other => vec![single_spec(other)?],
            };
            let experiments = specs
                .iter()
                .map(|s| {
                    s.validate(seed)
                        .map_err(|m| LabError::Config(format!("{}: {m}", s.name)))
                })
                .collect::<Result<Vec<_>>>()?;
            RunConfig {
                seed,
                workers: g.workers,
                out: g.out.clone().unwrap_or_else(default_out_dir),
                formats: g.format.clone().unwrap_or_else(|| vec![Format::Csv, Format::Json]),
                experiments,
            }
        }
    };
    if let Some(c) = g.confidence {
        if !(c > 0.0 && c < 1.0) {
            return Err(LabError::Config(format!("--confidence {c} must lie in (0, 1)")));
        }
        for e in &mut cfg.experiments {
            e.confidence = c;
        }
    }
    if cfg.workers == Some(0) {
        return Err(LabError::Config("--workers must be at least 1".into()));
    }
    Ok(cfg)
}

/// Runs every experiment of `cfg` on a pool of `cfg.workers` threads.
pub fn execute(cfg: &RunConfig) -> Result<Vec<ExperimentReport>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cfg.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder.build().map_err(|e| LabError::Config(e.to_string()))?;
    pool.install(|| cfg.experiments.iter().map(run_experiment).collect())
}

/// Entry point used by the binary; returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let quiet = cli.global.quiet;
    let outcome = build_run(&cli).and_then(|cfg| {
        let reports = execute(&cfg)?;
        write_outputs(&cfg.out, &reports, &cfg.formats)?;
        Ok(reports)
    });
    match outcome {
        Ok(reports) => {
            if !quiet {
                for r in &reports {
                    println!("{:<12} {:<28} {}", r.verdict.to_string(), r.name, r.headline);
                }
            }
            match Verdict::all_pass(reports.iter().map(|r| r.verdict)) {
                Verdict::Pass => 0,
                _ => 1,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_flags() {
        assert_eq!(parse_grid("1,2.5").unwrap(), GridSpec::List(vec![1.0, 2.5]));
        assert_eq!(parse_grid("0:1:0.5").unwrap(), GridSpec::Range("0:1:0.5".into()));
        assert!(parse_grid("1,x").is_err());
    }

    #[test]
    fn verify_cli_definition() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn global_flags_after_subcommand() {
        let cli = Cli::try_parse_from(["gronwall-lab", "jump", "--seed", "3", "--q", "1"]).unwrap();
        let cfg = build_run(&cli).unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.experiments.len(), 1);
    }
}
