//! Experiment configuration.
//!
//! A run config is TOML: top-level keys for the run, one `[[experiment]]`
//! table per experiment.
//!
//! ```toml
//! seed = 7
//! workers = 4
//! out = "lab-output"
//! formats = ["csv", "json"]
//!
//! [[experiment]]
//! name = "stopped-quarter"
//! target = "prop1"
//! model = "stopped-bm"
//! b = 1.0
//! p = 0.25
//! n = 1000000
//! ```
//!
//! Grids are written either as `"start:stop:step"` (endpoints included
//! within `step/2`) or as arrays of numbers. Every [`ExperimentSpec`] field
//! is optional except `name` and `target`; [`ExperimentSpec::validate`]
//! fills defaults and turns the record into a typed [`Experiment`].

use std::collections::HashSet;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::analytic::{Exponent, GeometricLadder, HolderPair, DEFAULT_QUAD_TOL};
use crate::error::{LabError, Result};
use crate::estimate::DEFAULT_CONFIDENCE;
use crate::simulate::{DriftForm, GronwallScenario, MartingaleModel, PiecewiseConstant};

/// Environment variable consulted when neither the command line nor the
/// config file sets a seed.
pub const SEED_ENV: &str = "GRONWALL_LAB_SEED";

/// Default largest-violation threshold for the pathwise check at the finest
/// step, from a pilot run of the zero-drift scenario at `dt = 1e-4` with
/// 1000 paths.
pub const DEFAULT_PATHWISE_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Constants,
    Prop1,
    Sharpness,
    Divergence,
    Jump,
    Gronwall,
    Estim,
    Ladder,
}

impl Target {
    pub fn as_str(&self) -> &'static str {
        match self {
            Target::Constants => "constants",
            Target::Prop1 => "prop1",
            Target::Sharpness => "sharpness",
            Target::Divergence => "divergence",
            Target::Jump => "jump",
            Target::Gronwall => "gronwall",
            Target::Estim => "estim",
            Target::Ladder => "ladder",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    StoppedBm,
    ExitBm,
    SigmaIntegral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// A grid given as `"start:stop:step"` or as an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Range(String),
    List(Vec<f64>),
}

impl GridSpec {
    pub fn values(&self) -> std::result::Result<Vec<f64>, String> {
        match self {
            GridSpec::List(v) => Ok(v.clone()),
            GridSpec::Range(s) => parse_range(s),
        }
    }
}

/// Parses `start:stop:step`. Values are `start + i·step` for every `i` with
/// `start + i·step <= stop + step/2`, snapped to a 1e-12 lattice so decimal
/// grids print cleanly.
pub fn parse_range(s: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || format!("grid `{s}` must be start:stop:step");
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums = parts
        .iter()
        .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<std::result::Result<Vec<f64>, String>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0 && step.is_finite() && start.is_finite() && stop.is_finite()) || stop < start {
        return Err(format!("grid `{s}` needs step > 0 and stop >= start"));
    }
    let count = ((stop - start) / step + 0.5).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(format!("grid `{s}` has too many points"));
    }
    Ok((0..count)
        .map(|i| {
            let v = start + i as f64 * step;
            (v * 1e12).round() / 1e12
        })
        .collect())
}

/// Flat, config-syntax description of one experiment.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ExperimentSpec {
    pub name: String,
    pub target: Option<Target>,
    pub seed: Option<u64>,
    pub confidence: Option<f64>,
    pub p: Option<f64>,
    pub p_grid: Option<GridSpec>,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub n: Option<usize>,
    pub dt: Option<f64>,
    pub tol: Option<f64>,
    // martingale models
    pub model: Option<ModelKind>,
    pub b: Option<f64>,
    pub a: Option<f64>,
    pub horizon: Option<f64>,
    pub sigma: Option<f64>,
    pub sigma_breaks: Option<Vec<f64>>,
    pub sigma_values: Option<Vec<f64>>,
    // counterexamples
    pub q: Option<f64>,
    pub q_grid: Option<GridSpec>,
    pub delta_grid: Option<GridSpec>,
    pub k_grid: Option<GridSpec>,
    // Gronwall scenarios
    pub x0: Option<f64>,
    pub psi: Option<f64>,
    pub psi_breaks: Option<Vec<f64>>,
    pub psi_values: Option<Vec<f64>>,
    pub feedback_rate: Option<f64>,
    pub h_noise: Option<f64>,
    pub dt_grid: Option<GridSpec>,
    pub paths: Option<usize>,
    pub threshold: Option<f64>,
    // ladder
    pub c: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub name: String,
    pub target: Target,
    pub seed: u64,
    pub confidence: f64,
    pub kind: ExperimentKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentKind {
    Constants {
        p_grid: Vec<Exponent>,
        tol: f64,
    },
    SupInf {
        model: MartingaleModel,
        p: Exponent,
        n: usize,
    },
    Sharpness {
        p: Exponent,
        n: usize,
    },
    Divergence {
        k_grid: Vec<f64>,
        n: usize,
    },
    Jump {
        p: Exponent,
        q_grid: Vec<f64>,
        delta_grid: Vec<f64>,
    },
    Gronwall {
        scenario: GronwallScenario,
        p: Exponent,
        pair: Option<HolderPair>,
        n: usize,
    },
    Pathwise {
        scenario: GronwallScenario,
        dt_grid: Vec<f64>,
        paths: usize,
        threshold: Option<f64>,
    },
    Ladder {
        p: Exponent,
        ladder: GeometricLadder,
        barrier: f64,
        n: usize,
    },
}

fn grid(spec: &Option<GridSpec>, field: &str) -> std::result::Result<Option<Vec<f64>>, String> {
    spec.as_ref()
        .map(|g| g.values().map_err(|e| format!("`{field}`: {e}")))
        .transpose()
}

fn exponent(p: f64, field: &str) -> std::result::Result<Exponent, String> {
    Exponent::new(p).map_err(|_| format!("`{field}` = {p} violates 0 < p < 1"))
}

fn positive(v: f64, field: &str) -> std::result::Result<f64, String> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("`{field}` = {v} must be > 0"))
    }
}

impl ExperimentSpec {
    pub fn new(name: impl Into<String>, target: Target) -> Self {
        ExperimentSpec {
            name: name.into(),
            target: Some(target),
            ..Default::default()
        }
    }

    fn p_or(&self, default: f64) -> std::result::Result<Exponent, String> {
        exponent(self.p.unwrap_or(default), "p")
    }

    fn n_or(&self, default: usize) -> std::result::Result<usize, String> {
        let n = self.n.unwrap_or(default);
        if n < crate::estimate::MIN_SAMPLES {
            Err(format!("`n` = {n} must be at least {}", crate::estimate::MIN_SAMPLES))
        } else {
            Ok(n)
        }
    }

    fn holder_pair(&self) -> std::result::Result<Option<HolderPair>, String> {
        let pair = match (self.mu, self.nu) {
            (None, None) => return Ok(None),
            (Some(mu), Some(nu)) => HolderPair::new(mu, nu),
            (Some(mu), None) => HolderPair::from_mu(mu),
            (None, Some(nu)) => HolderPair::from_nu(nu),
        };
        pair.map(Some)
            .map_err(|_| "`mu`, `nu` violate mu, nu > 1 and 1/mu + 1/nu = 1".to_string())
    }

    fn scenario(&self, dt_default: f64) -> std::result::Result<GronwallScenario, String> {
        let x0 = self.x0.unwrap_or(1.0);
        let horizon = positive(self.horizon.unwrap_or(1.0), "horizon")?;
        let dt = positive(self.dt.unwrap_or(dt_default), "dt")?;
        let forms = [
            self.psi.is_some(),
            self.psi_breaks.is_some() || self.psi_values.is_some(),
            self.feedback_rate.is_some(),
        ];
        if forms.iter().filter(|&&f| f).count() > 1 {
            return Err("give only one of `psi`, `psi-breaks`/`psi-values`, `feedback-rate`".into());
        }
        let drift = if let Some(rate) = self.feedback_rate {
            if !(rate.is_finite() && rate >= 0.0) {
                return Err(format!("`feedback-rate` = {rate} must be >= 0"));
            }
            DriftForm::SignFeedback { rate }
        } else if self.psi_breaks.is_some() || self.psi_values.is_some() {
            let breaks = self.psi_breaks.clone().unwrap_or_default();
            let values: Vec<f64> = self.psi_values.clone().unwrap_or_default();
            if values.iter().any(|&v| v.is_nan() || v < 0.0) {
                return Err("`psi-values` must be >= 0".into());
            }
            let half = values.iter().map(|v| 0.5 * v).collect();
            DriftForm::Schedule {
                schedule: PiecewiseConstant::new(breaks, half).map_err(|e| format!("`psi-breaks`: {e}"))?,
            }
        } else {
            let psi = self.psi.unwrap_or(0.0);
            if !(psi.is_finite() && psi >= 0.0) {
                return Err(format!("`psi` = {psi} must be >= 0"));
            }
            DriftForm::Schedule {
                schedule: PiecewiseConstant::constant(0.5 * psi),
            }
        };
        let scn = GronwallScenario::new(x0, drift, horizon, dt).map_err(|e| e.to_string())?;
        scn.with_h_noise(self.h_noise.unwrap_or(0.0)).map_err(|e| e.to_string())
    }

    /// Checks every constraint of the target and fills defaults.
    pub fn validate(&self, run_seed: u64) -> std::result::Result<Experiment, String> {
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
        {
            return Err(format!(
                "name `{}` must be non-empty and use only [A-Za-z0-9._-]",
                self.name
            ));
        }
        let target = self.target.ok_or("missing `target`")?;
        let confidence = self.confidence.unwrap_or(DEFAULT_CONFIDENCE);
        if !(confidence > 0.0 && confidence < 1.0) {
            return Err(format!("`confidence` = {confidence} must lie in (0, 1)"));
        }
        let kind = match target {
            Target::Constants => {
                let raw = grid(&self.p_grid, "p-grid")?.unwrap_or_else(|| (1..=99).map(|i| i as f64 / 100.0).collect());
                let p_grid = raw
                    .iter()
                    .map(|&p| exponent(p, "p-grid"))
                    .collect::<std::result::Result<_, _>>()?;
                ExperimentKind::Constants {
                    p_grid,
                    tol: positive(self.tol.unwrap_or(DEFAULT_QUAD_TOL), "tol")?,
                }
            }
            Target::Prop1 => {
                let dt = positive(self.dt.unwrap_or(1e-3), "dt")?;
                let model = match self.model.unwrap_or(ModelKind::StoppedBm) {
                    ModelKind::StoppedBm => MartingaleModel::stopped_bm(
                        positive(self.b.unwrap_or(1.0), "b")?,
                        positive(self.horizon.unwrap_or(1e3), "horizon")?,
                        dt,
                    ),
                    ModelKind::ExitBm => MartingaleModel::exit_bm(
                        positive(self.a.unwrap_or(1.0), "a")?,
                        positive(self.b.unwrap_or(1.0), "b")?,
                        dt,
                    ),
                    ModelKind::SigmaIntegral => {
                        let sigma = match (&self.sigma_breaks, &self.sigma_values, self.sigma) {
                            (Some(br), Some(v), None) => PiecewiseConstant::new(br.clone(), v.clone())
                                .map_err(|e| format!("`sigma-breaks`: {e}"))?,
                            (None, None, s) => PiecewiseConstant::constant(s.unwrap_or(1.0)),
                            _ => return Err("give either `sigma` or both `sigma-breaks` and `sigma-values`".into()),
                        };
                        MartingaleModel::sigma_integral(sigma, positive(self.horizon.unwrap_or(1.0), "horizon")?, dt)
                    }
                }
                .map_err(|e| e.to_string())?;
                ExperimentKind::SupInf {
                    model,
                    p: self.p_or(0.25)?,
                    n: self.n_or(100_000)?,
                }
            }
            Target::Sharpness => ExperimentKind::Sharpness {
                p: self.p_or(0.25)?,
                n: self.n_or(1_000_000)?,
            },
            Target::Divergence => {
                let e = std::f64::consts::E;
                let k_grid =
                    grid(&self.k_grid, "k-grid")?.unwrap_or_else(|| vec![e - 1.0, e * e - 1.0, e.powi(3) - 1.0]);
                if k_grid.is_empty() || k_grid.windows(2).any(|w| w[0] >= w[1]) || k_grid[0] <= 0.0 {
                    return Err("`k-grid` must be positive and strictly increasing".into());
                }
                ExperimentKind::Divergence {
                    k_grid,
                    n: self.n_or(1_000_000)?,
                }
            }
            Target::Jump => {
                let q_grid = match (self.q, grid(&self.q_grid, "q-grid")?) {
                    (Some(_), Some(_)) => return Err("give only one of `q` and `q-grid`".into()),
                    (Some(q), None) => vec![q],
                    (None, Some(g)) => g,
                    (None, None) => vec![0.5, 0.9, 1.0, 2.0],
                };
                for &q in &q_grid {
                    positive(q, "q")?;
                }
                let delta_grid = grid(&self.delta_grid, "delta-grid")?
                    .unwrap_or_else(|| (1..=8).map(|k| 1.0 - 10f64.powi(-k)).collect());
                if delta_grid.is_empty() || delta_grid.iter().any(|&d| !(d > 0.0 && d < 1.0)) {
                    return Err("`delta-grid` values must lie in (0, 1)".into());
                }
                ExperimentKind::Jump {
                    p: self.p_or(0.5)?,
                    q_grid,
                    delta_grid,
                }
            }
            Target::Gronwall => {
                let scenario = self.scenario(1e-3)?;
                let p = self.p_or(0.5)?;
                let pair = self.holder_pair()?;
                if let Some(h) = pair {
                    let pnu = p.value() * h.nu();
                    if pnu >= 1.0 {
                        return Err(format!("p * nu = {pnu} violates p * nu < 1"));
                    }
                }
                if !scenario.is_deterministic_rate() && pair.is_none() {
                    return Err("`feedback-rate` scenarios need `mu` or `nu` (Hölder-split bound only)".into());
                }
                ExperimentKind::Gronwall {
                    scenario,
                    p,
                    pair,
                    n: self.n_or(100_000)?,
                }
            }
            Target::Estim => {
                let dt_grid = grid(&self.dt_grid, "dt-grid")?.unwrap_or_else(|| vec![1e-2, 1e-3, 1e-4]);
                if dt_grid.is_empty()
                    || dt_grid.windows(2).any(|w| w[1] >= w[0])
                    || dt_grid.iter().any(|&d| d.is_nan() || d <= 0.0)
                {
                    return Err("`dt-grid` must be positive and strictly decreasing".into());
                }
                let scenario = self.scenario(dt_grid[0])?;
                let paths = self.paths.unwrap_or(1000);
                if paths == 0 {
                    return Err("`paths` must be positive".into());
                }
                let threshold = match self.threshold {
                    Some(t) if t < 0.0 => return Err(format!("`threshold` = {t} must be >= 0")),
                    Some(t) => Some(t),
                    None => Some(DEFAULT_PATHWISE_THRESHOLD),
                };
                ExperimentKind::Pathwise {
                    scenario,
                    dt_grid,
                    paths,
                    threshold,
                }
            }
            Target::Ladder => {
                let p = self.p_or(0.25)?;
                let barrier = positive(self.b.unwrap_or(1.0), "b")?;
                let c = positive(self.c.unwrap_or(0.1), "c")?;
                let gamma = self.gamma.unwrap_or(2f64.powf(1.0 / p.value()));
                if !(gamma > 1.0 && gamma.is_finite()) {
                    return Err(format!("`gamma` = {gamma} must be > 1"));
                }
                let ladder = GeometricLadder::reaching(c, gamma, barrier).map_err(|e| e.to_string())?;
                ExperimentKind::Ladder {
                    p,
                    ladder,
                    barrier,
                    n: self.n_or(100_000)?,
                }
            }
        };
        Ok(Experiment {
            name: self.name.clone(),
            target,
            seed: self.seed.unwrap_or(run_seed),
            confidence,
            kind,
        })
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRunConfig {
    seed: Option<u64>,
    workers: Option<usize>,
    out: Option<PathBuf>,
    formats: Option<Vec<Format>>,
    #[serde(default)]
    experiment: Vec<toml::Spanned<ExperimentSpec>>,
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub workers: Option<usize>,
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub experiments: Vec<Experiment>,
}

/// Values from the command line that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
}

pub fn default_out_dir() -> PathBuf {
    PathBuf::from("lab-output")
}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// Resolves the seed: command line, then config, then [`SEED_ENV`].
pub fn resolve_seed(cli: Option<u64>, file: Option<u64>) -> Result<u64> {
    if let Some(s) = cli.or(file) {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| LabError::Config(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        Err(_) => Err(LabError::Config(format!(
            "no seed given: pass --seed, set `seed` in the config, or export {SEED_ENV}"
        ))),
    }
}

/// Parses and validates a TOML run config. Errors carry the line of the
/// offending experiment table.
pub fn parse_run_config(src: &str, overrides: &Overrides) -> Result<RunConfig> {
    let raw: RawRunConfig = toml::from_str(src).map_err(|e| LabError::Config(e.to_string()))?;
    let seed = resolve_seed(overrides.seed, raw.seed)?;
    let mut errors = Vec::new();
    let mut names = HashSet::new();
    let mut experiments = Vec::new();
    for spanned in &raw.experiment {
        let line = line_of(src, spanned.span().start);
        let spec = spanned.get_ref();
        if !names.insert(spec.name.clone()) {
            errors.push(format!("line {line}: duplicate experiment name `{}`", spec.name));
            continue;
        }
        match spec.validate(seed) {
            Ok(e) => experiments.push(e),
            Err(msg) => errors.push(format!("line {line}: experiment `{}`: {msg}", spec.name)),
        }
    }
    if raw.experiment.is_empty() {
        errors.push("config defines no [[experiment]] tables".into());
    }
    if !errors.is_empty() {
        return Err(LabError::Config(errors.join("\n")));
    }
    Ok(RunConfig {
        seed,
        workers: overrides.workers.or(raw.workers),
        out: overrides.out.clone().or(raw.out).unwrap_or_else(default_out_dir),
        formats: overrides
            .formats
            .clone()
            .or(raw.formats)
            .unwrap_or_else(|| vec![Format::Csv, Format::Json]),
        experiments,
    })
}

/// The built-in suite run by `all`, sized for a desk run.
pub fn default_suite() -> Vec<ExperimentSpec> {
    let e = std::f64::consts::E;
    let mut v = Vec::new();

    v.push(ExperimentSpec {
        p_grid: Some(GridSpec::Range("0.01:0.99:0.01".into())),
        ..ExperimentSpec::new("constants", Target::Constants)
    });
    for (name, model, p) in [
        ("prop1-stopped-bm", ModelKind::StoppedBm, 0.25),
        ("prop1-exit-bm", ModelKind::ExitBm, 0.5),
        ("prop1-sigma-integral", ModelKind::SigmaIntegral, 0.5),
    ] {
        v.push(ExperimentSpec {
            model: Some(model),
            p: Some(p),
            n: Some(20_000),
            dt: Some(1e-3),
            ..ExperimentSpec::new(name, Target::Prop1)
        });
    }
    for (name, p) in [("sharpness-quarter", 0.25), ("sharpness-half", 0.5)] {
        v.push(ExperimentSpec {
            p: Some(p),
            n: Some(200_000),
            ..ExperimentSpec::new(name, Target::Sharpness)
        });
    }
    v.push(ExperimentSpec {
        k_grid: Some(GridSpec::List(vec![e - 1.0, e * e - 1.0, e.powi(3) - 1.0])),
        n: Some(200_000),
        ..ExperimentSpec::new("divergence", Target::Divergence)
    });
    v.push(ExperimentSpec {
        p: Some(0.5),
        ..ExperimentSpec::new("jump", Target::Jump)
    });
    v.push(ExperimentSpec {
        p: Some(0.5),
        nu: Some(1.5),
        n: Some(20_000),
        ..ExperimentSpec::new("gronwall-zero-drift", Target::Gronwall)
    });
    v.push(ExperimentSpec {
        p: Some(0.2),
        nu: Some(2.0),
        feedback_rate: Some(1.0),
        n: Some(20_000),
        ..ExperimentSpec::new("gronwall-sign-feedback", Target::Gronwall)
    });
    v.push(ExperimentSpec {
        paths: Some(200),
        ..ExperimentSpec::new("estim", Target::Estim)
    });
    v.push(ExperimentSpec {
        p: Some(0.25),
        c: Some(0.1),
        gamma: Some(2.0),
        n: Some(100_000),
        ..ExperimentSpec::new("ladder", Target::Ladder)
    });
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_grid_inclusive() {
        let g = parse_range("0.01:0.99:0.01").unwrap();
        assert_eq!(g.len(), 99);
        assert_eq!(g[49], 0.5);
        assert_eq!(*g.last().unwrap(), 0.99);
        assert_eq!(parse_range("0.1:0.9:0.1").unwrap().len(), 9);
        assert_eq!(parse_range("1:1:1").unwrap(), vec![1.0]);
        // stop within step/2 of the last lattice point is included
        assert_eq!(parse_range("0:1.04:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("1:0:0.1").is_err());
        assert!(parse_range("0:1:0").is_err());
    }

    #[test]
    fn holder_constraint_named() {
        let spec = ExperimentSpec {
            p: Some(0.6),
            nu: Some(2.0),
            ..ExperimentSpec::new("g", Target::Gronwall)
        };
        let err = spec.validate(1).unwrap_err();
        assert!(err.contains("p * nu"), "{err}");
    }

    #[test]
    fn exponent_constraint_named() {
        let spec = ExperimentSpec {
            p: Some(1.5),
            ..ExperimentSpec::new("s", Target::Sharpness)
        };
        assert!(spec.validate(1).unwrap_err().contains("0 < p < 1"));
    }

    #[test]
    fn config_errors_are_line_addressed() {
        let src = "seed = 3\n\n[[experiment]]\nname = \"ok\"\ntarget = \"jump\"\n\n[[experiment]]\nname = \"bad\"\ntarget = \"sharpness\"\np = 2.0\n";
        let err = parse_run_config(src, &Overrides::default()).unwrap_err().to_string();
        assert!(err.contains("line 7"), "{err}");
        assert!(err.contains("`bad`"));
    }

    #[test]
    fn duplicate_names_rejected() {
        let src = "seed = 3\n[[experiment]]\nname = \"x\"\ntarget = \"jump\"\n[[experiment]]\nname = \"x\"\ntarget = \"jump\"\n";
        let err = parse_run_config(src, &Overrides::default()).unwrap_err().to_string();
        assert!(err.contains("duplicate"), "{err}");
    }

    #[test]
    fn unknown_keys_rejected() {
        let src = "seed = 3\n[[experiment]]\nname = \"x\"\ntarget = \"jump\"\nwibble = 1\n";
        let err = parse_run_config(src, &Overrides::default()).unwrap_err().to_string();
        assert!(err.contains("wibble"), "{err}");
    }

    #[test]
    fn cli_seed_wins() {
        let src = "seed = 3\n[[experiment]]\nname = \"x\"\ntarget = \"jump\"\n";
        let cfg = parse_run_config(
            src,
            &Overrides {
                seed: Some(9),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.experiments[0].seed, 9);
        assert_eq!(cfg.formats, vec![Format::Csv, Format::Json]);
    }

    #[test]
    fn grids_accept_lists() {
        let src = "seed = 1\n[[experiment]]\nname = \"j\"\ntarget = \"jump\"\nq-grid = [0.5, 1.0]\ndelta-grid = \"0.1:0.9:0.1\"\n";
        let cfg = parse_run_config(src, &Overrides::default()).unwrap();
        match &cfg.experiments[0].kind {
            ExperimentKind::Jump { q_grid, delta_grid, .. } => {
                assert_eq!(q_grid, &vec![0.5, 1.0]);
                assert_eq!(delta_grid.len(), 9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn default_suite_validates() {
        let names: HashSet<String> = default_suite().iter().map(|s| s.name.clone()).collect();
        assert_eq!(names.len(), default_suite().len());
        for s in default_suite() {
            s.validate(7).unwrap();
        }
    }
}
