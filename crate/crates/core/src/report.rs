//! Running experiments and writing their results.
//!
//! Every experiment produces one [`ExperimentReport`]. On disk a run
//! directory holds `<name>.json` and/or `<name>.csv` per experiment plus
//! `summary.json` and `summary.csv`. JSON files deserialize back into equal
//! values. Nothing time- or host-dependent is written, so two runs with the
//! same seed produce identical files.
//!
//! CSV columns by target:
//!
//! | target | columns |
//! |---|---|
//! | constants | `p,pi_p_over_sin,c_p,improved_constant` |
//! | prop1, gronwall | `bound,lhs_mean,lhs_half_width,rhs_mean,rhs_half_width,constant,scaled_rhs_upper,margin,ratio,verdict,method,n,truncated_fraction` |
//! | sharpness | `p,ratio_mean,ratio_half_width,ratio_truth,c_p,regime_factor,gap_factor,covered,verdict` |
//! | divergence | `k,estimate,half_width,analytic,within_ci` |
//! | jump | `q,delta,ratio` |
//! | estim | `dt,paths,max_violation,rms_violation,max_sign_violation` |
//! | ladder | `index,level,rung_moment,reach_probability` |
//! | summary | `name,target,seed,verdict,headline` |

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytic::Exponent;
use crate::config::{Experiment, ExperimentKind, Format, Target};
use crate::error::{LabError, Result};
use crate::estimate::{estimate_ladder_chain, EstimatorKind, InequalityReport, LadderChainReport, Verdict};
use crate::rng::RngStream;
use crate::simulate::MartingaleModel;
use crate::verify::{
    constants_table, divergence_demo, jump_necessity_scan, sharpness_ratio, verify_gronwall, verify_pathwise_estimate,
    verify_sup_inf, ConstantsRow, DivergenceReport, GronwallReport, JumpScanReport, PathwiseReport, SharpnessReport,
    Trend,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Relative tolerance of the identity `c_p = min(4, 1/p) · πp/sin(πp)`
/// when checking a constants table.
const TABLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "result", rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
pub enum Outcome {
    Constants(Vec<ConstantsRow>),
    SupInf {
        model: MartingaleModel,
        p: Exponent,
        report: InequalityReport,
    },
    Sharpness(SharpnessReport),
    Divergence(DivergenceReport),
    Jump(JumpScanReport),
    Gronwall(GronwallReport),
    Pathwise(PathwiseReport),
    Ladder(LadderChainReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub name: String,
    pub target: Target,
    pub seed: u64,
    pub confidence: f64,
    pub verdict: Verdict,
    pub headline: String,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub name: String,
    pub target: Target,
    pub seed: u64,
    pub verdict: Verdict,
    pub headline: String,
}

fn constants_verdict(rows: &[ConstantsRow]) -> Verdict {
    let ok = rows.iter().all(|r| {
        let p = r.p;
        let identity = (r.c_p - (4f64).min(1.0 / p) * r.pi_p_over_sin).abs() <= TABLE_TOL * r.c_p;
        identity && r.improved_constant.is_finite() && r.improved_constant <= r.c_p * (1.0 + TABLE_TOL)
    });
    if rows.is_empty() || !ok {
        Verdict::Fail
    } else {
        Verdict::Pass
    }
}

/// Runs one experiment. Randomness comes from the stream named after the
/// experiment, so a report does not depend on which other experiments run.
pub fn run_experiment(exp: &Experiment) -> Result<ExperimentReport> {
    let stream = RngStream::for_name(exp.seed, &exp.name);
    let conf = exp.confidence;
    let (verdict, outcome) = match &exp.kind {
        ExperimentKind::Constants { p_grid, tol } => {
            let rows = constants_table(p_grid, *tol)?;
            (constants_verdict(&rows), Outcome::Constants(rows))
        }
        ExperimentKind::SupInf { model, p, n } => {
            let report = verify_sup_inf(model, *p, *n, stream, conf)?;
            (
                report.verdict,
                Outcome::SupInf {
                    model: model.clone(),
                    p: *p,
                    report,
                },
            )
        }
        ExperimentKind::Sharpness { p, n } => {
            let r = sharpness_ratio(*p, *n, stream, conf)?;
            (r.verdict, Outcome::Sharpness(r))
        }
        ExperimentKind::Divergence { k_grid, n } => {
            let r = divergence_demo(k_grid, *n, stream, conf)?;
            (r.verdict, Outcome::Divergence(r))
        }
        ExperimentKind::Jump { p, q_grid, delta_grid } => {
            let r = jump_necessity_scan(*p, q_grid, delta_grid)?;
            (r.verdict, Outcome::Jump(r))
        }
        ExperimentKind::Gronwall { scenario, p, pair, n } => {
            let r = verify_gronwall(scenario, *p, *pair, *n, stream, conf)?;
            (r.verdict, Outcome::Gronwall(r))
        }
        ExperimentKind::Pathwise {
            scenario,
            dt_grid,
            paths,
            threshold,
        } => {
            let r = verify_pathwise_estimate(scenario, dt_grid, *paths, stream, *threshold)?;
            (r.verdict, Outcome::Pathwise(r))
        }
        ExperimentKind::Ladder { p, ladder, barrier, n } => {
            let r = estimate_ladder_chain(*p, *ladder, *barrier, *n, stream, conf)?;
            (r.verdict, Outcome::Ladder(r))
        }
    };
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        name: exp.name.clone(),
        target: exp.target,
        seed: exp.seed,
        confidence: conf,
        verdict,
        headline: headline(&outcome),
        outcome,
    })
}

fn inequality_line(r: &InequalityReport) -> String {
    format!(
        "{:.6} ± {:.2e} <= {:.6} x {:.6} ± {:.2e}  (bound {:.6}, margin {:.3e})",
        r.lhs.mean,
        r.lhs.half_width,
        r.constant,
        r.rhs.mean,
        r.rhs.half_width,
        r.bound(),
        r.margin
    )
}

/// One-line human summary of an outcome.
pub fn headline(outcome: &Outcome) -> String {
    match outcome {
        Outcome::Constants(rows) => {
            let worst = rows
                .iter()
                .map(|r| r.improved_constant / r.c_p)
                .fold(f64::NAN, f64::min);
            format!(
                "{} exponents; p = {}..{}; smallest improved/c_p = {:.6}",
                rows.len(),
                rows.first().map_or(f64::NAN, |r| r.p),
                rows.last().map_or(f64::NAN, |r| r.p),
                worst
            )
        }
        Outcome::SupInf { p, report, .. } => {
            format!("p = {}: E sup^p vs c_p E(-inf)^p: {}", p.value(), inequality_line(report))
        }
        Outcome::Sharpness(r) => format!(
            "p = {}: ratio {:.6} ± {:.2e} vs πp/sin(πp) = {:.6} (covered: {}); c_p exceeds the extremal ratio by min(4, 1/p) = {}",
            r.p.value(),
            r.ratio.mean,
            r.ratio.half_width,
            r.ratio_truth,
            r.covered,
            r.gap_factor
        ),
        Outcome::Divergence(r) => {
            let cells: Vec<String> = r
                .rows
                .iter()
                .map(|row| format!("K = {:.4}: {:.4} (ln(1+K) = {:.4})", row.k, row.estimate.mean, row.analytic))
                .collect();
            format!("E(sup ∧ K) grows like ln(1+K): {}", cells.join("; "))
        }
        Outcome::Jump(r) => {
            let cells: Vec<String> = r
                .summaries
                .iter()
                .map(|s| {
                    let trend = match s.trend {
                        Trend::Bounded => "bounded",
                        Trend::UnboundedTrend => "unbounded trend",
                    };
                    format!("q = {}: max {:.4} ({trend})", s.q, s.grid_sup)
                })
                .collect();
            format!("p = {}: {}", r.p.value(), cells.join("; "))
        }
        Outcome::Gronwall(r) => {
            let cells: Vec<String> = r
                .reports()
                .map(|(k, rep)| format!("{k} {} (ratio {:.4})", rep.verdict, rep.ratio.unwrap_or(f64::NAN)))
                .collect();
            format!("p = {}: {}", r.p.value(), cells.join("; "))
        }
        Outcome::Pathwise(r) => {
            let cells: Vec<String> = r
                .rows
                .iter()
                .map(|row| format!("dt = {:e}: {:.4e}", row.dt, row.max_violation))
                .collect();
            format!("largest pathwise violation {}", cells.join(", "))
        }
        Outcome::Ladder(r) => format!(
            "p = {}, c = {}, γ = {:.6}, depth {}: E A^p = {:.6} ± {:.2e} <= ladder sum {:.6}",
            r.p.value(),
            r.c,
            r.gamma,
            r.depth,
            r.lhs.mean,
            r.lhs.half_width,
            r.chain_bound
        ),
    }
}

#[derive(Serialize)]
struct InequalityCsvRow<'a> {
    bound: &'a str,
    lhs_mean: f64,
    lhs_half_width: f64,
    rhs_mean: f64,
    rhs_half_width: f64,
    constant: f64,
    scaled_rhs_upper: f64,
    margin: f64,
    ratio: Option<f64>,
    verdict: Verdict,
    method: &'static str,
    n: usize,
    truncated_fraction: f64,
}

fn method_name(k: EstimatorKind) -> &'static str {
    match k {
        EstimatorKind::Clt => "clt",
        EstimatorKind::MedianOfMeans { .. } => "median-of-means",
        EstimatorKind::Exact => "exact",
    }
}

fn inequality_row<'a>(bound: &'a str, r: &InequalityReport) -> InequalityCsvRow<'a> {
    InequalityCsvRow {
        bound,
        lhs_mean: r.lhs.mean,
        lhs_half_width: r.lhs.half_width,
        rhs_mean: r.rhs.mean,
        rhs_half_width: r.rhs.half_width,
        constant: r.constant,
        scaled_rhs_upper: r.scaled_rhs_upper,
        margin: r.margin,
        ratio: r.ratio,
        verdict: r.verdict,
        method: method_name(r.lhs.method),
        n: r.lhs.n,
        truncated_fraction: r.truncated_fraction,
    }
}

#[derive(Serialize)]
struct SharpnessCsvRow {
    p: f64,
    ratio_mean: f64,
    ratio_half_width: f64,
    ratio_truth: f64,
    c_p: f64,
    regime_factor: f64,
    gap_factor: f64,
    covered: bool,
    verdict: Verdict,
}

#[derive(Serialize)]
struct DivergenceCsvRow {
    k: f64,
    estimate: f64,
    half_width: f64,
    analytic: f64,
    within_ci: bool,
}

fn csv_err(e: csv::Error) -> LabError {
    LabError::Io(e.to_string())
}

/// Renders the outcome table as CSV text.
pub fn to_csv(report: &ExperimentReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match &report.outcome {
        Outcome::Constants(rows) => {
            for r in rows {
                w.serialize(r).map_err(csv_err)?;
            }
        }
        Outcome::SupInf { report, .. } => w.serialize(inequality_row("sup-inf", report)).map_err(csv_err)?,
        Outcome::Gronwall(g) => {
            for (k, r) in g.reports() {
                w.serialize(inequality_row(k, r)).map_err(csv_err)?;
            }
        }
        Outcome::Sharpness(r) => w
            .serialize(SharpnessCsvRow {
                p: r.p.value(),
                ratio_mean: r.ratio.mean,
                ratio_half_width: r.ratio.half_width,
                ratio_truth: r.ratio_truth,
                c_p: r.c_p,
                regime_factor: r.regime_factor,
                gap_factor: r.gap_factor,
                covered: r.covered,
                verdict: r.verdict,
            })
            .map_err(csv_err)?,
        Outcome::Divergence(r) => {
            for row in &r.rows {
                w.serialize(DivergenceCsvRow {
                    k: row.k,
                    estimate: row.estimate.mean,
                    half_width: row.estimate.half_width,
                    analytic: row.analytic,
                    within_ci: row.within_ci,
                })
                .map_err(csv_err)?;
            }
        }
        Outcome::Jump(r) => {
            for row in &r.rows {
                w.serialize(row).map_err(csv_err)?;
            }
        }
        Outcome::Pathwise(r) => {
            for row in &r.rows {
                w.serialize(row).map_err(csv_err)?;
            }
        }
        Outcome::Ladder(r) => {
            for t in &r.terms {
                w.serialize(t).map_err(csv_err)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| LabError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_json(report: &ExperimentReport) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(|e| LabError::Io(e.to_string()))
}

pub fn from_json(text: &str) -> Result<ExperimentReport> {
    serde_json::from_str(text).map_err(|e| LabError::Config(format!("bad report JSON: {e}")))
}

pub fn summary_rows(reports: &[ExperimentReport]) -> Vec<SummaryRow> {
    reports
        .iter()
        .map(|r| SummaryRow {
            name: r.name.clone(),
            target: r.target,
            seed: r.seed,
            verdict: r.verdict,
            headline: r.headline.clone(),
        })
        .collect()
}

/// Writes per-experiment files and the run summary into `dir`.
pub fn write_outputs(dir: &Path, reports: &[ExperimentReport], formats: &[Format]) -> Result<()> {
    fs::create_dir_all(dir)?;
    for r in reports {
        if formats.contains(&Format::Json) {
            fs::write(dir.join(format!("{}.json", r.name)), to_json(r)? + "\n")?;
        }
        if formats.contains(&Format::Csv) {
            fs::write(dir.join(format!("{}.csv", r.name)), to_csv(r)?)?;
        }
    }
    let summary = summary_rows(reports);
    let json = serde_json::to_string_pretty(&summary).map_err(|e| LabError::Io(e.to_string()))?;
    fs::write(dir.join("summary.json"), json + "\n")?;
    let mut w = csv::Writer::from_path(dir.join("summary.csv")).map_err(csv_err)?;
    for row in &summary {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentSpec;

    fn run(spec: ExperimentSpec) -> ExperimentReport {
        run_experiment(&spec.validate(11).unwrap()).unwrap()
    }

    #[test]
    fn constants_csv_header_and_half_row() {
        let r = run(ExperimentSpec {
            p_grid: Some(crate::config::GridSpec::List(vec![0.25, 0.5, 0.75])),
            ..ExperimentSpec::new("c", Target::Constants)
        });
        assert_eq!(r.verdict, Verdict::Pass);
        let csv = to_csv(&r).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("p,pi_p_over_sin,c_p,improved_constant"));
        let half = lines.nth(1).unwrap();
        let c_p: f64 = half.split(',').nth(2).unwrap().parse().unwrap();
        assert!((c_p - std::f64::consts::PI).abs() < 1e-12, "{half}");
    }

    #[test]
    fn json_roundtrip_every_kind() {
        for spec in crate::config::default_suite() {
            let spec = ExperimentSpec {
                n: spec.n.map(|_| 2000),
                paths: spec.paths.map(|_| 20),
                ..spec
            };
            let r = run(spec);
            let back = from_json(&to_json(&r).unwrap()).unwrap();
            assert_eq!(back, r, "{}", r.name);
            assert!(!to_csv(&r).unwrap().is_empty());
        }
    }

    #[test]
    fn gronwall_csv_has_one_row_per_bound() {
        let r = run(ExperimentSpec {
            p: Some(0.5),
            nu: Some(1.5),
            n: Some(1000),
            dt: Some(1e-2),
            ..ExperimentSpec::new("g", Target::Gronwall)
        });
        let csv = to_csv(&r).unwrap();
        let bounds: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
        assert_eq!(bounds, vec!["holder-split", "sup-moment", "mean"]);
    }

    #[test]
    fn outputs_written() {
        let dir = tempfile::tempdir().unwrap();
        let r = run(ExperimentSpec::new("jump", Target::Jump));
        write_outputs(dir.path(), &[r], &[Format::Csv, Format::Json]).unwrap();
        for f in ["jump.csv", "jump.json", "summary.csv", "summary.json"] {
            assert!(dir.path().join(f).exists(), "{f}");
        }
        let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert!(summary.starts_with("name,target,seed,verdict,headline\n"));
    }
}
