//! Desk-scale acceptance checks. Runs as a plain binary (no test harness)
//! so that each criterion prints exactly one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use gronwall_lab::analytic::{
    burkholder_constant, gamma_objective, gamma_prefactor, jump_counterexample_ratio, optimize_prefactor, percent_grid,
    pi_p_over_sin, tail_integral_oracle, DEFAULT_QUAD_TOL,
};
use gronwall_lab::estimate::{estimate_ladder_chain, estimate_mean, DEFAULT_CONFIDENCE};
use gronwall_lab::simulate::{
    builtin_scenarios, sample_stopped_sup_exact, DriftForm, GronwallScenario, MartingaleModel, PiecewiseConstant,
};
use gronwall_lab::verify::{
    divergence_demo, jump_necessity_scan, sharpness_ratio, verify_gronwall, verify_pathwise_estimate, verify_sup_inf,
};
use gronwall_lab::{Exponent, GeometricLadder, HolderPair, Method, RngStream, Verdict};

type Check = Result<String, String>;

/// Label, check and runtime budget in seconds.
type Criterion = (&'static str, fn() -> Check, u64);

fn ok_if(cond: bool, detail: String) -> Check {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn constant_identity() -> Check {
    let mut worst = 0.0f64;
    for p in percent_grid() {
        let diff = (pi_p_over_sin(p) - tail_integral_oracle(p, 1e-10).map_err(e)?).abs();
        worst = worst.max(diff);
    }
    ok_if(
        worst <= 1e-9,
        format!("max |closed form - quadrature| = {worst:.2e} over 99 exponents"),
    )
}

fn prefactor_identities() -> Check {
    let (mut obj, mut limit, mut excess) = (0.0f64, 0.0f64, f64::NEG_INFINITY);
    for p in percent_grid() {
        let pv = p.value();
        obj = obj.max((gamma_objective(2f64.powf(1.0 / pv), p).map_err(e)? - 4.0).abs());
        limit = limit.max((gamma_prefactor(1.0 + 1e-8, p).map_err(e)? * pv - 1.0).abs());
        let opt = optimize_prefactor(p, DEFAULT_QUAD_TOL).map_err(e)?;
        excess = excess.max(opt.value - (4f64).min(1.0 / pv));
    }
    ok_if(
        obj <= 1e-12 && limit <= 1e-5 && excess <= 1e-9,
        format!("|objective - 4| {obj:.1e}, rel. limit error {limit:.1e}, max(opt - min(4,1/p)) {excess:.1e}"),
    )
}

fn extremal_sharpness() -> Check {
    let p = Exponent::new(0.25).map_err(e)?;
    let r = sharpness_ratio(p, 1_000_000, RngStream::new(20_240_601, 0), DEFAULT_CONFIDENCE).map_err(e)?;
    let z = (r.ratio.mean - r.ratio_truth).abs() / r.ratio.std_error;
    let gap = (burkholder_constant(p) / pi_p_over_sin(p) - 4.0).abs();
    ok_if(
        z <= 3.0 && gap <= 1e-12,
        format!(
            "ratio {:.5} vs {:.5} ({z:.2} SE); |c_p/ratio - 4| = {gap:.1e}",
            r.ratio.mean, r.ratio_truth
        ),
    )
}

fn sup_inf_validity() -> Check {
    let dt = 1e-3;
    let models = [
        ("stopped-bm", MartingaleModel::stopped_bm(1.0, 1e3, dt).map_err(e)?),
        ("exit-bm", MartingaleModel::exit_bm(1.0, 1.0, dt).map_err(e)?),
        (
            "sigma-integral",
            MartingaleModel::sigma_integral(PiecewiseConstant::constant(1.0), 1.0, dt).map_err(e)?,
        ),
    ];
    let mut failed = Vec::new();
    let mut worst_ratio = 0.0f64;
    for (name, model) in &models {
        for p in [0.1, 0.25, 0.5, 0.9] {
            let ex = Exponent::new(p).map_err(e)?;
            let stream = RngStream::for_name(4, &format!("{name}-{p}"));
            let r = verify_sup_inf(model, ex, 100_000, stream, DEFAULT_CONFIDENCE).map_err(e)?;
            worst_ratio = worst_ratio.max(r.lhs.mean / r.bound());
            if r.verdict != Verdict::Pass {
                failed.push(format!("{name} p={p}"));
            }
        }
    }
    ok_if(
        failed.is_empty(),
        format!("12 model/exponent pairs, largest lhs/bound {worst_ratio:.3}; failures: {failed:?}"),
    )
}

fn divergence() -> Check {
    let ee = std::f64::consts::E;
    let ks = [ee - 1.0, ee * ee - 1.0, ee.powi(3) - 1.0];
    let r = divergence_demo(&ks, 1_000_000, RngStream::new(5, 0), DEFAULT_CONFIDENCE).map_err(e)?;
    let cells: Vec<String> = r
        .rows
        .iter()
        .map(|row| format!("{:.4}±{:.4}", row.estimate.mean, row.estimate.half_width))
        .collect();
    ok_if(
        r.verdict == Verdict::Pass,
        format!(
            "E(sup ∧ K) = {} vs 1, 2, 3; increasing {}",
            cells.join(", "),
            r.strictly_increasing
        ),
    )
}

fn jump_counterexample() -> Check {
    let p = Exponent::new(0.5).map_err(e)?;
    let deltas: Vec<f64> = (1..100)
        .map(|i| i as f64 / 100.0)
        .chain((3..=12).map(|k| 1.0 - 10f64.powi(-k)))
        .collect();
    let scan = jump_necessity_scan(p, &[1.0], &deltas).map_err(e)?;
    let sup = scan.summaries[0].grid_sup;
    let blowup = jump_counterexample_ratio(1.0 - 1e-6, p, 0.5).map_err(e)?;
    ok_if(
        sup <= 1.0 && blowup > 1e3,
        format!("q = 1 grid sup {sup:.6}; ratio at (q, δ, p) = (0.5, 1-1e-6, 0.5) is {blowup:.3e}"),
    )
}

fn gronwall() -> Check {
    let p = Exponent::new(0.25).map_err(e)?;
    let pair = HolderPair::from_nu(2.0).map_err(e)?;
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, scn) in builtin_scenarios(1e-3).map_err(e)? {
        let r = verify_gronwall(
            &scn,
            p,
            Some(pair),
            100_000,
            RngStream::for_name(7, name),
            DEFAULT_CONFIDENCE,
        )
        .map_err(e)?;
        let holder = r.holder_split.as_ref().map(|x| x.verdict);
        let sup = r.sup_moment.as_ref().map(|x| x.verdict);
        ok &= holder == Some(Verdict::Pass);
        ok &= sup.is_none_or(|v| v == Verdict::Pass) && (sup.is_some() == scn.is_deterministic_rate());
        if name == "zero-drift" {
            let mean = r.mean.as_ref().ok_or("zero-drift scenario has no mean report")?;
            let covered = mean.lhs.covers(mean.bound());
            ok &= covered && (mean.bound() - 2.0).abs() < 1e-12;
            notes.push(format!(
                "E Z(1) = {:.4}±{:.4} vs bound {}",
                mean.lhs.mean,
                mean.lhs.half_width,
                mean.bound()
            ));
        }
        notes.push(format!("{name}: {}", r.verdict));
    }
    ok_if(ok, notes.join("; "))
}

fn pathwise() -> Check {
    let drift = DriftForm::Schedule {
        schedule: PiecewiseConstant::constant(0.0),
    };
    let scn = GronwallScenario::new(1.0, drift, 1.0, 1e-2).map_err(e)?;
    let r = verify_pathwise_estimate(&scn, &[1e-2, 1e-3, 1e-4], 1000, RngStream::new(8, 0), Some(0.05)).map_err(e)?;
    let cells: Vec<String> = r.rows.iter().map(|row| format!("{:.4}", row.max_violation)).collect();
    ok_if(
        r.decreasing && r.verdict == Verdict::Pass,
        format!("max violation at dt = 1e-2, 1e-3, 1e-4: {}", cells.join(", ")),
    )
}

fn ladder() -> Check {
    let mut cells = Vec::new();
    let mut ok = true;
    for p in [0.25, 0.5] {
        let ex = Exponent::new(p).map_err(e)?;
        for gamma in [1.5, 2f64.powf(1.0 / p)] {
            let ladder = GeometricLadder::reaching(0.1, gamma, 1.0).map_err(e)?;
            let r =
                estimate_ladder_chain(ex, ladder, 1.0, 100_000, RngStream::new(9, 0), DEFAULT_CONFIDENCE).map_err(e)?;
            ok &= r.verdict == Verdict::Pass;
            cells.push(format!(
                "(p={p}, γ={gamma:.3}) {:.3} <= {:.3}",
                r.lhs.mean, r.chain_bound
            ));
        }
    }
    ok_if(ok, cells.join("; "))
}

fn read_tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .expect("output directory")
        .map(|entry| {
            let path = entry.expect("dir entry").path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read(&path).expect("output file"))
        })
        .collect();
    files.sort();
    files
}

fn determinism_and_calibration() -> Check {
    let tmp = tempfile::tempdir().map_err(e)?;
    let mut trees = Vec::new();
    for (run, workers) in [("a", "1"), ("b", "4")] {
        let out = tmp.path().join(run);
        let args = [
            "gronwall-lab",
            "all",
            "--seed",
            "7",
            "--workers",
            workers,
            "--quiet",
            "--out",
        ];
        let code = gronwall_lab::cli::run_cli(args.iter().map(|s| s.to_string()).chain([out.display().to_string()]));
        if code != 0 {
            return Err(format!("`all --seed 7` exited with {code}"));
        }
        trees.push(read_tree(&out));
    }
    let identical = trees[0] == trees[1] && !trees[0].is_empty();

    // CLT coverage of E A^{1/4} = πp/sin(πp) for the stopped supremum.
    let p = Exponent::new(0.25).map_err(e)?;
    let truth = pi_p_over_sin(p);
    let mut rates = Vec::new();
    for confidence in [0.95, 0.999] {
        let seeds = 1000u64;
        let mut covered = 0;
        for seed in 0..seeds {
            let est = estimate_mean(
                |rng| sample_stopped_sup_exact(rng, 1.0).powf(0.25),
                10_000,
                Method::Clt,
                RngStream::new(seed, 1),
                confidence,
            )
            .map_err(e)?;
            covered += est.covers(truth) as u64;
        }
        rates.push((confidence, covered as f64 / seeds as f64));
    }
    let calibrated = rates.iter().all(|&(c, r)| r >= c - 0.02);
    let coverage: Vec<String> = rates.iter().map(|(c, r)| format!("{r:.3} at {c}")).collect();
    ok_if(
        identical && calibrated,
        format!(
            "{} output files identical across runs: {identical}; CLT coverage {}",
            trees[0].len(),
            coverage.join(", ")
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 constant identity", constant_identity, 5),
        ("2 prefactor identities", prefactor_identities, 10),
        ("3 extremal sharpness", extremal_sharpness, 30),
        ("4 sup/inf inequality on built-in models", sup_inf_validity, 300),
        ("5 truncated-mean divergence", divergence, 30),
        ("6 single-jump counterexample", jump_counterexample, 1),
        ("7 Gronwall bounds", gronwall, 300),
        ("8 pathwise estimate refinement", pathwise, 300),
        ("9 ladder chain", ladder, 120),
        ("10 determinism and CI calibration", determinism_and_calibration, 300),
    ];
    let mut failures = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let (status, detail) = match (&result, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d} (over the {budget} s budget)")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "{status} [{:>6.2} s / {budget} s] {name}: {detail}",
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
