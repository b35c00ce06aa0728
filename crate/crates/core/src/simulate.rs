//! Exact samplers and Euler paths.
//!
//! Exact samplers invert the gambler's-ruin law `P(A >= a) = b / (a + b)` of
//! the supremum of Brownian motion run until it first hits `-b`. Grid models
//! detect barrier crossings on the grid only: the recorded supremum is an
//! underestimate and the recorded infimum may overshoot a lower barrier by
//! `O(sqrt dt)`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::analytic::check_levels;
use crate::error::{ensure_nonnegative, ensure_positive, LabError, Result};
use crate::rng::{LabRng, RngStream};

/// Upper limit on Euler steps per path. Longer horizons are cut short and
/// flagged as truncated.
pub const MAX_STEPS: usize = 50_000_000;

/// Inverse CDF of the stopped-supremum law: `b U / (1 - U)`.
pub fn stopped_sup_from_uniform(u: f64, b: f64) -> f64 {
    b * u / (1.0 - u)
}

fn open_uniform(rng: &mut LabRng) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u < 1.0 {
            return u;
        }
    }
}

/// Exact draw of `sup_t W(τ_{-b} ∧ t)`.
pub fn sample_stopped_sup_exact(rng: &mut LabRng, b: f64) -> f64 {
    stopped_sup_from_uniform(open_uniform(rng), b)
}

/// Inverse CDF of `Y ∨ 0`, the positive part of the supremum of Brownian
/// motion between its first hits of `-a_prev` and `-a_cur`.
///
/// `P(Y ∨ 0 >= y) = (a_cur - a_prev) / (a_cur + y)` for `y > 0`, with an atom
/// of mass `a_prev / a_cur` at zero.
pub fn ladder_rung_from_uniform(u: f64, a_prev: f64, a_cur: f64) -> f64 {
    if u < a_prev / a_cur {
        return 0.0;
    }
    // (a_cur - a_prev)/(1 - u) - a_cur, rearranged so a_prev = 0 gives b U/(1 - U) exactly
    ((u * a_cur - a_prev) / (1.0 - u)).max(0.0)
}

pub fn sample_ladder_rung_exact(rng: &mut LabRng, a_prev: f64, a_cur: f64) -> Result<f64> {
    check_levels(a_prev, a_cur)?;
    Ok(ladder_rung_from_uniform(open_uniform(rng), a_prev, a_cur))
}

/// A right-continuous step function on `[0, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseConstant {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseConstant {
    pub fn constant(value: f64) -> Self {
        PiecewiseConstant {
            breaks: vec![0.0],
            values: vec![value],
        }
    }

    /// `values[i]` applies on `[breaks[i], breaks[i + 1])`. `breaks` must
    /// start at 0 and increase strictly.
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let ok = !breaks.is_empty()
            && breaks.len() == values.len()
            && breaks[0] == 0.0
            && breaks.windows(2).all(|w| w[0] < w[1])
            && breaks.iter().chain(&values).all(|v| v.is_finite());
        if !ok {
            return Err(LabError::Config(
                "schedule needs matching breaks/values, breaks starting at 0 and strictly increasing".into(),
            ));
        }
        Ok(PiecewiseConstant { breaks, values })
    }

    pub fn at(&self, t: f64) -> f64 {
        let idx = self.breaks.partition_point(|&b| b <= t);
        self.values[idx.saturating_sub(1)]
    }

    /// `∫_0^t f(s) ds`.
    pub fn integral(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for (i, &start) in self.breaks.iter().enumerate() {
            if start >= t {
                break;
            }
            let end = self.breaks.get(i + 1).copied().unwrap_or(f64::INFINITY).min(t);
            acc += self.values[i] * (end - start);
        }
        acc
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_identically_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Continuous local martingales started at zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MartingaleModel {
    /// Brownian motion frozen at its first hit of `-barrier`.
    StoppedBm { barrier: f64, horizon: f64, dt: f64 },
    /// Brownian motion frozen at its first exit from `(-lower, upper)`.
    ExitBm {
        lower: f64,
        upper: f64,
        horizon: f64,
        dt: f64,
    },
    /// `∫_0^t σ(s) dW(s)` for `t <= horizon`, constant afterwards.
    SigmaIntegral {
        sigma: PiecewiseConstant,
        horizon: f64,
        dt: f64,
    },
}

impl MartingaleModel {
    pub fn stopped_bm(barrier: f64, horizon: f64, dt: f64) -> Result<Self> {
        let m = MartingaleModel::StoppedBm { barrier, horizon, dt };
        m.validate()?;
        Ok(m)
    }

    /// Exit model with a horizon long enough that fewer than `1e-4` of the
    /// paths are still inside the interval when it ends.
    pub fn exit_bm(lower: f64, upper: f64, dt: f64) -> Result<Self> {
        ensure_positive("lower", lower)?;
        ensure_positive("upper", upper)?;
        let width = lower + upper;
        // P(τ > t) <= (4/π) exp(-π² t / (2 w²))
        let horizon = 2.0 * width * width / (std::f64::consts::PI.powi(2)) * (4.0 / (std::f64::consts::PI * 1e-4)).ln();
        let m = MartingaleModel::ExitBm {
            lower,
            upper,
            horizon,
            dt,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn sigma_integral(sigma: PiecewiseConstant, horizon: f64, dt: f64) -> Result<Self> {
        let m = MartingaleModel::SigmaIntegral { sigma, horizon, dt };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MartingaleModel::StoppedBm { barrier, horizon, dt } => {
                ensure_positive("barrier", *barrier)?;
                ensure_positive("horizon", *horizon)?;
                ensure_positive("dt", *dt)?;
            }
            MartingaleModel::ExitBm {
                lower,
                upper,
                horizon,
                dt,
            } => {
                ensure_positive("lower", *lower)?;
                ensure_positive("upper", *upper)?;
                ensure_positive("horizon", *horizon)?;
                ensure_positive("dt", *dt)?;
            }
            MartingaleModel::SigmaIntegral { sigma, horizon, dt } => {
                ensure_positive("horizon", *horizon)?;
                ensure_positive("dt", *dt)?;
                if sigma.values().iter().any(|v| !v.is_finite()) {
                    return Err(LabError::Config("sigma schedule must be finite".into()));
                }
            }
        }
        Ok(())
    }

    fn horizon_and_dt(&self) -> (f64, f64) {
        match self {
            MartingaleModel::StoppedBm { horizon, dt, .. }
            | MartingaleModel::ExitBm { horizon, dt, .. }
            | MartingaleModel::SigmaIntegral { horizon, dt, .. } => (*horizon, *dt),
        }
    }
}

/// A discretised trajectory with its extrema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub dt: f64,
    /// States at `0, dt, 2dt, ...`; for barrier models the path ends at the
    /// crossing index. Empty when the path was simulated for its extrema only.
    pub values: Vec<f64>,
    pub running_sup: f64,
    pub running_inf: f64,
    /// First grid index at which a barrier was crossed.
    pub hit_index: Option<usize>,
    /// The horizon (or step budget) ran out before a barrier was crossed.
    pub truncated: bool,
    pub final_value: f64,
}

impl PathRecord {
    fn start(x0: f64, dt: f64, keep: bool, capacity: usize) -> Self {
        let mut values = Vec::new();
        if keep {
            values.reserve(capacity.min(1 << 24) + 1);
            values.push(x0);
        }
        PathRecord {
            dt,
            values,
            running_sup: x0,
            running_inf: x0,
            hit_index: None,
            truncated: false,
            final_value: x0,
        }
    }

    #[inline]
    fn push(&mut self, x: f64, keep: bool) {
        if keep {
            self.values.push(x);
        }
        self.running_sup = self.running_sup.max(x);
        self.running_inf = self.running_inf.min(x);
        self.final_value = x;
    }

    /// `-running_inf`, clamped at 0.
    pub fn neg_inf(&self) -> f64 {
        (-self.running_inf).max(0.0)
    }

    /// `running_sup`, clamped at 0.
    pub fn sup(&self) -> f64 {
        self.running_sup.max(0.0)
    }
}

fn step_count(horizon: f64, dt: f64) -> (usize, f64) {
    let raw = (horizon / dt - 1e-9).ceil().max(1.0);
    if raw > MAX_STEPS as f64 {
        (MAX_STEPS, dt)
    } else {
        let n = raw as usize;
        (n, horizon / n as f64)
    }
}

/// Simulates one path of `model` from a fresh generator for `stream`.
pub fn simulate_model(model: &MartingaleModel, stream: RngStream) -> Result<PathRecord> {
    simulate_model_with(model, &mut stream.rng(), true)
}

/// Simulates one path drawing from `rng`. With `keep_values == false` only
/// the extrema and hitting metadata are recorded; the random draws are the
/// same either way.
pub fn simulate_model_with(model: &MartingaleModel, rng: &mut LabRng, keep_values: bool) -> Result<PathRecord> {
    model.validate()?;
    let (horizon, dt_req) = model.horizon_and_dt();
    let (steps, dt) = step_count(horizon, dt_req);
    let sqrt_dt = dt.sqrt();
    let mut rec = PathRecord::start(0.0, dt, keep_values, steps);
    let mut x = 0.0;

    match model {
        MartingaleModel::StoppedBm { barrier, .. } => {
            for k in 1..=steps {
                let z: f64 = rng.sample(StandardNormal);
                x += sqrt_dt * z;
                rec.push(x, keep_values);
                if x <= -barrier {
                    rec.hit_index = Some(k);
                    return Ok(rec);
                }
            }
            rec.truncated = true;
        }
        MartingaleModel::ExitBm { lower, upper, .. } => {
            for k in 1..=steps {
                let z: f64 = rng.sample(StandardNormal);
                x += sqrt_dt * z;
                rec.push(x, keep_values);
                if x <= -lower || x >= *upper {
                    rec.hit_index = Some(k);
                    return Ok(rec);
                }
            }
            rec.truncated = true;
        }
        MartingaleModel::SigmaIntegral { sigma, .. } => {
            for k in 0..steps {
                let s = sigma.at(k as f64 * dt);
                let z: f64 = rng.sample(StandardNormal);
                x += s * sqrt_dt * z;
                rec.push(x, keep_values);
            }
            if horizon / dt_req > MAX_STEPS as f64 {
                rec.truncated = true;
            }
        }
    }
    Ok(rec)
}

/// Drift `a(s)` of the scenario SDE `dX = a(s) X ds + dW`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum DriftForm {
    /// Deterministic, piecewise constant, nonnegative.
    Schedule { schedule: PiecewiseConstant },
    /// `a(s) = rate · 1{X(s) >= 0}`, an adapted random drift.
    SignFeedback { rate: f64 },
}

impl DriftForm {
    #[inline]
    fn at(&self, t: f64, x: f64) -> f64 {
        match self {
            DriftForm::Schedule { schedule } => schedule.at(t),
            DriftForm::SignFeedback { rate } => {
                if x >= 0.0 {
                    *rate
                } else {
                    0.0
                }
            }
        }
    }
}

/// `X` solves `dX = a(s) X ds + dW`, `X(0) = x0`, and
///
/// * `Z = X² >= 0`,
/// * `ψ = 2a >= 0`,
/// * `H(t) = x0² + t (1 + h_noise · ξ)` with `ξ ~ Exp(1)` drawn at time 0,
/// * `M(t) = 2 ∫_0^t X dW`,
///
/// so that `Z(t) <= ∫_0^t ψ Z ds + M(t) + H(t)` by Itô's formula, with
/// equality when `h_noise == 0`. `H` is nondecreasing, hence `H* = H`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GronwallScenario {
    pub x0: f64,
    pub drift: DriftForm,
    pub horizon: f64,
    pub dt: f64,
    #[serde(default)]
    pub h_noise: f64,
}

impl GronwallScenario {
    pub fn new(x0: f64, drift: DriftForm, horizon: f64, dt: f64) -> Result<Self> {
        let s = GronwallScenario {
            x0,
            drift,
            horizon,
            dt,
            h_noise: 0.0,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_h_noise(mut self, h_noise: f64) -> Result<Self> {
        self.h_noise = h_noise;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.x0.is_finite() {
            return Err(LabError::InvalidParameter {
                name: "x0",
                value: self.x0,
                reason: "must be finite",
            });
        }
        ensure_positive("horizon", self.horizon)?;
        ensure_positive("dt", self.dt)?;
        ensure_nonnegative("h_noise", self.h_noise)?;
        match &self.drift {
            DriftForm::Schedule { schedule } => {
                ensure_nonnegative("drift", schedule.min_value())?;
            }
            DriftForm::SignFeedback { rate } => {
                ensure_nonnegative("rate", *rate)?;
            }
        }
        let (steps, _) = step_count(self.horizon, self.dt);
        if steps >= MAX_STEPS {
            return Err(LabError::InvalidParameter {
                name: "dt",
                value: self.dt,
                reason: "horizon / dt exceeds the step budget",
            });
        }
        Ok(())
    }

    pub fn is_deterministic_rate(&self) -> bool {
        matches!(self.drift, DriftForm::Schedule { .. })
    }

    /// `∫_0^T ψ` for deterministic drift.
    pub fn psi_integral(&self) -> Option<f64> {
        match &self.drift {
            DriftForm::Schedule { schedule } => Some(2.0 * schedule.integral(self.horizon)),
            DriftForm::SignFeedback { .. } => None,
        }
    }

    /// `H(T) = x0² + T` when `H` carries no noise.
    pub fn deterministic_h_end(&self) -> Option<f64> {
        (self.h_noise == 0.0).then_some(self.x0 * self.x0 + self.horizon)
    }

    pub fn steps(&self) -> (usize, f64) {
        step_count(self.horizon, self.dt)
    }
}

/// Named scenarios exercised by the default checks: zero drift (the
/// equality case of the mean bound), constant and switching rates, noisy
/// `H`, and a random sign-feedback rate. All start at `x0 = 1`, `T = 1`.
pub fn builtin_scenarios(dt: f64) -> Result<Vec<(&'static str, GronwallScenario)>> {
    let schedule = |s: PiecewiseConstant| DriftForm::Schedule { schedule: s };
    Ok(vec![
        (
            "zero-drift",
            GronwallScenario::new(1.0, schedule(PiecewiseConstant::constant(0.0)), 1.0, dt)?,
        ),
        (
            "constant-rate",
            GronwallScenario::new(1.0, schedule(PiecewiseConstant::constant(0.5)), 1.0, dt)?,
        ),
        (
            "switching-rate",
            GronwallScenario::new(
                1.0,
                schedule(PiecewiseConstant::new(vec![0.0, 0.5], vec![0.0, 1.0])?),
                1.0,
                dt,
            )?,
        ),
        (
            "noisy-h",
            GronwallScenario::new(1.0, schedule(PiecewiseConstant::constant(0.5)), 1.0, dt)?.with_h_noise(0.5)?,
        ),
        (
            "sign-feedback",
            GronwallScenario::new(1.0, DriftForm::SignFeedback { rate: 0.5 }, 1.0, dt)?,
        ),
    ])
}

/// State of the scenario at grid time `t_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioState {
    pub k: usize,
    pub t: f64,
    pub x: f64,
    pub z: f64,
    pub h: f64,
    pub h_star: f64,
    pub m: f64,
    /// `L(t) = ∫_0^t exp(-∫_0^s ψ) dM(s)`.
    pub l: f64,
    pub psi_integral: f64,
}

impl ScenarioState {
    /// `Z - exp(∫ψ)(L + H*)`; nonpositive in continuous time.
    pub fn pathwise_gap(&self) -> f64 {
        self.z - self.psi_integral.exp() * (self.l + self.h_star)
    }

    /// `-L - H*`; nonpositive in continuous time.
    pub fn sign_gap(&self) -> f64 {
        -self.l - self.h_star
    }
}

/// Euler–Maruyama with left-point sums for `M`, `L` and the rectangle rule
/// for `∫ψ`. `visit` sees every grid state, including `k = 0`.
pub fn run_scenario<F>(scn: &GronwallScenario, rng: &mut LabRng, mut visit: F)
where
    F: FnMut(&ScenarioState),
{
    let (steps, dt) = scn.steps();
    let sqrt_dt = dt.sqrt();
    let slope = if scn.h_noise > 0.0 {
        let xi: f64 = rng.sample(rand_distr::Exp1);
        1.0 + scn.h_noise * xi
    } else {
        1.0
    };
    let h0 = scn.x0 * scn.x0;
    let mut st = ScenarioState {
        k: 0,
        t: 0.0,
        x: scn.x0,
        z: h0,
        h: h0,
        h_star: h0,
        m: 0.0,
        l: 0.0,
        psi_integral: 0.0,
    };
    visit(&st);
    for k in 1..=steps {
        let a = scn.drift.at(st.t, st.x);
        let dw = sqrt_dt * rng.sample::<f64, _>(StandardNormal);
        let dm = 2.0 * st.x * dw;
        st.l += (-st.psi_integral).exp() * dm;
        st.m += dm;
        st.psi_integral += 2.0 * a * dt;
        st.x += a * st.x * dt + dw;
        st.z = st.x * st.x;
        st.k = k;
        st.t = k as f64 * dt;
        st.h = h0 + st.t * slope;
        st.h_star = st.h_star.max(st.h);
        visit(&st);
    }
}

/// Full grid record of one scenario path.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioPath {
    pub z: PathRecord,
    pub h: Vec<f64>,
    pub h_star: Vec<f64>,
    pub l: Vec<f64>,
    pub m: Vec<f64>,
    pub psi_integral: Vec<f64>,
}

pub fn simulate_scenario(scn: &GronwallScenario, stream: RngStream) -> Result<ScenarioPath> {
    scn.validate()?;
    let (steps, dt) = scn.steps();
    let cap = steps + 1;
    let mut z = PathRecord::start(scn.x0 * scn.x0, dt, true, steps);
    z.values.clear();
    let mut out = ScenarioPath {
        z,
        h: Vec::with_capacity(cap),
        h_star: Vec::with_capacity(cap),
        l: Vec::with_capacity(cap),
        m: Vec::with_capacity(cap),
        psi_integral: Vec::with_capacity(cap),
    };
    run_scenario(scn, &mut stream.rng(), |s| {
        out.z.push(s.z, true);
        out.h.push(s.h);
        out.h_star.push(s.h_star);
        out.l.push(s.l);
        out.m.push(s.m);
        out.psi_integral.push(s.psi_integral);
    });
    out.z.truncated = false;
    Ok(out)
}

/// Per-path quantities needed by the Gronwall experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSummary {
    pub sup_z: f64,
    pub z_end: f64,
    pub h_star_end: f64,
    pub psi_integral_end: f64,
    /// `max_k (Z - exp(∫ψ)(L + H*))⁺`.
    pub max_pathwise_violation: f64,
    /// `max_k (-L - H*)⁺`.
    pub max_sign_violation: f64,
}

pub fn summarize_scenario(scn: &GronwallScenario, rng: &mut LabRng) -> ScenarioSummary {
    let mut s = ScenarioSummary {
        sup_z: 0.0,
        z_end: 0.0,
        h_star_end: 0.0,
        psi_integral_end: 0.0,
        max_pathwise_violation: 0.0,
        max_sign_violation: 0.0,
    };
    run_scenario(scn, rng, |st| {
        s.sup_z = s.sup_z.max(st.z);
        s.max_pathwise_violation = s.max_pathwise_violation.max(st.pathwise_gap());
        s.max_sign_violation = s.max_sign_violation.max(st.sign_gap());
        s.z_end = st.z;
        s.h_star_end = st.h_star;
        s.psi_integral_end = st.psi_integral;
    });
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::sample_batch;

    #[test]
    fn inverse_cdf_median() {
        assert_eq!(stopped_sup_from_uniform(0.5, 1.0), 1.0);
        assert_eq!(stopped_sup_from_uniform(0.5, 3.0), 3.0);
        assert_eq!(stopped_sup_from_uniform(0.0, 3.0), 0.0);
    }

    #[test]
    fn first_rung_has_no_atom() {
        for u in [0.0, 0.1, 0.5, 0.9, 0.999] {
            assert_eq!(ladder_rung_from_uniform(u, 0.0, 2.0), stopped_sup_from_uniform(u, 2.0));
        }
        assert_eq!(ladder_rung_from_uniform(0.49, 1.0, 2.0), 0.0);
        // Just above the atom the survival is 1/2 = (a_cur - a_prev)/(a_cur + y) => y ≈ 0.
        assert!(ladder_rung_from_uniform(0.5, 1.0, 2.0) < 1e-12);
    }

    #[test]
    fn rung_rejects_bad_levels() {
        let mut rng = RngStream::new(1, 1).rng();
        assert!(sample_ladder_rung_exact(&mut rng, 1.0, 1.0).is_err());
        assert!(sample_ladder_rung_exact(&mut rng, -1.0, 1.0).is_err());
    }

    #[test]
    fn atom_fraction() {
        let n = 100_000;
        let xs = sample_batch(RngStream::new(9, 0), n, |r| {
            sample_ladder_rung_exact(r, 1.0, 2.0).unwrap()
        });
        let zeros = xs.iter().filter(|&&x| x == 0.0).count() as f64 / n as f64;
        let sd = (0.25 / n as f64).sqrt();
        assert!((zeros - 0.5).abs() < 3.0 * sd, "{zeros}");
    }

    #[test]
    fn piecewise_constant() {
        let f = PiecewiseConstant::new(vec![0.0, 1.0, 3.0], vec![2.0, 0.0, 1.0]).unwrap();
        assert_eq!(f.at(0.5), 2.0);
        assert_eq!(f.at(1.0), 0.0);
        assert_eq!(f.at(10.0), 1.0);
        assert_eq!(f.integral(4.0), 2.0 + 0.0 + 1.0);
        assert_eq!(f.integral(0.5), 1.0);
        assert!(PiecewiseConstant::new(vec![0.5], vec![1.0]).is_err());
        assert!(PiecewiseConstant::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn zero_sigma_is_zero_path() {
        let m = MartingaleModel::sigma_integral(PiecewiseConstant::constant(0.0), 1.0, 0.01).unwrap();
        let p = simulate_model(&m, RngStream::new(1, 2)).unwrap();
        assert!(p.values.iter().all(|&v| v == 0.0));
        assert_eq!((p.running_sup, p.running_inf), (0.0, 0.0));
        assert_eq!(p.values.len(), 101);
    }

    #[test]
    fn path_record_consistency_and_reproducibility() {
        let models = [
            MartingaleModel::stopped_bm(1.0, 50.0, 1e-2).unwrap(),
            MartingaleModel::exit_bm(1.0, 0.5, 1e-3).unwrap(),
            MartingaleModel::sigma_integral(
                PiecewiseConstant::new(vec![0.0, 0.5], vec![1.0, 3.0]).unwrap(),
                1.0,
                1e-3,
            )
            .unwrap(),
        ];
        for (i, m) in models.iter().enumerate() {
            for j in 0..20 {
                let s = RngStream::new(77, (i * 100 + j) as u64);
                let a = simulate_model(m, s).unwrap();
                let b = simulate_model(m, s).unwrap();
                assert_eq!(a, b);
                let max = a.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let min = a.values.iter().copied().fold(f64::INFINITY, f64::min);
                assert_eq!(a.running_sup, max);
                assert_eq!(a.running_inf, min);
                assert!(a.running_inf <= a.values[0] && a.values[0] <= a.running_sup);
                let lean = simulate_model_with(m, &mut s.rng(), false).unwrap();
                assert_eq!((lean.running_sup, lean.running_inf), (a.running_sup, a.running_inf));
                assert_eq!(lean.hit_index, a.hit_index);
                if let (MartingaleModel::StoppedBm { barrier, .. }, Some(h)) = (m, a.hit_index) {
                    assert!(a.values[h] <= -barrier);
                    assert_eq!(h + 1, a.values.len());
                }
            }
        }
    }

    #[test]
    fn scenario_invariants() {
        let scn = GronwallScenario::new(1.0, DriftForm::SignFeedback { rate: 1.0 }, 1.0, 1e-3)
            .unwrap()
            .with_h_noise(0.5)
            .unwrap();
        let a = simulate_scenario(&scn, RngStream::new(4, 4)).unwrap();
        let b = simulate_scenario(&scn, RngStream::new(4, 4)).unwrap();
        assert_eq!(a, b);
        assert!(a.z.values.iter().all(|&z| z >= 0.0));
        assert_eq!(a.z.values.len(), 1001);
        assert!(a.h.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(a.h, a.h_star);
        assert_eq!(a.psi_integral[0], 0.0);
        assert!(a.psi_integral.iter().all(|&v| v <= 2.0 + 1e-12));
    }

    #[test]
    fn zero_drift_quadratic_variation_identity() {
        // Z = M + H + (Σ ΔW² - t_k) exactly on the grid when a ≡ 0.
        let scn = GronwallScenario::new(
            1.0,
            DriftForm::Schedule {
                schedule: PiecewiseConstant::constant(0.0),
            },
            1.0,
            1e-3,
        )
        .unwrap();
        let path = simulate_scenario(&scn, RngStream::new(8, 1)).unwrap();
        assert_eq!(path.l, path.m);
        let (_, dt) = scn.steps();
        let mut qv = 0.0;
        let mut w_prev = 0.0;
        let mut rng = RngStream::new(8, 1).rng();
        for k in 1..path.m.len() {
            let dw = dt.sqrt() * rng.sample::<f64, _>(StandardNormal);
            let w = w_prev + dw;
            qv += dw * dw;
            let resid = path.z.values[k] - path.m[k] - path.h[k];
            assert!((resid - (qv - k as f64 * dt)).abs() < 1e-10, "k = {k}");
            assert!(((1.0 + w) * (1.0 + w) - path.z.values[k]).abs() < 1e-10);
            w_prev = w;
        }
    }
}
