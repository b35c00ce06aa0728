//! Monte-Carlo means with confidence intervals.
//!
//! Two estimators are offered. The CLT estimator reports `mean ± z s/√n`
//! and needs a finite second moment. Median-of-means splits the sample into
//! `k` contiguous blocks and reports the median block mean; its half-width is
//! the distance to the outer order statistics of the block means that form a
//! distribution-free interval for the block-mean median at the requested
//! confidence. It only needs a finite first moment, which is what the
//! supremum powers `A^p`, `p >= 1/2`, of the stopped law provide.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, ContinuousCDF, DiscreteCDF, Normal};

use crate::analytic::{ladder_moment, Exponent, GeometricLadder};
use crate::error::{ensure_positive, LabError, Result};
use crate::rng::{sample_batch, RngStream, CHUNK_LEN};
use crate::simulate::sample_ladder_rung_exact;

pub const DEFAULT_CONFIDENCE: f64 = 0.999;
pub const MIN_SAMPLES: usize = 100;

/// Requested estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Clt,
    MedianOfMeans,
}

/// Estimator that actually produced an [`EstimateWithCI`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EstimatorKind {
    Clt,
    MedianOfMeans {
        blocks: usize,
    },
    /// Closed-form value; `n` is 0 and the half-width is 0.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithCI {
    pub mean: f64,
    pub half_width: f64,
    /// `s/√n` for CLT, the spread of block means over `√k` for median-of-means.
    pub std_error: f64,
    pub n: usize,
    pub confidence: f64,
    pub method: EstimatorKind,
}

impl EstimateWithCI {
    pub fn exact(value: f64) -> Self {
        EstimateWithCI {
            mean: value,
            half_width: 0.0,
            std_error: 0.0,
            n: 0,
            confidence: 1.0,
            method: EstimatorKind::Exact,
        }
    }

    pub fn lower(&self) -> f64 {
        self.mean - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.mean + self.half_width
    }

    pub fn covers(&self, value: f64) -> bool {
        (self.mean - value).abs() <= self.half_width
    }

    pub fn is_finite(&self) -> bool {
        self.mean.is_finite() && self.half_width.is_finite()
    }
}

/// Two-sided standard normal quantile for `confidence`.
pub fn z_quantile(confidence: f64) -> f64 {
    let n = Normal::standard();
    n.inverse_cdf(0.5 + 0.5 * confidence)
}

/// `2 ⌊ln(1/(1 - confidence))⌋ + 1`, capped at `n/2` and kept odd.
pub fn mom_block_count(confidence: f64, n: usize) -> usize {
    let k = 2 * (1.0 / (1.0 - confidence)).ln().floor().max(0.0) as usize + 1;
    let cap = (n / 2).max(1);
    let k = k.min(cap);
    if k.is_multiple_of(2) {
        k - 1
    } else {
        k
    }
}

/// Running moments of one chunk of samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialMoments {
    pub index: usize,
    pub count: usize,
    pub mean: f64,
    pub m2: f64,
}

impl PartialMoments {
    pub fn from_slice(index: usize, xs: &[f64]) -> Self {
        let mut p = PartialMoments {
            index,
            count: 0,
            mean: 0.0,
            m2: 0.0,
        };
        for &x in xs {
            p.count += 1;
            let d = x - p.mean;
            p.mean += d / p.count as f64;
            p.m2 += d * (x - p.mean);
        }
        p
    }

    fn combine(self, other: PartialMoments) -> PartialMoments {
        if self.count == 0 {
            return PartialMoments {
                index: self.index,
                ..other
            };
        }
        if other.count == 0 {
            return self;
        }
        let n = (self.count + other.count) as f64;
        let d = other.mean - self.mean;
        PartialMoments {
            index: self.index,
            count: self.count + other.count,
            mean: self.mean + d * other.count as f64 / n,
            m2: self.m2 + other.m2 + d * d * self.count as f64 * other.count as f64 / n,
        }
    }
}

/// Merges chunk moments in chunk-index order, so any arrival order of the
/// parts gives bitwise the same result.
pub fn merge_partials(mut parts: Vec<PartialMoments>) -> PartialMoments {
    parts.sort_by_key(|p| p.index);
    parts.into_iter().fold(
        PartialMoments {
            index: 0,
            count: 0,
            mean: 0.0,
            m2: 0.0,
        },
        PartialMoments::combine,
    )
}

fn check_confidence(confidence: f64) -> Result<()> {
    if confidence > 0.0 && confidence < 1.0 {
        Ok(())
    } else {
        Err(LabError::InvalidParameter {
            name: "confidence",
            value: confidence,
            reason: "must lie strictly inside (0, 1)",
        })
    }
}

/// Estimates the mean of `samples`.
pub fn estimate_from_samples(samples: &[f64], method: Method, confidence: f64) -> Result<EstimateWithCI> {
    check_confidence(confidence)?;
    if samples.len() < 2 {
        return Err(LabError::TooFewSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    let est = match method {
        Method::Clt => clt(samples, confidence),
        Method::MedianOfMeans => median_of_means(samples, confidence),
    };
    if est.is_finite() {
        Ok(est)
    } else {
        Err(LabError::NonFiniteEstimate)
    }
}

fn clt(samples: &[f64], confidence: f64) -> EstimateWithCI {
    let parts = samples
        .chunks(CHUNK_LEN)
        .enumerate()
        .map(|(i, c)| PartialMoments::from_slice(i, c))
        .collect();
    let m = merge_partials(parts);
    let n = m.count as f64;
    let var = m.m2 / (n - 1.0);
    let se = if var > 0.0 { (var / n).sqrt() } else { 0.0 };
    EstimateWithCI {
        mean: m.mean,
        half_width: z_quantile(confidence) * se,
        std_error: se,
        n: m.count,
        confidence,
        method: EstimatorKind::Clt,
    }
}

fn block_means(samples: &[f64], k: usize) -> Vec<f64> {
    let n = samples.len();
    (0..k)
        .map(|i| {
            let (lo, hi) = (i * n / k, (i + 1) * n / k);
            let block = &samples[lo..hi];
            merge_partials(
                block
                    .chunks(CHUNK_LEN)
                    .enumerate()
                    .map(|(j, c)| PartialMoments::from_slice(j, c))
                    .collect(),
            )
            .mean
        })
        .collect()
}

/// Index `j` (0-based) of the widest-inward order statistic pair
/// `(m_(j), m_(k-1-j))` that still covers the median of the block-mean law
/// with probability at least `confidence`.
fn order_statistic_rank(k: usize, confidence: f64) -> usize {
    let bin = Binomial::new(0.5, k as u64).expect("valid binomial");
    let mut j = 0;
    while j + 1 < k / 2 {
        // The median lies in [m_(i), m_(k-1-i)] with probability 1 - 2 P(Bin <= i).
        let coverage = 1.0 - 2.0 * bin.cdf((j + 1) as u64);
        if coverage < confidence {
            break;
        }
        j += 1;
    }
    j
}

fn median_of_means(samples: &[f64], confidence: f64) -> EstimateWithCI {
    let k = mom_block_count(confidence, samples.len());
    let mut means = block_means(samples, k);
    let spread = {
        let parts = vec![PartialMoments::from_slice(0, &means)];
        let m = merge_partials(parts);
        if k > 1 {
            (m.m2 / (k as f64 - 1.0) / k as f64).sqrt()
        } else {
            0.0
        }
    };
    means.sort_by(f64::total_cmp);
    let median = means[k / 2];
    let j = order_statistic_rank(k, confidence);
    let half_width = (median - means[j]).max(means[k - 1 - j] - median);
    EstimateWithCI {
        mean: median,
        half_width,
        std_error: spread,
        n: samples.len(),
        confidence,
        method: EstimatorKind::MedianOfMeans { blocks: k },
    }
}

/// Draws `n` samples from `stream` (see [`sample_batch`]) and estimates
/// their mean.
pub fn estimate_mean<F>(
    sampler: F,
    n: usize,
    method: Method,
    stream: RngStream,
    confidence: f64,
) -> Result<EstimateWithCI>
where
    F: Fn(&mut crate::rng::LabRng) -> f64 + Sync,
{
    if n < MIN_SAMPLES {
        return Err(LabError::TooFewSamples {
            needed: MIN_SAMPLES,
            got: n,
        });
    }
    let xs = sample_batch(stream, n, sampler);
    estimate_from_samples(&xs, method, confidence)
}

/// Families of sampled quantities, used to decide between the estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawTag {
    /// `A^p` with `P(A >= a) = b/(a+b)`: second moment finite iff `2p < 1`.
    StoppedSup,
    /// Bounded quantities (truncated suprema, exit-model extrema).
    Bounded,
    /// Quantities with Gaussian-type tails (suprema over a fixed horizon).
    LightTailed,
}

impl FromStr for LawTag {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stopped-sup" => Ok(LawTag::StoppedSup),
            "bounded" => Ok(LawTag::Bounded),
            "light-tailed" => Ok(LawTag::LightTailed),
            other => Err(LabError::UnknownLaw(other.to_string())),
        }
    }
}

pub fn select_estimator(p: Exponent, law: LawTag) -> Method {
    match law {
        LawTag::StoppedSup if 2.0 * p.value() >= 1.0 => Method::MedianOfMeans,
        _ => Method::Clt,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn all_pass(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Pass;
        for v in verdicts {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Inconclusive => out = Verdict::Inconclusive,
                Verdict::Pass => {}
            }
        }
        out
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Comparison `lhs <= constant · rhs` of two estimated expectations.
///
/// PASS iff `lhs.mean - lhs.half_width <= constant · (rhs.mean + rhs.half_width)`,
/// so a FAIL needs the lower confidence edge of the left side to clear the
/// upper edge of the scaled right side. INCONCLUSIVE is reserved for
/// non-finite inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub lhs: EstimateWithCI,
    pub rhs: EstimateWithCI,
    pub constant: f64,
    pub lhs_lower: f64,
    pub scaled_rhs_upper: f64,
    /// `scaled_rhs_upper - lhs_lower`; nonnegative on PASS.
    pub margin: f64,
    /// `lhs.mean / rhs.mean` when the right side is nonzero.
    pub ratio: Option<f64>,
    pub verdict: Verdict,
    /// Fraction of grid paths that reached the horizon before their stopping rule fired.
    pub truncated_fraction: f64,
    pub bias_notes: Vec<String>,
}

impl InequalityReport {
    pub fn compare(lhs: EstimateWithCI, rhs: EstimateWithCI, constant: f64) -> Self {
        let lhs_lower = lhs.lower();
        let scaled_rhs_upper = constant * rhs.upper();
        let finite = lhs.is_finite() && rhs.is_finite() && constant.is_finite();
        let verdict = if !finite {
            Verdict::Inconclusive
        } else if lhs_lower <= scaled_rhs_upper {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        let ratio = (rhs.mean != 0.0 && finite).then(|| lhs.mean / rhs.mean);
        InequalityReport {
            lhs,
            rhs,
            constant,
            lhs_lower,
            scaled_rhs_upper,
            margin: scaled_rhs_upper - lhs_lower,
            ratio,
            verdict,
            truncated_fraction: 0.0,
            bias_notes: Vec::new(),
        }
    }

    pub fn with_truncation(mut self, fraction: f64) -> Self {
        self.truncated_fraction = fraction;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.bias_notes.push(note.into());
        self
    }

    /// `constant · rhs.mean`, the point value of the bound.
    pub fn bound(&self) -> f64 {
        self.constant * self.rhs.mean
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderTerm {
    pub index: usize,
    pub level: f64,
    /// `Γ_i`.
    pub rung_moment: f64,
    /// Empirical `P(B >= a_{i-1})`, an upper bound for `P(N >= i)`.
    pub reach_probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderChainReport {
    pub p: Exponent,
    pub c: f64,
    pub gamma: f64,
    pub depth: usize,
    pub barrier: f64,
    /// Estimate of `E A^p` for `A` sampled rung by rung.
    pub lhs: EstimateWithCI,
    /// `Σ_i Γ_i P̂(B >= a_{i-1})`.
    pub chain_bound: f64,
    pub terms: Vec<LadderTerm>,
    pub verdict: Verdict,
}

/// Samples `A = sup W(τ_{-b} ∧ ·)` through the ladder decomposition: rung
/// `i` is the supremum between the hits of `-a_{i-1}` and `-min(a_i, b)`,
/// stopping at the rung that reaches `-b`. Returns the estimate of `E A^p`
/// together with the ladder bound `Σ Γ_i P(B >= a_{i-1})`, where the
/// probabilities are estimated from `B = -inf` on the same runs.
pub fn estimate_ladder_chain(
    p: Exponent,
    ladder: GeometricLadder,
    barrier: f64,
    n: usize,
    stream: RngStream,
    confidence: f64,
) -> Result<LadderChainReport> {
    ensure_positive("barrier", barrier)?;
    if ladder.top() < barrier {
        return Err(LabError::LadderDepthExhausted {
            depth: ladder.depth(),
            top: ladder.top(),
            barrier,
        });
    }
    if n < MIN_SAMPLES {
        return Err(LabError::TooFewSamples {
            needed: MIN_SAMPLES,
            got: n,
        });
    }
    let pv = p.value();
    let levels = ladder.levels();
    let runs: Vec<(f64, f64)> = sample_batch(stream, n, |rng| {
        let mut sup: f64 = 0.0;
        for i in 1..levels.len() {
            let lo = levels[i - 1];
            if lo >= barrier {
                break;
            }
            let hi = levels[i].min(barrier);
            let y = sample_ladder_rung_exact(rng, lo, hi).expect("levels strictly increase");
            sup = sup.max(y);
        }
        // The exact model ends at the first hit of -b, so B = b.
        (sup, barrier)
    });

    let powered: Vec<f64> = runs.iter().map(|(a, _)| a.powf(pv)).collect();
    let lhs = estimate_from_samples(&powered, select_estimator(p, LawTag::StoppedSup), confidence)?;

    let mut terms = Vec::with_capacity(ladder.depth());
    let mut chain_bound = 0.0;
    for i in 1..=ladder.depth() {
        let prev = levels[i - 1];
        let rung_moment = ladder_moment(p, prev, levels[i])?;
        let hits = runs.iter().filter(|(_, b)| *b >= prev).count();
        let reach_probability = hits as f64 / n as f64;
        chain_bound += rung_moment * reach_probability;
        terms.push(LadderTerm {
            index: i,
            level: levels[i],
            rung_moment,
            reach_probability,
        });
    }
    let verdict = if !lhs.is_finite() || !chain_bound.is_finite() {
        Verdict::Inconclusive
    } else if lhs.lower() <= chain_bound {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(LadderChainReport {
        p,
        c: ladder.c(),
        gamma: ladder.gamma(),
        depth: ladder.depth(),
        barrier,
        lhs,
        chain_bound,
        terms,
        verdict,
    })
}
