//! Closed-form quantities.
//!
//! Everything here is a pure function of its arguments. The central objects
//! are the factor `πp / sin(πp)`, which is the `p`-th moment of the supremum
//! of Brownian motion stopped at `-1`, and the constant
//! `c_p = min(4, 1/p) · πp / sin(πp)` bounding `E sup M^p` by
//! `E (-inf M)^p` for continuous local martingales `M` started at zero.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_nonnegative, ensure_positive, LabError, Result};
use crate::optimize::{expand_upper_bracket, golden_section};
use crate::quadrature::adaptive_simpson;

/// Default absolute tolerance for the quadrature oracles.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

const HOLDER_REL_TOL: f64 = 1e-12;

/// A moment exponent strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Exponent(f64);

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 0.0 && p < 1.0 {
            Ok(Exponent(p))
        } else {
            Err(LabError::InvalidExponent(p))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// The exponent `p * nu` used by the Hölder-split bound.
    pub fn scaled(self, pair: HolderPair) -> Result<Exponent> {
        let pn = self.0 * pair.nu();
        if pn < 1.0 {
            Exponent::new(pn)
        } else {
            Err(LabError::HolderExponentTooLarge(pn))
        }
    }
}

impl TryFrom<f64> for Exponent {
    type Error = LabError;
    fn try_from(p: f64) -> Result<Self> {
        Exponent::new(p)
    }
}

impl From<Exponent> for f64 {
    fn from(p: Exponent) -> f64 {
        p.0
    }
}

/// Conjugate exponents `1/mu + 1/nu = 1`, both `> 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderPair {
    mu: f64,
    nu: f64,
}

impl HolderPair {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        let ok = mu.is_finite()
            && nu.is_finite()
            && mu > 1.0
            && nu > 1.0
            && ((1.0 / mu + 1.0 / nu) - 1.0).abs() <= HOLDER_REL_TOL;
        if ok {
            Ok(HolderPair { mu, nu })
        } else {
            Err(LabError::InvalidHolderPair { mu, nu })
        }
    }

    /// Builds the pair from `nu` alone, `mu = nu / (nu - 1)`.
    pub fn from_nu(nu: f64) -> Result<Self> {
        HolderPair::new(nu / (nu - 1.0), nu)
    }

    pub fn from_mu(mu: f64) -> Result<Self> {
        HolderPair::new(mu, mu / (mu - 1.0))
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

/// Levels `a_i = c * gamma^i` for `i = 1..=depth`, with `a_0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricLadder {
    c: f64,
    gamma: f64,
    depth: usize,
}

impl GeometricLadder {
    pub fn new(c: f64, gamma: f64, depth: usize) -> Result<Self> {
        ensure_positive("c", c)?;
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(LabError::InvalidParameter {
                name: "gamma",
                value: gamma,
                reason: "must be > 1",
            });
        }
        if depth == 0 {
            return Err(LabError::InvalidParameter {
                name: "depth",
                value: 0.0,
                reason: "must be positive",
            });
        }
        Ok(GeometricLadder { c, gamma, depth })
    }

    /// Smallest ladder whose top level reaches `barrier`.
    pub fn reaching(c: f64, gamma: f64, barrier: f64) -> Result<Self> {
        let probe = GeometricLadder::new(c, gamma, 1)?;
        ensure_positive("barrier", barrier)?;
        let mut depth = 1;
        while probe.c * probe.gamma.powi(depth as i32) < barrier {
            depth += 1;
        }
        GeometricLadder::new(c, gamma, depth)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `a_i`; `level(0) == 0`.
    pub fn level(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.c * self.gamma.powi(i as i32)
        }
    }

    pub fn top(&self) -> f64 {
        self.level(self.depth)
    }

    /// `a_0, a_1, ..., a_depth`.
    pub fn levels(&self) -> Vec<f64> {
        (0..=self.depth).map(|i| self.level(i)).collect()
    }
}

/// `πp / sin(πp)`.
///
/// Uses `sin(π(1-p))` for `p > 1/2`, which keeps full relative accuracy as
/// `p -> 1`. The value is at least 1 and strictly increasing in `p`.
pub fn pi_p_over_sin(p: Exponent) -> f64 {
    let p = p.value();
    let s = if p > 0.5 {
        (PI * (1.0 - p)).sin()
    } else {
        (PI * p).sin()
    };
    PI * p / s
}

/// Quadrature evaluation of `∫_0^∞ dy / (1 + y^{1/p})`, which equals
/// `πp / sin(πp)`.
///
/// With `y = t^p` the integral becomes `∫_0^∞ p t^{p-1} / (1 + t) dt`. The
/// piece on `[0, 1]` is mapped back by `u = t^p`, the piece on `[1, ∞)` by
/// `t = 1/s` followed by `s = v^{1/(1-p)}`, which leaves two bounded
/// integrands on `[0, 1]`:
///
/// ```text
///   ∫_0^1 du / (1 + u^{1/p})  +  p/(1-p) ∫_0^1 dv / (1 + v^{1/(1-p)})
/// ```
pub fn tail_integral_oracle(p: Exponent, tol: f64) -> Result<f64> {
    ensure_positive("tol", tol)?;
    let p = p.value();
    let head_exp = 1.0 / p;
    let tail_exp = 1.0 / (1.0 - p);
    let tail_scale = p / (1.0 - p);

    let head = adaptive_simpson(|u| 1.0 / (1.0 + u.powf(head_exp)), 0.0, 1.0, 0.5 * tol)?;
    let tail = adaptive_simpson(|v| 1.0 / (1.0 + v.powf(tail_exp)), 0.0, 1.0, 0.5 * tol / tail_scale)?;
    Ok(head.value + tail_scale * tail.value)
}

/// The sup/inf constant `c_p = min(4, 1/p) · πp / sin(πp)`.
pub fn burkholder_constant(p: Exponent) -> f64 {
    regime_factor(p) * pi_p_over_sin(p)
}

/// `min(4, 1/p)`, the gap between `c_p` and the extremal ratio `πp/sin(πp)`.
pub fn regime_factor(p: Exponent) -> f64 {
    (1.0 / p.value()).min(4.0)
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > 1.0 {
        Ok(())
    } else {
        Err(LabError::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "must be > 1",
        })
    }
}

/// `γ^{2p} / (γ^p - 1)`, minimised at `γ^p = 2` with value 4.
pub fn gamma_objective(gamma: f64, p: Exponent) -> Result<f64> {
    check_gamma(gamma)?;
    let gp = gamma.powf(p.value());
    Ok(gp * gp / (gp - 1.0))
}

/// `(1 - 1/γ) γ^{2p} / (γ^p - 1)`, the coefficient of `E B^p` in the ladder
/// bound. Tends to `1/p` as `γ -> 1+`.
pub fn gamma_prefactor(gamma: f64, p: Exponent) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(prefactor_log(gamma.ln(), p.value()))
}

/// The prefactor as a function of `x = ln γ >= 0`, continuous at `x = 0`.
fn prefactor_log(x: f64, p: f64) -> f64 {
    if x <= 0.0 {
        return 1.0 / p;
    }
    // (1 - e^{-x}) e^{2px} / (e^{px} - 1)
    -(-x).exp_m1() * (2.0 * p * x).exp() / (p * x).exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizedPrefactor {
    /// Minimising ratio. `1.0` means the infimum is the `γ -> 1+` limit `1/p`.
    pub gamma_star: f64,
    pub value: f64,
}

impl OptimizedPrefactor {
    /// `πp/sin(πp) · value`, the sharpened counterpart of `c_p`.
    pub fn improved_constant(&self, p: Exponent) -> f64 {
        pi_p_over_sin(p) * self.value
    }
}

/// Minimises [`gamma_prefactor`] over `γ > 1`.
///
/// The search runs in `x = ln γ` on `[0, x_hi]`. The upper end starts at
/// `ln 2 / p` (where the relaxed objective attains 4) and grows by a factor
/// 4 until the prefactor turns upward.
pub fn optimize_prefactor(p: Exponent, tol: f64) -> Result<OptimizedPrefactor> {
    ensure_positive("tol", tol)?;
    let pv = p.value();
    let f = |x: f64| prefactor_log(x, pv);
    let seed = std::f64::consts::LN_2 / pv;
    let hi = expand_upper_bracket(f, 0.0, seed, 4.0, 64)?;
    let xtol = (tol * 1e-3).max(1e-14 * hi);
    let best = golden_section(f, 0.0, hi, xtol, 10_000);
    Ok(OptimizedPrefactor {
        gamma_star: best.x.exp(),
        value: best.value,
    })
}

/// `Γ = E (Y ∨ 0)^p = (a_cur - a_prev) a_cur^{p-1} πp/sin(πp)` for the
/// supremum `Y` of Brownian motion between its first hits of `-a_prev` and
/// `-a_cur`.
pub fn ladder_moment(p: Exponent, a_prev: f64, a_cur: f64) -> Result<f64> {
    check_levels(a_prev, a_cur)?;
    Ok((a_cur - a_prev) * a_cur.powf(p.value() - 1.0) * pi_p_over_sin(p))
}

pub(crate) fn check_levels(a_prev: f64, a_cur: f64) -> Result<()> {
    ensure_nonnegative("a_prev", a_prev)?;
    if !(a_cur.is_finite() && a_cur > a_prev) {
        return Err(LabError::InvalidParameter {
            name: "a_cur",
            value: a_cur,
            reason: "must be finite and strictly greater than a_prev",
        });
    }
    Ok(())
}

/// Law of `A = sup_t W(τ_{-b} ∧ t)`: `P(A >= a) = b / (a + b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppedSupLaw {
    b: f64,
}

impl StoppedSupLaw {
    pub fn new(b: f64) -> Result<Self> {
        Ok(StoppedSupLaw {
            b: ensure_positive("b", b)?,
        })
    }

    pub fn barrier(&self) -> f64 {
        self.b
    }

    pub fn tail(&self, a: f64) -> f64 {
        if a <= 0.0 {
            1.0
        } else {
            self.b / (a + self.b)
        }
    }

    pub fn cdf(&self, a: f64) -> f64 {
        1.0 - self.tail(a)
    }

    /// `E A^p = b^p πp/sin(πp)`; infinite for `p >= 1`.
    pub fn moment(&self, p: Exponent) -> f64 {
        self.b.powf(p.value()) * pi_p_over_sin(p)
    }

    /// `E (A ∧ K)^q = ∫_0^K q a^{q-1} b/(a+b) da`, valid for every `q > 0`.
    ///
    /// Integrated in `u = a^q`, i.e. `∫_0^{K^q} b / (u^{1/q} + b) du`.
    pub fn truncated_moment(&self, q: f64, k: f64, tol: f64) -> Result<f64> {
        ensure_positive("q", q)?;
        ensure_positive("K", k)?;
        ensure_positive("tol", tol)?;
        let b = self.b;
        let upper = k.powf(q);
        let inv_q = 1.0 / q;
        let r = adaptive_simpson(|u| b / (u.powf(inv_q) + b), 0.0, upper, tol)?;
        Ok(r.value)
    }

    /// Closed form of the `q = 1` truncated moment, `b ln(1 + K/b)`.
    pub fn truncated_mean(&self, k: f64) -> f64 {
        self.b * (k / self.b).ln_1p()
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(LabError::InvalidParameter {
            name: "delta",
            value: delta,
            reason: "must lie strictly inside (0, 1)",
        })
    }
}

/// `(E sup^p)^{1/p} / (E (-inf)^q)^{1/q}` for the single-jump martingale
/// that jumps by `+1` with probability `δ` and by `-δ/(1-δ)` otherwise:
/// `δ^{1/p - 1} (1-δ)^{(q-1)/q}`.
pub fn jump_counterexample_ratio(delta: f64, p: Exponent, q: f64) -> Result<f64> {
    check_delta(delta)?;
    ensure_positive("q", q)?;
    let p = p.value();
    let log_ratio = (1.0 / p - 1.0) * delta.ln() + (q - 1.0) / q * (-delta).ln_1p();
    Ok(log_ratio.exp())
}

/// Hölder-split bound for a possibly random rate `ψ`:
/// `(c_{pν} + 1)^{1/ν} (E e^{pμ∫ψ})^{1/μ} (E (H*)^{pν})^{1/ν}`.
pub fn bound_holder_split(p: Exponent, pair: HolderPair, exp_moment: f64, hstar_moment: f64) -> Result<f64> {
    let pnu = p.scaled(pair)?;
    ensure_positive("exp_moment", exp_moment)?;
    ensure_nonnegative("hstar_moment", hstar_moment)?;
    Ok(holder_split_coefficient(pnu, pair) * exp_moment.powf(1.0 / pair.mu()) * hstar_moment.powf(1.0 / pair.nu()))
}

/// `(c_{pν} + 1)^{1/ν}`.
pub fn holder_split_coefficient(pnu: Exponent, pair: HolderPair) -> f64 {
    (burkholder_constant(pnu) + 1.0).powf(1.0 / pair.nu())
}

/// Bound on `E sup Z^p` for deterministic `ψ`:
/// `(c_p + 1) exp(p ∫ψ) E (H*)^p`.
pub fn bound_deterministic_rate(p: Exponent, psi_integral: f64, hstar_p_moment: f64) -> Result<f64> {
    ensure_nonnegative("psi_integral", psi_integral)?;
    ensure_nonnegative("hstar_p_moment", hstar_p_moment)?;
    Ok((burkholder_constant(p) + 1.0) * (p.value() * psi_integral).exp() * hstar_p_moment)
}

/// Bound on `E Z(t)` for deterministic `ψ`: `exp(∫ψ) E H*(t)`.
pub fn bound_mean(psi_integral: f64, hstar_mean: f64) -> Result<f64> {
    ensure_nonnegative("psi_integral", psi_integral)?;
    ensure_nonnegative("hstar_mean", hstar_mean)?;
    Ok(psi_integral.exp() * hstar_mean)
}

/// The 99-point grid `0.01, 0.02, ..., 0.99`.
pub fn percent_grid() -> Vec<Exponent> {
    (1..=99).map(|i| Exponent(i as f64 / 100.0)).collect()
}
