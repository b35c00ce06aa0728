//! Adaptive Simpson quadrature on compact intervals.
//!
//! Each panel is accepted once the difference between the one-panel and the
//! two-half-panel Simpson estimates is at most `15 * tol_panel`; the accepted
//! value carries the Richardson correction `(S2 - S1) / 15`. The panel
//! tolerance is halved on every split so the panel errors sum to at most
//! `tol`.

use crate::error::{LabError, Result};

/// Hard limit on recursion depth. Panels narrower than `(b - a) / 2^MAX_DEPTH`
/// are never split further.
const MAX_DEPTH: u32 = 60;

/// Default budget on integrand evaluations per call.
pub const DEFAULT_MAX_EVALUATIONS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Sum of the per-panel error estimates `|S2 - S1| / 15`.
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

/// Integrates `f` over `[a, b]` to absolute accuracy `tol`.
///
/// Fails with [`LabError::QuadratureBudget`] when the evaluation budget runs
/// out or a panel cannot be refined any further while still over tolerance.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    adaptive_simpson_with_budget(f, a, b, tol, DEFAULT_MAX_EVALUATIONS)
}

pub fn adaptive_simpson_with_budget<F>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_evaluations: usize,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(LabError::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "must be finite and > 0",
        });
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(LabError::InvalidParameter {
            name: "b",
            value: b,
            reason: "interval must be finite with a < b",
        });
    }

    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let mut evaluations = 3;
    let mut stack = vec![Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole: simpson(a, b, fa, fm, fb),
        tol,
        depth: 0,
    }];

    let mut value = 0.0;
    let mut error_estimate = 0.0;
    let mut unresolved = 0.0;

    while let Some(panel) = stack.pop() {
        let m = 0.5 * (panel.a + panel.b);
        let lm = 0.5 * (panel.a + m);
        let rm = 0.5 * (m + panel.b);
        let (flm, frm) = (f(lm), f(rm));
        evaluations += 2;

        let left = simpson(panel.a, m, panel.fa, flm, panel.fm);
        let right = simpson(m, panel.b, panel.fm, frm, panel.fb);
        let halves = left + right;
        let diff = halves - panel.whole;

        if !halves.is_finite() {
            return Err(LabError::NonFiniteEstimate);
        }

        if diff.abs() <= 15.0 * panel.tol || panel.depth >= MAX_DEPTH {
            if diff.abs() > 15.0 * panel.tol {
                unresolved += diff.abs() / 15.0;
            }
            value += halves + diff / 15.0;
            error_estimate += diff.abs() / 15.0;
            continue;
        }

        if evaluations >= max_evaluations {
            return Err(LabError::QuadratureBudget {
                tol,
                estimate: error_estimate + diff.abs() / 15.0,
                evaluations,
            });
        }

        let half_tol = 0.5 * panel.tol;
        stack.push(Panel {
            a: m,
            b: panel.b,
            fa: panel.fm,
            fm: frm,
            fb: panel.fb,
            whole: right,
            tol: half_tol,
            depth: panel.depth + 1,
        });
        stack.push(Panel {
            a: panel.a,
            b: m,
            fa: panel.fa,
            fm: flm,
            fb: panel.fm,
            whole: left,
            tol: half_tol,
            depth: panel.depth + 1,
        });
    }

    if unresolved > tol {
        return Err(LabError::QuadratureBudget {
            tol,
            estimate: error_estimate,
            evaluations,
        });
    }

    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations,
    })
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}
