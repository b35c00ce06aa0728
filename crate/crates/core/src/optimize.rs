//! Golden-section search for one-dimensional minimisation.

use crate::error::{LabError, Result};

/// `(3 - sqrt 5) / 2`, the fraction of the bracket occupied by the inner
/// point nearest to each end.
const INV_GOLDEN_SQ: f64 = 0.381_966_011_250_105_1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Minimises a unimodal `f` over `[lo, hi]` until the bracket is narrower than
/// `xtol`. The endpoints are evaluated too, so a boundary minimum is returned
/// exactly when it beats every interior probe.
pub fn golden_section<F>(f: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> Minimum
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let f_lo = f(a);
    let f_hi = f(b);

    let mut c = a + INV_GOLDEN_SQ * (b - a);
    let mut d = b - INV_GOLDEN_SQ * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;

    while (b - a).abs() > xtol && iterations < max_iter {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = a + INV_GOLDEN_SQ * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = b - INV_GOLDEN_SQ * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }

    let mut best = if fc <= fd {
        Minimum {
            x: c,
            value: fc,
            iterations,
        }
    } else {
        Minimum {
            x: d,
            value: fd,
            iterations,
        }
    };
    if f_lo < best.value {
        best = Minimum {
            x: lo.min(hi),
            value: f_lo,
            iterations,
        };
    }
    if f_hi < best.value {
        best = Minimum {
            x: lo.max(hi),
            value: f_hi,
            iterations,
        };
    }
    best
}

/// Grows `hi` geometrically (by `factor`) from `start` until `f` turns upward,
/// so that `[floor, hi]` contains a minimiser of a unimodal `f`.
pub fn expand_upper_bracket<F>(f: F, floor: f64, start: f64, factor: f64, max_expansions: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut inner = start;
    let mut f_inner = f(inner);
    for _ in 0..max_expansions {
        let outer = floor + (inner - floor) * factor;
        let f_outer = f(outer);
        if !f_outer.is_finite() {
            return Err(LabError::BracketExpansion(max_expansions));
        }
        if f_outer > f_inner {
            return Ok(outer);
        }
        inner = outer;
        f_inner = f_outer;
    }
    Err(LabError::BracketExpansion(max_expansions))
}
