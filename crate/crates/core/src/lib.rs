//! Numerical laboratory for the moments of suprema of continuous local
//! martingales and for a stochastic Gronwall lemma with `p`-th moments,
//! `0 < p < 1`.
//!
//! The crate is organised bottom-up:
//!
//! * [`analytic`] – closed-form constants (`πp/sin(πp)`, the sup/inf constant
//!   `c_p`, ladder moments, counterexample formulas, Gronwall bound
//!   coefficients) together with a quadrature oracle and a scalar optimizer.
//! * [`rng`] – reproducible, splittable random streams.
//! * [`simulate`] – exact inverse-CDF samplers and Euler paths for the
//!   martingale models and the Gronwall scenarios.
//! * [`estimate`] – Monte-Carlo means with confidence intervals (CLT and
//!   median-of-means) and the inequality verdict rule.
//! * [`verify`] – named experiments that wire the three layers together.
//! * [`config`], [`report`], [`cli`] – experiment configs, CSV/JSON reports
//!   and the command-line front end used by the `gronwall-lab` binary.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

pub mod analytic;
pub mod cli;
pub mod config;
pub mod error;
pub mod estimate;
pub mod optimize;
pub mod quadrature;
pub mod report;
pub mod rng;
pub mod simulate;
pub mod verify;

pub use analytic::{Exponent, GeometricLadder, HolderPair};
pub use error::{LabError, Result};
pub use estimate::{EstimateWithCI, InequalityReport, Method, Verdict};
pub use rng::RngStream;
