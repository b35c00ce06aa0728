//! Moment bounds for `Z = X²` with `dX = aX ds + dW`, which satisfies
//! `dZ <= ψ Z ds + dM + dH` with `ψ = 2a`, `H = x0² + t`.
//!
//! cargo run --release --example gronwall_bounds

use gronwall_lab::estimate::DEFAULT_CONFIDENCE;
use gronwall_lab::simulate::{DriftForm, GronwallScenario, PiecewiseConstant};
use gronwall_lab::verify::verify_gronwall;
use gronwall_lab::{Exponent, HolderPair, RngStream};

fn main() -> gronwall_lab::Result<()> {
    let p = Exponent::new(0.3)?;
    let pair = HolderPair::from_nu(2.0)?;
    let scenarios = [
        (
            "zero drift",
            DriftForm::Schedule {
                schedule: PiecewiseConstant::constant(0.0),
            },
        ),
        (
            "ψ = 1",
            DriftForm::Schedule {
                schedule: PiecewiseConstant::constant(0.5),
            },
        ),
        ("ψ = 2·1{X >= 0}", DriftForm::SignFeedback { rate: 1.0 }),
    ];
    for (label, drift) in scenarios {
        let scn = GronwallScenario::new(1.0, drift, 1.0, 1e-3)?.with_h_noise(0.5)?;
        let r = verify_gronwall(
            &scn,
            p,
            Some(pair),
            20_000,
            RngStream::for_name(3, label),
            DEFAULT_CONFIDENCE,
        )?;
        println!("{label}: {}", r.verdict);
        for (bound, rep) in r.reports() {
            println!(
                "  {bound:<13} lhs {:.4} ± {:.4}  bound {:.4}  ratio {:.3}  {}",
                rep.lhs.mean,
                rep.lhs.half_width,
                rep.bound(),
                rep.ratio.unwrap_or(f64::NAN),
                rep.verdict
            );
        }
    }
    Ok(())
}
