//! Draws from the exact law of the supremum of Brownian motion stopped at
//! `-b` and from a ladder rung, and compares with the closed forms.
//!
//! cargo run --example exact_samplers

use gronwall_lab::analytic::{ladder_moment, StoppedSupLaw};
use gronwall_lab::rng::sample_batch;
use gronwall_lab::simulate::{sample_ladder_rung_exact, sample_stopped_sup_exact};
use gronwall_lab::{Exponent, RngStream};

fn main() -> gronwall_lab::Result<()> {
    let n = 200_000;
    let b = 2.0;
    let law = StoppedSupLaw::new(b)?;
    let sups = sample_batch(RngStream::new(1, 0), n, |rng| sample_stopped_sup_exact(rng, b));

    println!("sup of W stopped at -{b}: P(A <= a) = a/(a+b)");
    for a in [0.5, 2.0, 8.0, 50.0] {
        let empirical = sups.iter().filter(|&&x| x <= a).count() as f64 / n as f64;
        println!("  a = {a:>5}: empirical {empirical:.4}  exact {:.4}", law.cdf(a));
    }

    let p = Exponent::new(0.4)?;
    let (a_prev, a_cur) = (1.0, 3.0);
    let rungs = sample_batch(RngStream::new(1, 1), n, |rng| {
        sample_ladder_rung_exact(rng, a_prev, a_cur).expect("valid levels")
    });
    let atom = rungs.iter().filter(|&&y| y == 0.0).count() as f64 / n as f64;
    let moment = rungs.iter().map(|y| y.powf(p.value())).sum::<f64>() / n as f64;
    println!("rung between -{a_prev} and -{a_cur}:");
    println!("  mass at 0: {atom:.4} (exact {:.4})", a_prev / a_cur);
    println!(
        "  E Y^p:     {moment:.4} (exact {:.4})",
        ladder_moment(p, a_prev, a_cur)?
    );
    Ok(())
}
