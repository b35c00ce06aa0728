//! `A^p` for the stopped supremum has infinite variance once `p >= 1/2`.
//! The CLT interval is then unreliable and median-of-means is used instead.
//!
//! cargo run --release --example heavy_tail_estimation

use gronwall_lab::analytic::pi_p_over_sin;
use gronwall_lab::estimate::{estimate_mean, select_estimator, LawTag, DEFAULT_CONFIDENCE};
use gronwall_lab::simulate::sample_stopped_sup_exact;
use gronwall_lab::{Exponent, Method, RngStream};

fn main() -> gronwall_lab::Result<()> {
    let p = Exponent::new(0.6)?;
    let truth = pi_p_over_sin(p);
    println!(
        "p = 0.6, E A^p = {truth:.5}; chosen estimator {:?}",
        select_estimator(p, LawTag::StoppedSup)
    );
    for method in [Method::Clt, Method::MedianOfMeans] {
        let mut covered = 0;
        let seeds = 20;
        for seed in 0..seeds {
            let e = estimate_mean(
                |rng| sample_stopped_sup_exact(rng, 1.0).powf(p.value()),
                200_000,
                method,
                RngStream::new(seed, 0),
                DEFAULT_CONFIDENCE,
            )?;
            covered += e.covers(truth) as usize;
            if seed < 3 {
                println!("  {method:?} seed {seed}: {:.5} ± {:.5}", e.mean, e.half_width);
            }
        }
        println!("  {method:?}: interval covered the truth for {covered}/{seeds} seeds");
    }
    Ok(())
}
