//! At `p = 1` the stopped supremum has infinite mean: the truncated mean
//! `E(sup ∧ K)` keeps growing like `ln(1 + K)`.
//!
//! cargo run --release --example divergence

use gronwall_lab::estimate::DEFAULT_CONFIDENCE;
use gronwall_lab::verify::divergence_demo;
use gronwall_lab::RngStream;

fn main() -> gronwall_lab::Result<()> {
    let ks: Vec<f64> = (1..=6).map(|j| (j as f64).exp() - 1.0).collect();
    let r = divergence_demo(&ks, 1_000_000, RngStream::new(9, 0), DEFAULT_CONFIDENCE)?;
    for row in &r.rows {
        println!(
            "K = {:>9.3}  E(sup ∧ K) = {:.4} ± {:.4}  ln(1+K) = {:.4}",
            row.k, row.estimate.mean, row.estimate.half_width, row.analytic
        );
    }
    println!("strictly increasing: {}  verdict: {}", r.strictly_increasing, r.verdict);
    Ok(())
}
