//! A martingale with one jump breaks the inequality for every constant
//! once the comparison exponent drops below 1.
//!
//! cargo run --example jump_scan

use gronwall_lab::verify::jump_necessity_scan;
use gronwall_lab::Exponent;

fn main() -> gronwall_lab::Result<()> {
    let deltas: Vec<f64> = (1..=10).map(|k| 1.0 - 10f64.powi(-k)).collect();
    let r = jump_necessity_scan(Exponent::new(0.5)?, &[0.25, 0.5, 0.9, 1.0, 1.5, 3.0], &deltas)?;
    for s in &r.summaries {
        println!(
            "q = {:<5} sup over grid {:>14.4} at δ = {:<14} {:?}",
            s.q, s.grid_sup, s.argmax_delta, s.trend
        );
    }
    println!("all q >= 1 bounded by 1: {}", r.verdict);
    Ok(())
}
