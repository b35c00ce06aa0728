//! Estimates the extremal ratio `E sup^p / E(-inf)^p` for Brownian motion
//! stopped at `-1` and shows how far `c_p` sits above it.
//!
//! cargo run --release --example sharpness

use gronwall_lab::estimate::DEFAULT_CONFIDENCE;
use gronwall_lab::verify::sharpness_ratio;
use gronwall_lab::{Exponent, RngStream};

fn main() -> gronwall_lab::Result<()> {
    for p in [0.1, 0.25, 0.5, 0.6] {
        let p = Exponent::new(p)?;
        let r = sharpness_ratio(p, 1_000_000, RngStream::new(5, 0), DEFAULT_CONFIDENCE)?;
        println!(
            "p = {:<5} ratio {:.5} ± {:.5} ({:?})  truth {:.5}  c_p {:.5}  gap {}  {}",
            p.value(),
            r.ratio.mean,
            r.ratio.half_width,
            r.ratio.method,
            r.ratio_truth,
            r.c_p,
            r.gap_factor,
            r.verdict
        );
    }
    Ok(())
}
