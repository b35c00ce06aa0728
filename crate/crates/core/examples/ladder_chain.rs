//! Splits the stopped supremum along the levels `c·γ^k` and compares
//! `E A^p` with the ladder sum `Σ Γ_i P(B >= a_{i-1})`.
//!
//! cargo run --release --example ladder_chain

use gronwall_lab::estimate::{estimate_ladder_chain, DEFAULT_CONFIDENCE};
use gronwall_lab::{Exponent, GeometricLadder, RngStream};

fn main() -> gronwall_lab::Result<()> {
    for (p, gamma) in [(0.25, 1.5), (0.25, 16.0), (0.5, 4.0)] {
        let p = Exponent::new(p)?;
        let ladder = GeometricLadder::reaching(0.1, gamma, 1.0)?;
        let r = estimate_ladder_chain(p, ladder, 1.0, 100_000, RngStream::new(4, 0), DEFAULT_CONFIDENCE)?;
        println!(
            "p = {} γ = {gamma}: E A^p = {:.4} ± {:.4} <= {:.4} over {} rungs  {}",
            p.value(),
            r.lhs.mean,
            r.lhs.half_width,
            r.chain_bound,
            r.depth,
            r.verdict
        );
        for t in &r.terms {
            println!(
                "    rung {:>2} level {:>8.4}  Γ = {:.4}  P(reach) = {:.4}",
                t.index, t.level, t.rung_moment, t.reach_probability
            );
        }
    }
    Ok(())
}
