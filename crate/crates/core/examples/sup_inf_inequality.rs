//! Checks `E sup M^p <= c_p E(-inf M)^p` on the three built-in martingales.
//!
//! cargo run --release --example sup_inf_inequality

use gronwall_lab::estimate::DEFAULT_CONFIDENCE;
use gronwall_lab::simulate::{MartingaleModel, PiecewiseConstant};
use gronwall_lab::verify::verify_sup_inf;
use gronwall_lab::{Exponent, RngStream};

fn main() -> gronwall_lab::Result<()> {
    let dt = 1e-3;
    let sigma = PiecewiseConstant::new(vec![0.0, 0.5], vec![1.0, 2.0])?;
    let models = [
        ("stopped at -1", MartingaleModel::stopped_bm(1.0, 1e3, dt)?),
        ("exit of (-1, 2)", MartingaleModel::exit_bm(1.0, 2.0, dt)?),
        ("∫σ dW, σ = 1 then 2", MartingaleModel::sigma_integral(sigma, 1.0, dt)?),
    ];
    for (label, model) in &models {
        for p in [0.25, 0.75] {
            let p = Exponent::new(p)?;
            let stream = RngStream::for_name(2024, label);
            let r = verify_sup_inf(model, p, 20_000, stream, DEFAULT_CONFIDENCE)?;
            println!(
                "{label:<22} p = {:<4} lhs {:.4} ± {:.4}  c_p·rhs {:.4}  ratio {:.3}  {}",
                p.value(),
                r.lhs.mean,
                r.lhs.half_width,
                r.bound(),
                r.ratio.unwrap_or(f64::NAN),
                r.verdict
            );
            for note in &r.bias_notes {
                println!("{:>24}note: {note}", "");
            }
        }
    }
    Ok(())
}
