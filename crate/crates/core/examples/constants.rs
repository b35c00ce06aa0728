//! Prints `πp/sin(πp)`, `c_p = min(4, 1/p)·πp/sin(πp)` and the optimised
//! ladder constant, and cross-checks the closed form against quadrature.
//!
//! cargo run --example constants

use gronwall_lab::analytic::{optimize_prefactor, tail_integral_oracle, DEFAULT_QUAD_TOL};
use gronwall_lab::verify::constants_table;
use gronwall_lab::Exponent;

fn main() -> gronwall_lab::Result<()> {
    let grid: Vec<Exponent> = [0.05, 0.1, 0.25, 0.5, 0.75, 0.9]
        .iter()
        .map(|&p| Exponent::new(p))
        .collect::<Result<_, _>>()?;

    println!(
        "{:>6} {:>16} {:>16} {:>16} {:>10}",
        "p", "pi_p/sin", "c_p", "improved", "gamma*"
    );
    for (row, &p) in constants_table(&grid, DEFAULT_QUAD_TOL)?.iter().zip(&grid) {
        let opt = optimize_prefactor(p, DEFAULT_QUAD_TOL)?;
        println!(
            "{:>6} {:>16.12} {:>16.12} {:>16.12} {:>10.4}",
            row.p, row.pi_p_over_sin, row.c_p, row.improved_constant, opt.gamma_star
        );
        let quad = tail_integral_oracle(p, 1e-12)?;
        assert!((quad - row.pi_p_over_sin).abs() < 1e-9 * row.pi_p_over_sin);
    }
    println!("closed form agrees with the tail-integral quadrature on every row");
    Ok(())
}
