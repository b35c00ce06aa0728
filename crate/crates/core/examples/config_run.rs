//! Runs experiments described in TOML, as `gronwall-lab run <file>` does,
//! and writes their reports to a temporary directory.
//!
//! cargo run --release --example config_run

use gronwall_lab::cli::execute;
use gronwall_lab::config::{parse_run_config, Overrides};
use gronwall_lab::report::write_outputs;

const CONFIG: &str = r#"
seed = 11
formats = ["csv", "json"]

[[experiment]]
name = "constants"
target = "constants"
p-grid = "0.1:0.9:0.1"

[[experiment]]
name = "exit-bm"
target = "prop1"
model = "exit-bm"
a = 1.0
b = 3.0
p = 0.5
n = 5000
dt = 0.001

[[experiment]]
name = "feedback"
target = "gronwall"
p = 0.25
nu = 2.0
feedback-rate = 0.5
n = 5000
"#;

fn main() -> gronwall_lab::Result<()> {
    let cfg = parse_run_config(CONFIG, &Overrides::default())?;
    let reports = execute(&cfg)?;
    let out = std::env::temp_dir().join("gronwall-lab-config-run");
    write_outputs(&out, &reports, &cfg.formats)?;
    for r in &reports {
        println!("{} {}: {}", r.verdict, r.name, r.headline);
    }
    println!("reports written to {}", out.display());
    Ok(())
}
