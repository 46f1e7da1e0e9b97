//! Compares the Lyapunov exponent with `1/2 + 2π δ` for one deformed
//! structure, the relation tying the exponent to the degree density.

use projlab::cli::{verify_formula, ExperimentConfig};
use projlab::devmap::ProjectiveStructure;
use projlab::moebius::c64;

fn main() -> projlab::Result<()> {
    let cfg = ExperimentConfig::from_toml("c = [3.0, 0.0]\nT = 200.0\nn = 200\ndt = 0.01\nR = 6.0\ncenters = 2\n")?;
    let s = ProjectiveStructure::standard(c64(3.0, 0.0));
    let report = verify_formula(&s, &cfg)?;
    println!("chi       {}", report["chi"]["value"]);
    println!("predicted {}", report["predicted"]);
    println!("gap {} vs 3σ = {}", report["gap"], 3.0 * report["combined_stderr"].as_f64().unwrap_or(f64::NAN));
    println!("pass {}", report["pass"]);
    Ok(())
}
