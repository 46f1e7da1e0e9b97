//! Samples the harmonic measure on the sphere seen from the base point,
//! tests it against the Poisson kernel in the Fuchsian case, and estimates
//! the correlation dimension for a deformed structure.

use std::f64::consts::PI;

use projlab::devmap::ProjectiveStructure;
use projlab::estimators::{dimension_estimate, poisson_angle, sample_harmonic};
use projlab::moebius::c64;
use projlab::stats::ks_one_sample;

fn main() -> projlab::Result<()> {
    let fuchsian = ProjectiveStructure::standard(c64(0.0, 0.0));
    let g = fuchsian.group().clone();
    let h = sample_harmonic(&fuchsian.holonomy()?, &g, g.base_point, 30.0, 2000, 0.01, 3)?;
    let angles: Vec<f64> = h.points.iter().map(|p| poisson_angle(p, g.base_point)).collect();
    let ks = ks_one_sample(&angles, |a| (a + PI) / (2.0 * PI));
    println!("c = 0: KS distance to the Poisson law {ks:.4}, median log gap {:.1}", h.median_log_gap);

    let deformed = ProjectiveStructure::standard(c64(3.0, 0.0));
    let h = sample_harmonic(&deformed.holonomy()?, &g, g.base_point, 30.0, 2000, 0.01, 3)?;
    let dim = dimension_estimate(&h)?;
    println!("c = 3: correlation dimension {:.3} ± {:.3}", dim.value, dim.stderr);
    Ok(())
}
