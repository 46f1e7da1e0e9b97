//! Counts preimages of a few points under the developing map inside growing
//! hyperbolic balls and turns the counts into a degree estimate.

use projlab::devmap::ProjectiveStructure;
use projlab::estimators::{default_centers, default_targets, degree_estimate};
use projlab::moebius::c64;

fn main() -> projlab::Result<()> {
    let s = ProjectiveStructure::standard(c64(3.0, 0.0));
    let centers = &default_centers()[..1];
    let profile = s.circles(centers[0], &[2.0, 4.0, 6.0], &default_targets())?;
    for circle in &profile.circles {
        println!("radius {:.1}: preimage counts {:?}", circle.radius, circle.counts);
    }
    let delta = degree_estimate(&s, 6.0, centers, &default_targets())?;
    println!("degree density at R = 6: {:.4} ± {:.4}", delta.value, delta.stderr);
    Ok(())
}
