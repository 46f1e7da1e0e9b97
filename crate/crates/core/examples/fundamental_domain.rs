//! Dirichlet domain of the punctured-torus group, orbit counts in hyperbolic
//! balls and reduction of a far-away point back into the domain.

use std::f64::consts::PI;

use projlab::fuchsian::punctured_torus_group;
use projlab::moebius::{ball_volume, c64, HalfPlanePoint};

fn main() -> projlab::Result<()> {
    let g = punctured_torus_group();
    println!("base point {:?}, {} sides", g.base_point, g.domain_faces.len());
    for f in &g.domain_faces {
        println!("  side {:>5}  distance {:.4}  ideal vertex {}", f.pairing.word, f.distance, f.touches_cusp);
    }

    // The orbit of the base point fills a ball at rate vol(B_R) / area(domain).
    for r in [4.0, 6.0, 8.0] {
        let n = g.enumerate_ball(r)?.len();
        println!("R = {r}: {n} elements, area prediction {:.0}", ball_volume(r) / (2.0 * PI));
    }

    let classes = g.primitive_classes(4.0)?;
    println!("{} primitive conjugacy classes with translation length ≤ 4", classes.len());

    let far = HalfPlanePoint::new(c64(3.7, 0.004))?;
    let (reduced, deck) = g.reduce(far)?;
    println!("{far:?} reduces to {reduced:?} with deck word {}", deck.word);
    Ok(())
}
