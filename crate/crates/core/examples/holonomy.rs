//! Holonomy of the projective structure with Schwarzian `c·q0` for a few
//! parameters: generator traces, the parabolic commutator, and the
//! equivariance of the developing map.

use projlab::devmap::ProjectiveStructure;
use projlab::fuchsian::Letter;
use projlab::moebius::{c64, HalfPlanePoint};

fn main() -> projlab::Result<()> {
    let tau = HalfPlanePoint::new(c64(0.2, 1.4))?;
    for c in [c64(0.0, 0.0), c64(1.0, 0.5), c64(3.0, 0.0), c64(6.0, 0.0)] {
        let s = ProjectiveStructure::standard(c);
        let rep = s.holonomy()?;
        let residual = (rep.commutator().trace_sq() - 4.0).norm();
        let d = s.dev(tau)?;
        let mut worst: f64 = 0.0;
        for l in Letter::ALL {
            let moved = s.dev(s.group().letter_matrix(l).apply_half_plane(tau))?;
            worst = worst.max(moved.chordal(&rep.letter(l).apply(d)));
        }
        println!(
            "c = {c}: tr ρ(A) = {:.5}, tr ρ(B) = {:.5}, |tr² ρ([A,B]) − 4| = {residual:.1e}, equivariance error {worst:.1e}",
            rep.rho_a.trace(),
            rep.rho_b.trace()
        );
    }
    Ok(())
}
