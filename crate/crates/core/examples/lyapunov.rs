//! Lyapunov exponent of the holonomy along Brownian paths, cross-checked
//! against the shell-slope estimator over a geodesic ball of group elements.

use projlab::devmap::ProjectiveStructure;
use projlab::estimators::{lyapunov_ball_slope, lyapunov_brownian};
use projlab::moebius::c64;

fn main() -> projlab::Result<()> {
    for c in [c64(0.0, 0.0), c64(2.0, 0.0)] {
        let s = ProjectiveStructure::standard(c);
        let rep = s.holonomy()?;
        let chi = lyapunov_brownian(&rep, s.group(), 200.0, 200, 0.01, 1)?;
        let ball = lyapunov_ball_slope(&rep, s.group(), 12.0, 2000, 1)?;
        println!("c = {c}: Brownian {:.4} ± {:.4}, ball slope {:.4} ± {:.4}", chi.value, chi.stderr, ball.value, ball.stderr);
    }
    Ok(())
}
