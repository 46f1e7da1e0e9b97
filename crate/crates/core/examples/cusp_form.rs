//! The weight-four cusp form of the punctured-torus group: values along a
//! horizontal line and its automorphy factor under a few group elements.

use projlab::autoform::standard_form;
use projlab::fuchsian::Word;
use projlab::moebius::{c64, HalfPlanePoint};

fn main() -> projlab::Result<()> {
    let form = standard_form();
    for k in 0..5 {
        let tau = c64(-0.5 + 0.25 * k as f64, 1.0);
        println!("q0({tau}) = {:.6}", form.q0(tau));
    }

    let tau = c64(0.13, 0.87);
    for text in ["A", "B", "ABab", "AAb"] {
        let m = form.group.evaluate(&text.parse::<Word>()?);
        let image = m.apply_half_plane(HalfPlanePoint(tau)).0;
        let ratio = form.q0(image) / (form.q0(tau) * (m.c * tau + m.d).powi(4));
        println!("{text:>5}: q0(γτ) / ((cτ + d)^4 q0(τ)) = {ratio:.12}");
    }
    Ok(())
}
