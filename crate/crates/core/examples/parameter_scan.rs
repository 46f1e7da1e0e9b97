//! Scans the Lyapunov exponent over a small parameter window, forms its
//! Laplacian density and traces the locus where one word has a fixed trace.
//! Writes `chi_grid.csv` and `loci.csv`.

use std::fs::File;

use projlab::autoform::standard_form;
use projlab::bifurcation::{grid_holonomies, laplacian_density, scan_with, trace_locus, write_loci_csv, GridSpec, ScanParams, SliceFamily};
use projlab::moebius::c64;

fn main() -> projlab::Result<()> {
    let form = standard_form();
    let spec = GridSpec::centered(c64(0.0, 0.0), 0.5, 11);
    let reps = grid_holonomies(&form, &spec);
    let params = ScanParams { t: 40.0, n_paths: 40, dt: 0.01, seed: 1, burn_in: 10.0 };
    let grid = scan_with(&form.group, &spec, &reps, &params)?;
    let density = laplacian_density(&grid);
    let peak = density.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    println!("chi at 0: {:.4}, at 2.5: {:.4}", grid.value_at(5, 5).unwrap_or(f64::NAN), grid.value_at(10, 5).unwrap_or(f64::NAN));
    println!("largest density value {peak:.4}, max parabolic residual {:.1e}", grid.max_parabolic_residual());
    grid.write_csv(File::create("chi_grid.csv")?)?;

    let family = SliceFamily::new(form.clone());
    let word = form.group.element(&"AB".parse()?);
    let locus = trace_locus(&family, &spec, &word, c64(4.0, 0.0))?;
    println!("tr² ρ(AB) = 4 at {} points in the window", locus.points.len());
    write_loci_csv(&[locus], File::create("loci.csv")?)?;
    println!("wrote chi_grid.csv and loci.csv");
    Ok(())
}
