//! One hyperbolic Brownian path on the punctured torus, reduced into the
//! fundamental domain as it runs, written to `brownian_path.csv`.

use std::fs::File;
use std::io::BufWriter;

use projlab::brownian::{run_from, RunOptions};
use projlab::fuchsian::punctured_torus_group;

fn main() -> projlab::Result<()> {
    let g = punctured_torus_group();
    let path = run_from(&g, g.base_point, 50.0, 0.01, 42, 0, RunOptions { stride: 10 })?;
    let end = path.points.last().expect("path has an endpoint");
    println!("{} stored points, endpoint {end:?}", path.points.len());
    println!("deck word length {}, displacement {:.2}", path.deck.word.len(), path.deck.translation_length());
    path.write_csv(BufWriter::new(File::create("brownian_path.csv")?))?;
    println!("wrote brownian_path.csv");
    Ok(())
}
