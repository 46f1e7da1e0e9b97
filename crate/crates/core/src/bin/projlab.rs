use clap::Parser;

fn main() {
    let args = projlab::cli::Args::parse();
    std::process::exit(projlab::cli::run(&args));
}
