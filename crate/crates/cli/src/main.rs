use clap::Parser;
use privamp_cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
