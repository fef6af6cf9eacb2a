use clap::Parser;
use privamp_cli::target::{run_target, ReferenceCli};

fn main() {
    std::process::exit(run_target(ReferenceCli::parse().target, None));
}
