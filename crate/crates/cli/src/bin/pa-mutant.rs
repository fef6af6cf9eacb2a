use clap::Parser;
use privamp_cli::target::{run_target, MutantCli};

fn main() {
    let cli = MutantCli::parse();
    std::process::exit(run_target(cli.target, Some(cli.mutant)));
}
