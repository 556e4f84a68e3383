use clap::Parser;
use sno_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    std::process::exit(sno_cli::run(cli));
}
