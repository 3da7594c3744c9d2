use clap::Parser;

use snumlab::cli::{self, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    std::process::exit(cli::run(&cfg));
}
