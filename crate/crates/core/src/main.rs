use clap::Parser;

fn main() {
    std::process::exit(weakphase::harness::run(weakphase::harness::Cli::parse()));
}
