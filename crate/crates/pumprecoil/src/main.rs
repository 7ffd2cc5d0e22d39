use clap::Parser;
use pumprecoil::cli::Cli;

fn main() {
    let cli = Cli::parse();
    std::process::exit(pumprecoil::commands::execute(cli));
}
