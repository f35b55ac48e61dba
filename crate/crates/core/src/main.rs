use clap::Parser;

fn main() {
    let cli = pleat::cli::Cli::parse();
    std::process::exit(pleat::cli::run(cli));
}
