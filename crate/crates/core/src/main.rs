use clap::Parser;

fn main() {
    let cli = glinf::cli::Cli::parse();
    std::process::exit(glinf::cli::run(cli));
}
