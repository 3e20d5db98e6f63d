use clap::Parser;
use zeta_arclen_cli::cli::Cli;

fn main() {
    let result = Cli::parse().into_config().and_then(zeta_arclen_cli::run);
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
