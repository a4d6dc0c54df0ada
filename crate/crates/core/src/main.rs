use clap::Parser;

use omcert::cli::{run, Cli, RunConfig, EXIT_USAGE};

fn main() {
    let cli = Cli::parse();
    let config = match RunConfig::from_cli(cli) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("omcert: {e}");
            eprintln!("Run `omcert --help` for usage.");
            std::process::exit(EXIT_USAGE);
        }
    };
    let code = run(
        &config,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
