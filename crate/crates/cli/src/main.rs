use clap::Parser;
use sbgen::{run, Cli};

fn main() {
    let code = run(
        Cli::parse(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
