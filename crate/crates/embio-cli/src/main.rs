use clap::Parser;

use embio_cli::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        // Single machine-parsable line; the chain keeps the error code
        // (e.g. "TruncatedFile: ...") from the failing layer.
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
