use std::process::exit;

use clap::error::ErrorKind;
use clap::Parser;

use gle_cli::{run, Cli, EXIT_USAGE};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            // clap routes help to stdout and errors to stderr.
            let _ = err.print();
            exit(code);
        }
    };
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            exit(outcome.exit);
        }
        Err(err) => {
            eprintln!("{err}");
            exit(err.exit_code());
        }
    }
}
