use clap::Parser;
use mcb_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("mcb: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
