use clap::Parser;

use qdybe::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let code = match cli.into_config() {
        Ok(cfg) => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            run(&cfg, &mut out)
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}
