use clap::Parser;
use spinmix::cli::{self, Cli};

fn main() {
    let args = Cli::parse();
    if let Some(jobs) = args.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            std::process::exit(cli::EXIT_USAGE);
        }
    }
    if let Err(e) = cli::run(&args) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
