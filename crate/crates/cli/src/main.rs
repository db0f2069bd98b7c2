use clap::Parser;
use qloci_cli::{exit, run, Cli, JobConfig, GUARD_ENV};

fn main() {
    let cli = Cli::parse();
    let env = std::env::var(GUARD_ENV).ok();
    let result = JobConfig::from_cli(&cli, env.as_deref()).and_then(|job| run(&job));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.output);
            if let Some(why) = &outcome.failure {
                eprintln!("error: {why}");
            }
            std::process::exit(outcome.exit_code());
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.exit_code();
            debug_assert_ne!(code, exit::SUCCESS);
            std::process::exit(code);
        }
    }
}
