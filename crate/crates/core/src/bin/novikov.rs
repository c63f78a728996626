use clap::Parser;
use novikov_core::cli::{run, Cli};

fn main() {
    let outcome = run(&Cli::parse());
    if outcome.report.starts_with("error:") {
        eprint!("{}", outcome.report);
    } else {
        print!("{}", outcome.report);
    }
    std::process::exit(outcome.exit as i32);
}
