use std::process::ExitCode;

use clap::Parser;
use pfaff_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            for (stage, secs) in &report.timings {
                eprintln!("{stage}: {secs:.3}s");
            }
            if cli.pretty {
                print!("{}", report.to_table());
            } else {
                println!("{}", report.to_json());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
