use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use comment_lens_cli::args::Cli;
use comment_lens_cli::commands::run;
use comment_lens_cli::error::{classify, describe, error_line, Failure};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", error_line(Failure::Usage, first.trim_start_matches("error: ")));
            return ExitCode::from(Failure::Usage as u8);
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .init();
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("{}", error_line(Failure::Usage, "--jobs must be at least 1"));
            return ExitCode::from(Failure::Usage as u8);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{}", error_line(Failure::Data, &e.to_string()));
            return ExitCode::from(Failure::Data as u8);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let failure = classify(&e);
            eprintln!("{}", error_line(failure, &describe(&e)));
            ExitCode::from(failure as u8)
        }
    }
}
