use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use firefighter_cli::{error_report, run, write_output, Cli, Command, Output};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", error_report("usage", e.to_string().trim(), None));
            return ExitCode::from(2);
        }
    };
    let cmd = &cli.command;
    let result = run(cmd).and_then(|out| {
        // `gen --out` writes the graph there itself; its summary goes to stdout.
        let target = match cmd {
            Command::Gen(_) => None,
            _ => cmd.common().out.as_deref(),
        };
        match out {
            Output::Json(v) => {
                let body = serde_json::to_string_pretty(&v).expect("reports serialize") + "\n";
                write_output(target, &body)
            }
            Output::Text(t) => write_output(target, &t),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_report(e.kind(), &e.to_string(), Some(cmd)));
            ExitCode::from(1)
        }
    }
}
