use std::process::ExitCode;

use clap::Parser;
use spincalc_cli::report::render_table;
use spincalc_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too and exit 0.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let pretty = cli.pretty;
    match run(cli) {
        Ok(report) => {
            if pretty {
                print!("{}", render_table(&report));
            } else {
                println!("{}", serde_json::to_string_pretty(&report).expect("reports are plain JSON"));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
