use std::process::ExitCode;

use clap::Parser;

use colorcode_cli::config::schema;
use colorcode_cli::{resolve, run, Cli, CliError, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if matches!(cli.command, Command::Schema) {
        println!("{}", serde_json::to_string_pretty(&schema()).expect("schema serializes"));
        return ExitCode::SUCCESS;
    }
    match execute(&cli) {
        Ok(ok) => {
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let cfg = resolve(cli)?;
    cfg.check().map_err(CliError::Config)?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Runtime(e.into()))?;
    }
    let out = run(&cfg)?;
    match &cfg.output.path {
        Some(path) => std::fs::write(path, &out.body)
            .map_err(|e| CliError::Runtime(anyhow::anyhow!("writing {}: {e}", path.display())))?,
        None => print!("{}", out.body),
    }
    Ok(out.ok)
}
