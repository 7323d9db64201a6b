use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bimax_cli::{execute, CliError};

#[derive(Parser)]
#[command(name = "bimax", version, about = "Run bilinear multiplier experiments from a JSON config")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment in a config file.
    Run {
        config: PathBuf,
        /// `key.path=value`; numeric parts index arrays. Repeatable.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Output directory (default: the config's `output_dir`, else `out/<name>`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads, 0 = all cores.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()) as u8)
}

fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let Command::Run { config, overrides, out, threads, seed } = cli.command;
    let result = (|| {
        let text = std::fs::read_to_string(&config)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config.display())))?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
        pool.install(|| execute(&text, &overrides, seed, out.as_deref(), rayon::current_num_threads()))
    })();
    match result {
        Ok((code, report)) => {
            for e in &report.experiments {
                println!("{} {} ({})", if e.verdict { "PASS" } else { "FAIL" }, e.name, e.kind);
                for c in e.checks.iter().filter(|c| !c.pass) {
                    println!("    {}: {:e} {} {:e}", c.name, c.value, c.relation, c.threshold);
                }
                for w in &e.warnings {
                    println!("    warning: {w}");
                }
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
