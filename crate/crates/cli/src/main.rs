use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use gcverify::{catalog, run_text, CHECKS};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Tree,
}

/// Exact verifier for generalized complex, Kähler, contact and Sasakian
/// structures.
///
/// Exit status: 0 when every check passes, 1 when some check fails, 2 on
/// input, usage or checker-precondition errors. The GVERIFY_THREADS
/// environment variable sets the number of worker threads.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Args {
    /// Structure file to check.
    file: Option<std::path::PathBuf>,
    /// Run only these check ids (repeatable).
    #[arg(long = "check", value_name = "ID")]
    checks: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// List the check ids with their methods and core operations.
    #[arg(long)]
    list_checks: bool,
    /// Check a built-in catalog entry instead of a file; `list` prints the names.
    #[arg(long, value_name = "NAME", conflicts_with = "file")]
    catalog: Option<String>,
    /// Print the input in canonical form instead of checking it.
    #[arg(long)]
    print: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list_checks {
        for c in CHECKS {
            let methods = if c.methods.is_empty() {
                String::new()
            } else {
                format!(" [{}]", c.methods.join("|"))
            };
            println!(
                "{}{methods}  on {}  -> {}: {}",
                c.id,
                c.kinds.join("|"),
                c.op,
                c.summary
            );
        }
        return ExitCode::SUCCESS;
    }
    let text = match (&args.catalog, &args.file) {
        (Some(name), _) if name == "list" => {
            for e in catalog::catalog() {
                println!("{}", e.name);
            }
            return ExitCode::SUCCESS;
        }
        (Some(name), _) => match catalog::lookup(name) {
            Some(e) => e.text.to_string(),
            None => {
                eprintln!("error: no catalog entry `{name}`; try `--catalog list`");
                return ExitCode::from(2);
            }
        },
        (None, Some(path)) => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        (None, None) => {
            eprintln!("error: give a structure file or --catalog <name>");
            return ExitCode::from(2);
        }
    };
    if args.print {
        return match gcverify::parse(&text) {
            Ok(f) => {
                print!("{}", gcverify::print(&f));
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        };
    }
    match run_text(&text, &args.checks) {
        Ok(report) => {
            match args.format {
                Format::Text => print!("{}", report.to_text()),
                Format::Tree => print!("{}", report.to_tree()),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
