use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dgw_cli::report::sha256_hex;
use dgw_cli::{exit, parse_document, run, verify_report, RunOptions};

#[derive(Parser)]
#[command(
    name = "dgw",
    version,
    about = "Check resolutions, Morita data and exceptional collections of finite-dimensional DG algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Given,
    Reversed,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks of a document.
    Run {
        file: PathBuf,
        /// Ext degrees -N..=N are examined where support is not known to be finite.
        #[arg(long, default_value_t = 10)]
        window: i32,
        /// Resolution depth bound.
        #[arg(long, default_value_t = 24)]
        depth: usize,
        /// Resolution size bound in cells.
        #[arg(long, default_value_t = 2000)]
        size: usize,
        /// Only run tasks with these kinds or names.
        #[arg(long, value_delimiter = ',')]
        task: Vec<String>,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Format of standard output.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Order of object lists in exceptional-collection tasks.
        #[arg(long, value_enum, default_value_t = Order::Given)]
        order: Order,
    },
    /// Re-check a report without rerunning its tasks.
    Verify { report: PathBuf },
    /// Parse a document and print it in canonical form.
    Print { file: PathBuf },
}

fn read(path: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("dgw: cannot read {}: {e}", path.display());
        ExitCode::from(exit::INPUT_ERROR as u8)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run {
            file,
            window,
            depth,
            size,
            task,
            report,
            format,
            seed,
            order,
        } => {
            let text = match read(&file) {
                Ok(t) => t,
                Err(c) => return c,
            };
            let ws = match parse_document(&text) {
                Ok(ws) => ws,
                Err(e) => {
                    eprintln!("dgw: {}: {e}", file.display());
                    return ExitCode::from(exit::INPUT_ERROR as u8);
                }
            };
            let options = RunOptions {
                window,
                depth,
                size,
                seed,
                reversed: matches!(order, Order::Reversed),
            };
            let r = run(&ws, &sha256_hex(text.as_bytes()), &task, &options);
            if let Some(path) = report {
                if let Err(e) = std::fs::write(&path, r.to_json()) {
                    eprintln!("dgw: cannot write {}: {e}", path.display());
                    return ExitCode::from(exit::INPUT_ERROR as u8);
                }
            }
            match format {
                Format::Json => print!("{}", r.to_json()),
                Format::Text => print!("{}", r.to_text()),
            }
            r.summary.exit
        }
        Command::Verify { report } => {
            let text = match read(&report) {
                Ok(t) => t,
                Err(c) => return c,
            };
            match verify_report(&text) {
                Ok(v) => {
                    for n in &v.notes {
                        println!("{n}");
                    }
                    println!("verified; exit {}", v.exit);
                    v.exit
                }
                Err(e) => {
                    eprintln!("dgw: {e}");
                    exit::INPUT_ERROR
                }
            }
        }
        Command::Print { file } => {
            let text = match read(&file) {
                Ok(t) => t,
                Err(c) => return c,
            };
            match parse_document(&text) {
                Ok(ws) => {
                    print!("{}", ws.to_text());
                    exit::PASS
                }
                Err(e) => {
                    eprintln!("dgw: {}: {e}", file.display());
                    exit::INPUT_ERROR
                }
            }
        }
    };
    ExitCode::from(code as u8)
}
