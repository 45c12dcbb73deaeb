use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use hodgecalc_cli::{exit, render, run, selftest, InputError};

#[derive(Parser)]
#[command(
    name = "hodgecalc",
    version,
    about = "Exact cohomology of blow-ups, projective bundles and double complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the spaces of a script and answer its queries.
    Run {
        file: PathBuf,
        /// Also write the JSON report here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the built-in acceptance suite.
    Selftest {
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check the Gysin polynomial identities for 1 <= r <= N.
    PolyCheck {
        #[arg(long, default_value_t = 8)]
        max_r: usize,
    },
    /// Row, column, Bott-Chern and Aeppli cohomology of a double complex file.
    BcAeppli {
        file: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError::at(path.display(), e))
}

fn emit_json(target: &Option<PathBuf>, json: &str) -> anyhow::Result<()> {
    match target {
        None => Ok(()),
        Some(p) if p.as_os_str() == "-" => {
            print!("{json}");
            Ok(())
        }
        Some(p) => fs::write(p, json).with_context(|| format!("writing {}", p.display())),
    }
}

fn code(passed: bool) -> ExitCode {
    ExitCode::from(if passed { exit::PASS } else { exit::VERIFICATION_FAILED })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<ExitCode, InputError> = (|| {
        Ok(match cli.command {
            Command::Run { file, json } => {
                let report = run::run_text(&file.display().to_string(), &read(&file)?)?;
                if json.as_deref() != Some(Path::new("-")) {
                    print!("{}", render::text(&report));
                }
                emit_json(&json, &report.to_json()).map_err(|e| InputError(format!("{e:#}")))?;
                code(report.passed)
            }
            Command::Selftest { json } => {
                let report = selftest::run();
                if json.as_deref() != Some(Path::new("-")) {
                    print!("{}", selftest::text(&report));
                }
                let text = serde_json::to_string_pretty(&report).expect("serializes") + "\n";
                emit_json(&json, &text).map_err(|e| InputError(format!("{e:#}")))?;
                code(report.passed)
            }
            Command::PolyCheck { max_r } => {
                let script = hodgecalc_cli::Script {
                    version: 1,
                    mode: None,
                    spaces: Default::default(),
                    queries: vec![hodgecalc_cli::script::Query::PolyCheck { max_r }],
                };
                let report = run::run_script(&script)?;
                print!("{}", render::text(&report));
                code(report.passed)
            }
            Command::BcAeppli { file, json } => {
                let source = file.display().to_string();
                let k = run::parse_complex(&source, &read(&file)?)?;
                let data = run::bc_aeppli_data(&k);
                if json.as_deref() != Some(Path::new("-")) {
                    for key in ["dims", "row", "column", "bott_chern", "aeppli", "total"] {
                        let cells: Vec<String> = data[key]
                            .as_object()
                            .map(|m| {
                                m.iter()
                                    .map(|(k, v)| format!("{k}:{}", v.as_str().unwrap_or("")))
                                    .collect()
                            })
                            .unwrap_or_default();
                        println!(
                            "{key:<10} {}",
                            if cells.is_empty() {
                                "0".to_string()
                            } else {
                                cells.join(" ")
                            }
                        );
                    }
                }
                let text = serde_json::to_string_pretty(&serde_json::json!({ "version": 1, "complex": data }))
                    .expect("serializes")
                    + "\n";
                emit_json(&json, &text).map_err(|e| InputError(format!("{e:#}")))?;
                ExitCode::from(exit::PASS)
            }
        })
    })();
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(exit::INPUT_ERROR)
    })
}
