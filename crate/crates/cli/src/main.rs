use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use jcf_cli::{
    cmd_decompose, cmd_fingerprint, cmd_generate, cmd_similar, cmd_verify, parse_hint_list,
    CliError, DecompositionDocument, MatrixDocument,
};
use jcf_core::GaussianRational;

/// Exact Jordan canonical forms and similarity tests over the Gaussian
/// rationals.
///
/// Matrix files are JSON documents: {"n": 2, "entries": [["0","1"],["0","0"]]}
/// with entries in the exact scalar grammar (`5`, `-3/7`, `1/2+1/3i`, `-1i`)
/// and an optional "eigenvalue_hints" list.
///
/// Exit codes: 0 success / similar / valid, 1 not similar / invalid,
/// 2 parse error, 3 eigenvalue hints required, 4 invalid hint.
#[derive(Parser)]
#[command(name = "jcf", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Jordan decomposition A*P = P*J of a matrix file.
    Decompose {
        file: PathBuf,
        /// Comma-separated eigenvalues, overriding hints in the document.
        #[arg(long)]
        hints: Option<String>,
    },
    /// Decide whether two matrices are similar; prints both fingerprints
    /// and, when similar, an invertible S with B*S = S*A.
    Similar {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Comma-separated eigenvalue candidates for the pair.
        #[arg(long)]
        hints: Option<String>,
    },
    /// Print the eigenvalue -> rank-sequence fingerprint of a matrix file.
    Fingerprint {
        file: PathBuf,
        /// Comma-separated eigenvalues, overriding hints in the document.
        #[arg(long)]
        hints: Option<String>,
    },
    /// Generate a matrix with a known block structure, e.g.
    /// --spec "2:2,1;3:1" for blocks [2,1] at 2 and [1] at 3.
    Generate {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        seed: u64,
    },
    /// Re-check a decomposition document against a matrix file.
    Verify {
        matrix: PathBuf,
        decomposition: PathBuf,
    },
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("cannot parse {}: {e}", path.display())))
}

fn hints_arg(hints: &Option<String>) -> Result<Option<Vec<GaussianRational>>, CliError> {
    hints.as_deref().map(parse_hint_list).transpose()
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("documents serialize")
    );
}

fn run() -> Result<ExitCode, CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Decompose { file, hints } => {
            let doc: MatrixDocument = read_json(&file)?;
            let hints = hints_arg(&hints)?;
            let out = cmd_decompose(&doc, hints.as_deref())?;
            print_json(&out);
            Ok(ExitCode::SUCCESS)
        }
        Command::Similar {
            file_a,
            file_b,
            hints,
        } => {
            let a: MatrixDocument = read_json(&file_a)?;
            let b: MatrixDocument = read_json(&file_b)?;
            let hints = hints_arg(&hints)?;
            let out = cmd_similar(&a, &b, hints.as_deref())?;
            print_json(&out);
            Ok(if out.similar {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Fingerprint { file, hints } => {
            let doc: MatrixDocument = read_json(&file)?;
            let hints = hints_arg(&hints)?;
            let out = cmd_fingerprint(&doc, hints.as_deref())?;
            print_json(&out);
            Ok(ExitCode::SUCCESS)
        }
        Command::Generate { spec, seed } => {
            let out = cmd_generate(&spec, seed)?;
            print_json(&out);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            matrix,
            decomposition,
        } => {
            let m: MatrixDocument = read_json(&matrix)?;
            let d: DecompositionDocument = read_json(&decomposition)?;
            let out = cmd_verify(&m, &d)?;
            print_json(&out);
            Ok(if out.valid {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
