use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pedlab::{
    cmd_prove, cmd_table, cmd_verify, ClaimSource, CliError, ProveOptions, TableFormat,
    VerificationReport, VerifyOptions,
};
use pedlab_core::dissection::ProofChain;
use pedlab_core::{Domain, Execution};

#[derive(Parser)]
#[command(
    name = "pedlab",
    version,
    about = "Verify congruences for partitions with distinct even parts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ExecArgs {
    /// Run on one thread even when built with rayon.
    #[arg(long)]
    sequential: bool,
}

impl ExecArgs {
    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Scan congruence claims against a modular ped(n) table.
    Verify {
        /// Built-in claim set: ahs, theorem1, conjecture192, all.
        #[arg(long, conflicts_with = "claims")]
        set: Option<String>,
        /// Claim file (`A B M theorem|conjecture label...` per line).
        #[arg(long)]
        claims: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        n_limit: u64,
        /// Modulus of the scan table; must be a multiple of every claim modulus.
        #[arg(long = "mod", default_value_t = 192)]
        modulus: u64,
        /// Refuse tables beyond this index.
        #[arg(long, default_value_t = 250_000)]
        max_index: u64,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Replay the identity chain behind the mod-24 congruences.
    Prove {
        #[arg(long, default_value_t = 400)]
        order: usize,
        /// n range for the oracle scan of ped(225n+178) ≡ ped(9n+7).
        #[arg(long, default_value_t = 100)]
        oracle_limit: u64,
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Write ped(0..=N), exact or modulo M.
    Table {
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        #[arg(long = "mod")]
        modulus: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::File {
            path: path.to_path_buf(),
            source,
        })
}

fn emit(report: &VerificationReport, json: Option<&Path>) -> Result<i32, CliError> {
    println!("{report}");
    if let Some(path) = json {
        let mut out = create(path)?;
        writeln!(out, "{}", report.to_json()?)?;
        out.flush()?;
    }
    Ok(report.exit_code())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Verify {
            set,
            claims,
            n_limit,
            modulus,
            max_index,
            json,
            exec,
        } => {
            let source = match (set, claims) {
                (_, Some(path)) => ClaimSource::File(path),
                (Some(name), None) => ClaimSource::Builtin(name),
                (None, None) => ClaimSource::Builtin("all".into()),
            };
            let report = cmd_verify(&VerifyOptions {
                source,
                n_limit,
                modulus,
                max_index,
                exec: exec.exec(),
            })?;
            emit(&report, json.as_deref())
        }
        Command::Prove {
            order,
            oracle_limit,
            json,
            exec,
        } => {
            let report = cmd_prove(&ProveOptions {
                chain: ProofChain {
                    order,
                    oracle_limit,
                    ..ProofChain::default()
                },
                exec: exec.exec(),
            })?;
            for w in &report.meta.warnings {
                eprintln!("warning: {w}");
            }
            emit(&report, json.as_deref())
        }
        Command::Table {
            n_max,
            modulus,
            format,
            out,
        } => {
            let domain = modulus.map_or(Domain::Exact, Domain::Modular);
            let format = match format {
                Format::Text => TableFormat::Text,
                Format::Json => TableFormat::Json,
            };
            match out {
                Some(path) => {
                    let mut w = create(&path)?;
                    cmd_table(n_max, domain, format, &mut w)?;
                    w.flush()?;
                }
                None => cmd_table(n_max, domain, format, io::stdout().lock())?,
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
