use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qcorr::cli::{self, RunReport, Role, DEFAULT_SEEDS, EXIT_USAGE};
use qcorr::codes::Family;
use qcorr::pauli::NoiseSpec;
use qcorr::state::DEFAULT_TOL;
use qcorr::Result;

#[derive(Parser)]
#[command(name = "qcorr", version, about = "Codes for fully correlated Pauli noise")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Odd,
    Even,
}

#[derive(Clone, Copy, ValueEnum)]
enum RoleArg {
    Encode,
    Recover,
}

#[derive(Args)]
struct CodeArgs {
    /// Number of physical qubits.
    #[arg(long)]
    n: usize,
    /// Code family; defaults to the parity of n.
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
}

impl CodeArgs {
    fn family(&self) -> Family {
        match self.family {
            Some(FamilyArg::Odd) => Family::Odd,
            Some(FamilyArg::Even) => Family::Even,
            None => Family::for_n(self.n),
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Write the JSON report (or the matrix, for `build`) to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build R (odd n) or V (even n) and check it.
    Build {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Encode random states, apply the channel, decode, and check.
    Verify {
        #[command(flatten)]
        code: CodeArgs,
        /// Probabilities p0,p1,p2,p3 of I, X_n, Y_n, Z_n.
        #[arg(long, value_delimiter = ',', default_values_t = [0.4, 0.3, 0.2, 0.1])]
        p: Vec<f64>,
        /// Allow zero probabilities.
        #[arg(long)]
        relaxed: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SEEDS)]
        seeds: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rank-k numerical range of A + iB for a pair of correlated Paulis.
    Nrange {
        /// Operator pair, e.g. XY.
        #[arg(long, default_value = "XY")]
        pair: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit and verify an encoding or recovery circuit.
    Circuit {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_enum, default_value = "encode")]
        role: RoleArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Knill-Laflamme check of the code against {I, X_n, Y_n, Z_n}.
    Kl {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn run(command: Command) -> Result<(RunReport, OutputArgs, bool)> {
    Ok(match command {
        Command::Build { code, tol, output } => {
            let report = cli::cmd_build(code.family(), code.n, output.out.as_deref(), tol)?;
            (report, output, true)
        }
        Command::Verify {
            code,
            p,
            relaxed,
            seed,
            seeds,
            tol,
            output,
        } => {
            let probs: [f64; 4] = p.try_into().map_err(|_| qcorr::Error::InvalidNoise("expected 4 probabilities".into()))?;
            let spec = NoiseSpec::with_mode(probs, relaxed)?;
            (cli::cmd_verify(code.family(), code.n, &spec, seeds, seed, tol)?, output, false)
        }
        Command::Nrange { pair, n, k, output } => {
            let (a, b) = cli::parse_pair(&pair)?;
            (cli::cmd_nrange(a, b, n, k)?, output, false)
        }
        Command::Circuit { code, role, output } => {
            let role = match role {
                RoleArg::Encode => Role::Encode,
                RoleArg::Recover => Role::Recover,
            };
            (cli::cmd_circuit(code.family(), code.n, role)?, output, false)
        }
        Command::Kl { code, tol, output } => (cli::cmd_kl(code.family(), code.n, tol)?, output, false),
    })
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let (report, output, out_is_matrix) = match run(args.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    if let (Some(path), false) = (&output.out, out_is_matrix) {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    let mut stdout = std::io::stdout().lock();
    let _ = if output.json {
        writeln!(stdout, "{}", report.to_json())
    } else {
        let circuit = report.outputs.get("circuit").and_then(|v| v.as_str()).unwrap_or("");
        write!(stdout, "{}{circuit}", report.to_text())
    };
    ExitCode::from(report.exit_code() as u8)
}
