//! `gmt`: validate invariant tables, run both solvers, and check the
//! correction-term expansion and its generating-function form.

mod commands;
mod keyspec;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Output;

#[derive(Parser, Debug)]
#[command(name = "gmt", version, about = "Exact checks for multi-point virtual structure constants")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Treat missing table entries as zero instead of failing.
    #[arg(long, global = true)]
    assume_missing_zero: bool,

    /// Expected N; tables with another N are rejected.
    #[arg(long = "N", global = true)]
    n: Option<u32>,

    /// Expected k; tables with another k are rejected.
    #[arg(long = "k", global = true)]
    k: Option<u32>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a table file for format, canonical keys and selection rules.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Compare each W value with its correction-term expansion.
    VerifyTheorem {
        #[arg(long)]
        w: PathBuf,
        #[arg(long)]
        gw: PathBuf,
        #[command(flatten)]
        keys: KeyArgs,
    },
    /// Solve for GW invariants from a W table.
    GwFromW {
        #[arg(long)]
        w: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Build W values from GW invariants and b = 0 mirror data.
    WFromGw {
        #[arg(long)]
        gw: PathBuf,
        #[arg(long)]
        mirror_data: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Compare the composed GW two-point function with the W generating function.
    VerifyConjecture {
        #[arg(long, required_unless_present = "selftest")]
        w: Option<PathBuf>,
        #[arg(long, required_unless_present = "selftest")]
        gw: Option<PathBuf>,
        /// First boundary exponent.
        #[arg(long, requires = "b", conflicts_with = "all")]
        a: Option<u32>,
        /// Second boundary exponent.
        #[arg(long, requires = "a")]
        b: Option<u32>,
        /// Check every pair a >= b.
        #[arg(long)]
        all: bool,
        #[arg(long = "dmax", required_unless_present = "selftest")]
        d_max: Option<u32>,
        #[arg(long = "nmax", required_unless_present = "selftest")]
        n_max: Option<u32>,
        /// Run seeded random consistent tables instead of files.
        #[arg(long, conflicts_with_all = ["w", "gw", "a", "all"])]
        selftest: bool,
        #[arg(long, default_value_t = 1, requires = "selftest")]
        seed: u64,
        #[arg(long, default_value_t = 100, requires = "selftest")]
        trials: usize,
    },
    /// Dimension counts of the correction patterns of one key.
    Predict {
        /// Key as "a,b|c1,c2,...|d".
        #[arg(long)]
        key: String,
    },
    /// Write the bundled fixture tables into a directory.
    Fixtures {
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Args, Debug)]
struct KeyArgs {
    /// Key as "a,b|c1,c2,...|d"; repeatable.
    #[arg(long = "key", required_unless_present = "all")]
    keys: Vec<String>,
    /// Every W entry of the table.
    #[arg(long, conflicts_with = "keys")]
    all: bool,
}

#[derive(Args, Debug)]
struct DomainArgs {
    /// Key as "a,b|c1,c2,...|d"; repeatable.
    #[arg(long = "key")]
    keys: Vec<String>,
    /// Every key of the input table (gw-from-w) or every key within --dmax/--nmax.
    #[arg(long, conflicts_with = "keys")]
    all: bool,
    #[arg(long = "dmax")]
    d_max: Option<u32>,
    #[arg(long = "nmax")]
    n_max: Option<u32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let result = commands::run(&cli);
    match result {
        Ok(output) => {
            emit(&output, format);
            ExitCode::from(output.code)
        }
        Err(err) => {
            let code = err.exit_code();
            match format {
                Format::Text => eprintln!("error: {err}"),
                Format::Json => {
                    let v = serde_json::json!({ "status": "error", "exit_code": code, "message": err.to_string() });
                    println!("{}", serde_json::to_string_pretty(&v).expect("json"));
                }
            }
            ExitCode::from(code)
        }
    }
}

fn emit(output: &Output, format: Format) {
    let text = match format {
        Format::Text => output.text.clone(),
        Format::Json => serde_json::to_string_pretty(&output.json).expect("json") + "\n",
    };
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}
