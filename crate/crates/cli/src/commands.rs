use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use quasimap_gmt::excess::excess_report;
use quasimap_gmt::gmt::{solve_gw_from_w, solve_w_from_gw, verify_identity, IdentityReport, KeyDomain};
use quasimap_gmt::invariants::{load_table, render_table, store_table};
use quasimap_gmt::selftest::run_selftest;
use quasimap_gmt::series::{verify_conjecture, ConjectureReport, Truncation};
use quasimap_gmt::{fixtures, scalar, Context, Error, InvariantTable, MissingPolicy, TableKind, WKey};

use crate::keyspec::parse_key;
use crate::{Cli, Command, DomainArgs, KeyArgs};

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if !e.is_validation() => EXIT_IO,
            _ => EXIT_VALIDATION,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

/// A finished command: text and JSON renderings of the same report.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

type Run = Result<Output, CliError>;

pub fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Validate { input } => validate(cli, input),
        Command::VerifyTheorem { w, gw, keys } => verify_theorem(cli, w, gw, keys),
        Command::GwFromW { w, output, domain } => gw_from_w(cli, w, output.as_deref(), domain),
        Command::WFromGw {
            gw,
            mirror_data,
            output,
            domain,
        } => w_from_gw(cli, gw, mirror_data, output.as_deref(), domain),
        Command::VerifyConjecture {
            w,
            gw,
            a,
            b,
            all,
            d_max,
            n_max,
            selftest,
            seed,
            trials,
        } => {
            if *selftest {
                return conjecture_selftest(*seed, *trials);
            }
            let (Some(w), Some(gw), Some(d_max), Some(n_max)) = (w, gw, d_max, n_max) else {
                return Err(CliError::Usage("--w, --gw, --dmax and --nmax are required".into()));
            };
            let pair = match (a, b) {
                (Some(a), Some(b)) => Some((*a, *b)),
                _ if *all => None,
                _ => return Err(CliError::Usage("give --a and --b, or --all".into())),
            };
            verify_conjecture_files(cli, w, gw, pair, Truncation::new(*d_max, *n_max))
        }
        Command::Predict { key } => predict(cli, key),
        Command::Fixtures { output } => write_fixtures(output),
    }
}

fn load(cli: &Cli, path: &Path, kind: TableKind) -> Result<InvariantTable, CliError> {
    let table = load_table(path)?;
    if table.kind() != kind {
        return Err(Error::KindMismatch {
            expected: kind.to_string(),
            found: table.kind().to_string(),
        }
        .into());
    }
    check_override(cli, table.context())?;
    Ok(if cli.assume_missing_zero {
        table.with_policy(MissingPolicy::Zero)
    } else {
        table
    })
}

fn check_override(cli: &Cli, found: Context) -> Result<(), CliError> {
    let n = cli.n.unwrap_or(found.n);
    let k = cli.k.unwrap_or(found.k);
    if (n, k) != (found.n, found.k) {
        let expected = Context::new(n, k)?;
        return Err(Error::ContextMismatch { expected, found }.into());
    }
    Ok(())
}

fn table_json(table: &InvariantTable) -> Value {
    serde_json::from_str(&render_table(table)).expect("rendered tables are JSON")
}

fn validate(cli: &Cli, input: &Path) -> Run {
    let table = load_table(input)?;
    check_override(cli, table.context())?;
    let ctx = table.context();
    let text = format!(
        "OK {}: {} table, N={} k={}, {} entries\n",
        input.display(),
        table.kind(),
        ctx.n,
        ctx.k,
        table.len()
    );
    let json = json!({
        "status": "ok",
        "file": input.display().to_string(),
        "kind": table.kind(),
        "N": ctx.n,
        "k": ctx.k,
        "entries": table.len(),
    });
    Ok(Output {
        text,
        json,
        code: EXIT_OK,
    })
}

fn keys_from(context: Context, specs: &[String]) -> Result<Vec<WKey>, CliError> {
    specs
        .iter()
        .map(|s| parse_key(context, s).map_err(CliError::Usage))
        .collect()
}

#[derive(Serialize)]
struct TheoremSummary<'a> {
    reports: &'a [IdentityReport],
    passed: usize,
    failed: usize,
    pass: bool,
}

fn verify_theorem(cli: &Cli, w_path: &Path, gw_path: &Path, keys: &KeyArgs) -> Run {
    let w = load(cli, w_path, TableKind::W)?;
    let gw = load(cli, gw_path, TableKind::Gw)?;
    let keys = if keys.all {
        w.w_entries().map(|(k, _)| k.clone()).collect()
    } else {
        keys_from(w.context(), &keys.keys)?
    };
    let reports = keys
        .iter()
        .map(|k| verify_identity(k, &gw, &w))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().filter(|r| r.equal).count();
    let failed = reports.len() - passed;
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.to_string());
        if !r.equal {
            writeln!(text, "  difference lhs - rhs = {}", scalar::format(&(&r.lhs - &r.rhs))).unwrap();
        }
    }
    writeln!(text, "{passed} passed, {failed} failed").unwrap();
    let summary = TheoremSummary {
        reports: &reports,
        passed,
        failed,
        pass: failed == 0,
    };
    Ok(Output {
        text,
        json: serde_json::to_value(&summary).expect("json"),
        code: if failed == 0 { EXIT_OK } else { EXIT_MISMATCH },
    })
}

fn solved_output(table: &InvariantTable, output: Option<&Path>) -> Run {
    if let Some(path) = output {
        store_table(table, path)?;
    }
    let mut text = String::new();
    for (key, value) in table.entries() {
        writeln!(text, "{key} = {}", scalar::format(value)).unwrap();
    }
    writeln!(text, "{} entries", table.len()).unwrap();
    if let Some(path) = output {
        writeln!(text, "written to {}", path.display()).unwrap();
    }
    let json = json!({
        "table": table_json(table),
        "output": output.map(|p| p.display().to_string()),
    });
    Ok(Output {
        text,
        json,
        code: EXIT_OK,
    })
}

fn gw_from_w(cli: &Cli, w_path: &Path, output: Option<&Path>, args: &DomainArgs) -> Run {
    let w = load(cli, w_path, TableKind::W)?;
    let domain = if !args.keys.is_empty() {
        KeyDomain::from_keys(keys_from(w.context(), &args.keys)?)
    } else if args.all {
        KeyDomain::from_table(&w)
    } else if let (Some(d), Some(n)) = (args.d_max, args.n_max) {
        KeyDomain::full(w.context(), d, n)
    } else {
        return Err(CliError::Usage("give --key, --all, or --dmax with --nmax".into()));
    };
    let gw = solve_gw_from_w(&w, &domain)?;
    solved_output(&gw, output)
}

fn w_from_gw(cli: &Cli, gw_path: &Path, mirror_path: &Path, output: Option<&Path>, args: &DomainArgs) -> Run {
    let gw = load(cli, gw_path, TableKind::Gw)?;
    let mirror = load(cli, mirror_path, TableKind::W)?;
    let domain = if !args.keys.is_empty() {
        KeyDomain::from_keys(keys_from(gw.context(), &args.keys)?)
    } else if let (true, Some(d), Some(n)) = (args.all, args.d_max, args.n_max) {
        KeyDomain::full(gw.context(), d, n)
    } else {
        return Err(CliError::Usage("give --key, or --all with --dmax and --nmax".into()));
    };
    let w = solve_w_from_gw(&gw, &mirror, &domain)?;
    solved_output(&w, output)
}

#[derive(Serialize)]
struct ConjectureSummary<'a> {
    reports: &'a [ConjectureReport],
    pass: bool,
}

fn verify_conjecture_files(cli: &Cli, w_path: &Path, gw_path: &Path, pair: Option<(u32, u32)>, trunc: Truncation) -> Run {
    let w = load(cli, w_path, TableKind::W)?;
    let gw = load(cli, gw_path, TableKind::Gw)?;
    let pairs: Vec<(u32, u32)> = match pair {
        Some(p) => vec![p],
        None => {
            let top = w.context().top();
            (0..=top).flat_map(|a| (0..=a).map(move |b| (a, b))).collect()
        }
    };
    let reports = pairs
        .iter()
        .map(|&(a, b)| verify_conjecture(a, b, &gw, &w, trunc))
        .collect::<Result<Vec<_>, _>>()?;
    let pass = reports.iter().all(|r| r.pass);
    let text: String = reports.iter().map(ToString::to_string).collect();
    Ok(Output {
        text,
        json: serde_json::to_value(ConjectureSummary {
            reports: &reports,
            pass,
        })
        .expect("json"),
        code: if pass { EXIT_OK } else { EXIT_MISMATCH },
    })
}

fn conjecture_selftest(seed: u64, trials: usize) -> Run {
    let report = run_selftest(seed, trials)?;
    Ok(Output {
        text: report.to_string(),
        json: serde_json::to_value(&report).expect("json"),
        code: if report.pass { EXIT_OK } else { EXIT_MISMATCH },
    })
}

fn predict(cli: &Cli, key: &str) -> Run {
    let (Some(n), Some(k)) = (cli.n, cli.k) else {
        return Err(CliError::Usage("predict needs --N and --k".into()));
    };
    let key = parse_key(Context::new(n, k)?, key).map_err(CliError::Usage)?;
    let report = excess_report(&key)?;
    Ok(Output {
        text: report.to_string(),
        json: serde_json::to_value(&report).expect("json"),
        code: EXIT_OK,
    })
}

fn write_fixtures(dir: &Path) -> Run {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    for (name, table) in fixtures::all() {
        let path = dir.join(name);
        store_table(&table, &path)?;
        written.push(path.display().to_string());
    }
    let text: String = written.iter().map(|p| format!("wrote {p}\n")).collect();
    Ok(Output {
        text,
        json: json!({ "written": written }),
        code: EXIT_OK,
    })
}
