//! The `cqg` command line.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns the
//! process exit code: `0` on success, `1` when a validation or property
//! check fails, `2` for usage and I/O errors. Output depends only on the
//! flags and input files.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use cqg_core::analysis::{cstar_norm, l2_norm};
use cqg_core::conv::{approximate_unit, convolve};
use cqg_core::group::{
    fourier, inverse_fourier, load_function, load_group, save_function, validate_irreps, GroupError,
    GroupTable, IrrepSet, BUILTIN_GROUPS, GROUP_FORMAT, IRREP_TOLERANCE,
};
use cqg_core::model::{
    load_element, parse_instance, save_element, validate_instance, BlockLabel, ConvElement, InstanceSpec,
    TruncationWindow, ELEMENT_FORMAT, INSTANCE_FORMAT,
};
use cqg_core::oracle::{load_hopf, validate_hopf, HOPF_FORMAT};
use cqg_core::report::Report;
use cqg_core::suites::{
    run_suite, NamedGroup, NamedHopf, NamedInstance, Suite, SuiteConfig, DEFAULT_SAMPLES, DEFAULT_SEED,
    DEFAULT_TOLERANCE,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Where `check` records its report for `report`.
pub const DEFAULT_STATE: &str = ".cqg/last-check.json";

/// Residual threshold used by `validate` for Hopf presentations.
const HOPF_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "cqg", version, about = "Convolution algebras of compact Hopf *-algebras in block form")]
pub struct Cli {
    /// Emit machine-readable JSON instead of text tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate an instance, group, Hopf presentation or element file.
    Validate {
        file: PathBuf,
        /// Instance that an element file must belong to.
        #[arg(long)]
        instance: Option<PathBuf>,
    },
    /// Convolve two elements.
    Conv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// L² or C* norm of an element.
    Norm {
        #[arg(long, value_enum)]
        kind: NormKind,
        element: PathBuf,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Fourier transform of a group function, or its inverse.
    Fourier {
        /// Built-in group name or a group file with irreps.
        #[arg(long)]
        group: String,
        #[arg(long)]
        inverse: bool,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Approximate unit of a window; block "0" is always included.
    Unit {
        #[arg(long)]
        instance: PathBuf,
        /// Comma-separated block labels.
        #[arg(long, value_delimiter = ',')]
        window: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run property suites.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        /// Built-in group names or group files; all built-ins when omitted.
        #[arg(long, value_delimiter = ',')]
        group: Vec<String>,
        /// Instance files checked alongside the synthetic instances.
        #[arg(long, value_delimiter = ',')]
        instance: Vec<PathBuf>,
        /// Hopf presentation files.
        #[arg(long, value_delimiter = ',')]
        hopf: Vec<PathBuf>,
        /// Skip the built-in synthetic q-instances.
        #[arg(long)]
        no_synthetic: bool,
        #[arg(long, default_value = DEFAULT_STATE)]
        state: PathBuf,
    },
    /// Print the report of the last `check`.
    Report {
        #[arg(long, default_value = DEFAULT_STATE)]
        state: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum NormKind {
    L2,
    Cstar,
}

/// A check that ran and failed; maps to exit code 1.
#[derive(Debug)]
struct Failure(String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failure {}

#[derive(Debug, PartialEq, Eq)]
enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// The record written by `check` and read back by `report`.
#[derive(Debug, Serialize, Deserialize)]
struct CheckState {
    suite: String,
    seed: u64,
    samples: usize,
    tolerance: f64,
    sources: Vec<String>,
    report: Report,
}

/// Runs the command line and returns the exit code.
pub fn run<I, A>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                EXIT_OK
            } else {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            };
        }
    };
    match execute(&cli, out) {
        Ok(Verdict::Pass) => EXIT_OK,
        Ok(Verdict::Fail) => EXIT_FAILURE,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            if e.downcast_ref::<Failure>().is_some() {
                EXIT_FAILURE
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Verdict> {
    let json = cli.json;
    match &cli.command {
        Command::Validate { file, instance } => validate(file, instance.as_deref(), json, out),
        Command::Conv { a, b, instance, output } => {
            let spec = read_instance(instance)?;
            let (fa, fb) = (read_element(a, &spec)?, read_element(b, &spec)?);
            let product = convolve(&spec, &fa, &fb).map_err(|e| Failure(e.to_string()))?;
            emit(out, output.as_deref(), &save_element(&product))?;
            Ok(Verdict::Pass)
        }
        Command::Norm { kind, element, instance } => {
            let spec = read_instance(instance)?;
            let f = read_element(element, &spec)?;
            let value = match kind {
                NormKind::L2 => l2_norm(&spec, &f)?,
                NormKind::Cstar => cstar_norm(&spec, &f)?,
            };
            if json {
                let v = serde_json::json!({ "kind": kind, "value": value });
                writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
            } else {
                let name = match kind {
                    NormKind::L2 => "L2",
                    NormKind::Cstar => "C*",
                };
                writeln!(out, "{name} norm: {value:.17e}")?;
            }
            Ok(Verdict::Pass)
        }
        Command::Fourier {
            group,
            inverse,
            input,
            output,
        } => {
            let g = resolve_group(group)?;
            let bytes = read(input)?;
            let text = if *inverse {
                let e = load_element::<f64>(&bytes).with_context(|| format!("reading {}", input.display()))?;
                save_function(&g.table, &inverse_fourier(&g.table, &g.irreps, &e)?)
            } else {
                let f = load_function::<f64>(&g.table, &bytes).with_context(|| format!("reading {}", input.display()))?;
                save_element(&fourier(&g.table, &g.irreps, &f)?)
            };
            emit(out, output.as_deref(), &text)?;
            Ok(Verdict::Pass)
        }
        Command::Unit {
            instance,
            window,
            output,
        } => {
            let spec = read_instance(instance)?;
            let labels = window
                .iter()
                .filter(|s| !s.is_empty())
                .map(|s| BlockLabel::new(s.as_str()))
                .chain([BlockLabel::zero()]);
            let k = TruncationWindow::new(labels)?;
            k.check_in(&spec)?;
            emit(out, output.as_deref(), &save_element(&approximate_unit(&spec, &k)?))?;
            Ok(Verdict::Pass)
        }
        Command::Check {
            suite,
            seed,
            samples,
            tol,
            group,
            instance,
            hopf,
            no_synthetic,
            state,
        } => {
            let suite: Suite = suite.parse()?;
            let mut config = SuiteConfig::new(*seed, *samples, *tol)?;
            config.synthetic = !no_synthetic;
            let mut sources = Vec::new();
            let names: Vec<String> = if group.is_empty() {
                BUILTIN_GROUPS.iter().map(|s| s.to_string()).collect()
            } else {
                group.clone()
            };
            for name in &names {
                config.groups.push(resolve_group(name)?);
                sources.push(format!("group:{name}"));
            }
            for path in instance {
                let spec = parse_instance::<f64>(&read(path)?).with_context(|| format!("reading {}", path.display()))?;
                config.instances.push(NamedInstance {
                    name: stem(path),
                    spec,
                });
                sources.push(format!("instance:{}", path.display()));
            }
            for path in hopf {
                let presentation = load_hopf::<f64>(&read(path)?).with_context(|| format!("reading {}", path.display()))?;
                config.hopfs.push(NamedHopf {
                    name: stem(path),
                    presentation,
                });
                sources.push(format!("hopf:{}", path.display()));
            }
            let report = run_suite(suite, &config);
            let record = CheckState {
                suite: suite.to_string(),
                seed: *seed,
                samples: *samples,
                tolerance: *tol,
                sources,
                report,
            };
            if let Some(dir) = state.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(state, serde_json::to_string_pretty(&record)?)
                .with_context(|| format!("writing {}", state.display()))?;
            print_check(&record, json, out)?;
            Ok(Verdict::from_bool(record.report.passed()))
        }
        Command::Report { state } => {
            let bytes = read(state)?;
            let record: CheckState =
                serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", state.display()))?;
            print_check(&record, json, out)?;
            Ok(Verdict::from_bool(record.report.passed()))
        }
    }
}

fn print_check(record: &CheckState, json: bool, out: &mut dyn Write) -> Result<()> {
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(record)?)?;
    } else {
        writeln!(
            out,
            "check suite={} seed={} samples={} tol={:e}",
            record.suite, record.seed, record.samples, record.tolerance
        )?;
        writeln!(out, "sources: {}", record.sources.join(", "))?;
        writeln!(out, "{}", record.report)?;
    }
    Ok(())
}

fn validate(file: &Path, instance: Option<&Path>, json: bool, out: &mut dyn Write) -> Result<Verdict> {
    let bytes = read(file)?;
    let value: serde_json::Value =
        serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", file.display()))?;
    let format = value.get("format").and_then(|f| f.as_str());
    match format {
        Some(INSTANCE_FORMAT) => {
            let spec = parse_instance::<f64>(&bytes)?;
            let report = validate_instance(&spec);
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                writeln!(out, "{report}")?;
            }
            Ok(Verdict::from_bool(report.passed()))
        }
        Some(HOPF_FORMAT) => print_report(&validate_hopf(&load_hopf::<f64>(&bytes)?, HOPF_TOLERANCE), json, out),
        Some(ELEMENT_FORMAT) => {
            let f = load_element::<f64>(&bytes)?;
            let mut report = Report::new("element");
            if let Some(path) = instance {
                let spec = read_instance(path)?;
                report.holds("belongs to the instance", f.check_membership(&spec).is_ok());
            }
            report.holds("blocks are square", f.blocks().all(|(_, m)| m.is_square()));
            print_report(&report, json, out)
        }
        Some(GROUP_FORMAT) | None if value.get("elements").is_some() => {
            let (table, irreps) = match load_group::<f64>(&bytes) {
                Ok(x) => x,
                Err(e @ GroupError::InvalidTable(_)) => return Err(Failure(e.to_string()).into()),
                Err(e) => return Err(e.into()),
            };
            let report = match irreps {
                Some(irreps) => validate_irreps(&table, &irreps, IRREP_TOLERANCE),
                None => {
                    let mut r = Report::new("group table");
                    r.holds("table is a group", true);
                    r
                }
            };
            print_report(&report, json, out)
        }
        Some(other) => bail!("unsupported format {other:?}"),
        None => bail!("{}: missing \"format\" field", file.display()),
    }
}

fn print_report(report: &Report, json: bool, out: &mut dyn Write) -> Result<Verdict> {
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(report)?)?;
    } else {
        writeln!(out, "{report}")?;
    }
    Ok(Verdict::from_bool(report.passed()))
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display())),
        None => Ok(writeln!(out, "{text}")?),
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

/// Loads and validates an instance; an invalid one is a check failure.
fn read_instance(path: &Path) -> Result<InstanceSpec<f64>> {
    let spec = parse_instance::<f64>(&read(path)?).with_context(|| format!("reading {}", path.display()))?;
    let report = validate_instance(&spec);
    if !report.passed() {
        return Err(Failure(format!("{} is not a valid instance:\n{report}", path.display())).into());
    }
    Ok(spec)
}

/// Loads an element and checks that it belongs to `spec`.
fn read_element(path: &Path, spec: &InstanceSpec<f64>) -> Result<ConvElement<f64>> {
    let f = load_element::<f64>(&read(path)?).with_context(|| format!("reading {}", path.display()))?;
    f.check_membership(spec)
        .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Ok(f)
}

/// A built-in group by name, or a group file that carries irreps.
fn resolve_group(name: &str) -> Result<NamedGroup> {
    if BUILTIN_GROUPS.contains(&name) {
        return Ok(NamedGroup::builtin(name)?);
    }
    let path = Path::new(name);
    if !path.exists() {
        bail!("unknown group {name:?}: not one of {} and not a file", BUILTIN_GROUPS.join(", "));
    }
    let (table, irreps): (GroupTable, Option<IrrepSet<f64>>) =
        load_group(&read(path)?).with_context(|| format!("reading {}", path.display()))?;
    let irreps = irreps.ok_or_else(|| anyhow!("{}: group file has no irreps section", path.display()))?;
    Ok(NamedGroup {
        name: stem(path),
        table,
        irreps,
    })
}
