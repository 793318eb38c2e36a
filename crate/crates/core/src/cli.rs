//! Command-line front end. [`run`] is what the `ksep` binary calls; it writes
//! to the supplied streams and returns the process exit code:
//! 0 on success, 1 for usage or input errors, 2 for resource or computation
//! errors. Detection verdicts never affect the exit code.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::correlation::{full_tensor, norm_table, tensor_norm, measurement_settings, TensorOptions, DEFAULT_DENSE_LIMIT, DEFAULT_ZERO_TOL};
use crate::error::Error;
use crate::separability::{detect, k_sep_bound, k_sep_bound_with, threshold_p, xi_sweep, PartitionRule};
use crate::stabilizer::permutation_terms;
use crate::statefile::StateFile;
use crate::states::{Family, GraphSpec};

/// Environment variable overriding the dense-sweep qubit limit.
pub const DENSE_LIMIT_ENV: &str = "KSEP_DENSE_LIMIT";

#[derive(Debug, Parser)]
#[command(name = "ksep", version, about = "Correlation-tensor entanglement checks for complete graph states")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tensor norms of the cg, ghz, w and cluster families
    Norms {
        #[arg(long, value_delimiter = ',', default_value = "cg,ghz,w,cluster", value_parser = parse_family)]
        families: Vec<Family>,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// k-separability bounds with their maximizing partitions
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k_min: usize,
        /// Defaults to n
        #[arg(long)]
        k_max: Option<usize>,
        /// Drop the at-most-one-pair restriction on partitions
        #[arg(long)]
        unrestricted: bool,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Noise sweep of the xi ratio for a noisy cg or ghz state
    Sweep {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 101)]
        p_steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Apply the criterion to a state file
    Detect {
        #[arg(long)]
        state_file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_ZERO_TOL)]
        zero_tol: f64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Local observables needed to evaluate the criterion
    Settings {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Include the Z...Z string contributed by |1..1> noise
        #[arg(long)]
        noise: bool,
    },
    /// Binomial count of the complete-graph support against 2^(N-1)+s
    Appendix {
        #[arg(long)]
        n: usize,
    },
    /// Complete graph in DOT syntax
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
    /// Rewrite a family state file with explicit amplitudes
    Expand {
        #[arg(long)]
        state_file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Compute(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Compute(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::DimensionMismatch { .. } | Error::StateFile(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

/// Formats with 12 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..12).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn tensor_options(zero_tol: f64) -> Result<TensorOptions, Failure> {
    let dense_limit = match std::env::var(DENSE_LIMIT_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{DENSE_LIMIT_ENV} must be an integer, got {v:?}")))?,
        Err(_) => DEFAULT_DENSE_LIMIT,
    };
    Ok(TensorOptions {
        zero_tol,
        dense_limit,
        ..TensorOptions::default()
    })
}

fn json_line(out: &mut dyn Write, value: &serde_json::Value) -> CmdResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Compute(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match command {
        Command::Norms {
            families,
            n_min,
            n_max,
            format,
        } => cmd_norms(&families, n_min, n_max, format, out),
        Command::Bounds {
            n,
            k_min,
            k_max,
            unrestricted,
            format,
        } => cmd_bounds(n, k_min, k_max.unwrap_or(n), unrestricted, format, out),
        Command::Sweep {
            family,
            n,
            k,
            p_steps,
            out: path,
            format,
        } => match path {
            Some(path) => {
                let file = File::create(&path)
                    .map_err(|e| Failure::Compute(format!("cannot write {}: {e}", path.display())))?;
                let mut writer = BufWriter::new(file);
                cmd_sweep(family, n, k, p_steps, format, &mut writer)?;
                writer.flush()?;
                Ok(())
            }
            None => cmd_sweep(family, n, k, p_steps, format, out),
        },
        Command::Detect {
            state_file,
            k,
            zero_tol,
            format,
        } => cmd_detect(&state_file, k, zero_tol, format, out, err),
        Command::Settings { family, n, noise } => cmd_settings(family, n, noise, out),
        Command::Appendix { n } => cmd_appendix(n, out),
        Command::Graph { n, format: GraphFormat::Dot } => {
            let spec = GraphSpec::complete(n)?;
            write!(out, "{}", spec.to_dot(&format!("K{n}")))?;
            Ok(())
        }
        Command::Expand { state_file, out: path } => {
            let text = StateFile::load(&state_file)?.to_raw()?.to_toml()?;
            match path {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| Failure::Compute(format!("cannot write {}: {e}", path.display())))?,
                None => write!(out, "{text}")?,
            }
            Ok(())
        }
    }
}

fn cmd_norms(families: &[Family], n_min: usize, n_max: usize, format: TableFormat, out: &mut dyn Write) -> CmdResult {
    let rows = norm_table(families, n_min, n_max, &tensor_options(DEFAULT_ZERO_TOL)?)?;
    match format {
        TableFormat::Csv => {
            writeln!(out, "family,n,norm_sq,norm")?;
            for r in &rows {
                writeln!(out, "{},{},{},{}", r.family, r.n, fmt_num(r.norm_sq), fmt_num(r.norm))?;
            }
        }
        TableFormat::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| json!({"family": r.family.name(), "n": r.n, "norm_sq": r.norm_sq, "norm": r.norm}))
                .collect();
            json_line(out, &json!(rows))?;
        }
    }
    Ok(())
}

fn cmd_bounds(n: usize, k_min: usize, k_max: usize, unrestricted: bool, format: TableFormat, out: &mut dyn Write) -> CmdResult {
    if n < 3 {
        return Err(Failure::Usage(format!("bounds need n >= 3, got {n}")));
    }
    if k_min < 1 || k_min > k_max || k_max > n {
        return Err(Failure::Usage(format!("need 1 <= k-min <= k-max <= n, got {k_min}..={k_max}")));
    }
    let rule = if unrestricted {
        PartitionRule::Unrestricted
    } else {
        PartitionRule::AtMostOneTwo
    };
    let bounds = (k_min..=k_max)
        .map(|k| k_sep_bound_with(n, k, rule))
        .collect::<Result<Vec<_>, _>>()?;
    match format {
        TableFormat::Csv => {
            writeln!(out, "n,k,bound,partition")?;
            for b in &bounds {
                writeln!(out, "{},{},{},{}", b.n, b.k, fmt_num(b.bound), b.partition_label())?;
            }
        }
        TableFormat::Json => {
            let rows: Vec<_> = bounds
                .iter()
                .map(|b| json!({"n": b.n, "k": b.k, "bound": b.bound, "partition": b.partition_label()}))
                .collect();
            json_line(out, &json!(rows))?;
        }
    }
    Ok(())
}

fn cmd_sweep(family: Family, n: usize, k: usize, steps: usize, format: TableFormat, out: &mut dyn Write) -> CmdResult {
    if steps < 2 {
        return Err(Failure::Usage("--p-steps must be at least 2".into()));
    }
    let bound = k_sep_bound(n, k)?;
    let grid: Vec<f64> = (0..steps).map(|i| i as f64 / (steps - 1) as f64).collect();
    let rows = xi_sweep(n, k, &grid, family)?;
    let threshold = threshold_p(n, k, family)?;
    let verdict = |num: f64, den: f64| if num > den { "NonKSeparable" } else { "Inconclusive" };
    match format {
        TableFormat::Csv => {
            writeln!(out, "# family={family} n={n} k={k} partition={}", bound.partition_label())?;
            match threshold {
                Some(p) => writeln!(out, "# p* = {}", fmt_num(p))?,
                None => writeln!(out, "# p* = none")?,
            }
            writeln!(out, "p,norm_sq,bound_sq,xi,verdict")?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    fmt_num(r.p),
                    fmt_num(r.numerator),
                    fmt_num(r.denominator),
                    fmt_num(r.xi),
                    verdict(r.numerator, r.denominator)
                )?;
            }
        }
        TableFormat::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": n, "k": k, "p": r.p,
                        "norm": r.numerator.sqrt(), "bound": bound.bound,
                        "partition": bound.partition_label(),
                        "xi": r.xi, "verdict": verdict(r.numerator, r.denominator),
                    })
                })
                .collect();
            json_line(out, &json!({"family": family.name(), "threshold_p": threshold, "rows": rows}))?;
        }
    }
    Ok(())
}

fn cmd_detect(
    path: &std::path::Path,
    k: usize,
    zero_tol: f64,
    format: ReportFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let file = StateFile::load(path)?;
    let loaded = file.to_ensemble()?;
    for w in &loaded.warnings {
        writeln!(err, "warning: {w}")?;
    }
    let n = loaded.ensemble.n();
    if k < 1 || k > n {
        return Err(Failure::Usage(format!("need 1 <= k <= {n}, got {k}")));
    }
    let tensor = full_tensor(&loaded.ensemble, &tensor_options(zero_tol)?)?;
    let norm = tensor_norm(&tensor);
    let bound = k_sep_bound(n, k)?;
    let verdict = detect(norm, n, k)?;
    let xi = norm * norm / bound.bound_sq as f64;
    match format {
        ReportFormat::Text => {
            writeln!(out, "n: {n}")?;
            writeln!(out, "k: {k}")?;
            writeln!(out, "norm: {}", fmt_num(norm))?;
            writeln!(out, "bound: {}", fmt_num(bound.bound))?;
            writeln!(out, "partition: {}", bound.partition_label())?;
            writeln!(out, "xi: {}", fmt_num(xi))?;
            writeln!(out, "verdict: {}", verdict.outcome)?;
        }
        ReportFormat::Json => json_line(
            out,
            &json!({
                "n": n, "k": k, "p": file.p,
                "norm": norm, "bound": bound.bound, "partition": bound.partition_label(),
                "xi": xi, "verdict": verdict.outcome.to_string(),
            }),
        )?,
    }
    Ok(())
}

fn cmd_settings(family: Family, n: usize, noise: bool, out: &mut dyn Write) -> CmdResult {
    let settings = measurement_settings(family, n, noise)?;
    for p in &settings {
        writeln!(out, "{p}")?;
    }
    writeln!(out, "# count: {}", settings.len())?;
    Ok(())
}

fn cmd_appendix(n: usize, out: &mut dyn Write) -> CmdResult {
    let count = permutation_terms(n)?;
    let s = u8::from(count.y_term);
    writeln!(out, "N = {n} (s = {s})")?;
    for (x, c) in &count.terms {
        writeln!(out, "C({n},{x}) = {c}")?;
    }
    if count.y_term {
        writeln!(out, "Y^N = 1")?;
    }
    writeln!(out, "sum = {}", count.total)?;
    writeln!(out, "2^(N-1)+s = {}", count.closed_form)?;
    if count.agrees() {
        writeln!(out, "match: yes")?;
        Ok(())
    } else {
        writeln!(out, "match: no")?;
        Err(Failure::Compute("binomial sum disagrees with the closed form".into()))
    }
}
