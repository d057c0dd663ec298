//! Command-line front end for the decaylab library.
//!
//! Six subcommands cover the library surface:
//!
//! * `exponents`  — exact decay exponents for one group/representation,
//!   all catalogued constructions side by side;
//! * `table`      — the closed-form family summary table;
//! * `hc`         — spherical-function estimates along the scalar chamber
//!   ray (Monte Carlo and, where available, quadrature), plus the
//!   two-sided envelope check;
//! * `kazhdan`    — end-to-end spectral-gap constant for a compact/torus
//!   generating pair;
//! * `orbit-pack` — greedy shell packings over a `c₀` grid with the
//!   fitted packing exponent;
//! * `verify`     — the cross-module invariant suites.
//!
//! Exit codes: 0 on success, 1 when a checked invariant fails (a failing
//! verify suite, an envelope violation, a degenerate fit), 2 on usage
//! errors and unsupported inputs.
//!
//! Output: `--format text|json|csv` (default text), `--out FILE` to write
//! instead of printing.  A relative `--out` resolves under
//! `$DECAYLAB_OUT_DIR` when that is set.  `--config FILE` reads
//! `key=value` defaults (`format`, `out_dir`, `samples`, `seed`); explicit
//! flags always win over the file, the file over the environment, the
//! environment over built-ins.  Every persisted output embeds the seed it
//! was produced with.

use clap::{Args, Parser, Subcommand, ValueEnum};
use decaylab::catalog::{FieldKind, GroupSpec, RepSpec};
use decaylab::exponents::{
    baseline_exponent, howe_product_exponent, improved_exponent, rank1_prime_exponent,
    remark_table, ExponentError, ExponentReport,
};
use decaylab::hcfun::{
    hc_bound_check, hc_estimate, quadrature, CartanPoint, HcError, Method,
};
use decaylab::kazhdan::{kazhdan_for_set, KazhdanError};
use decaylab::orbitlab::{fit_gamma, greedy_pack, OrbitError, ShellExample};
use decaylab::rational::{decimal_string, display, RatRepr};
use decaylab::verify::{run_with_fault, Fault, VerifyError};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

// ─────────────────────────────────────────────────────────────────────────────
// Errors and exit codes
// ─────────────────────────────────────────────────────────────────────────────

#[derive(Debug)]
enum AppError {
    /// Bad flags, unknown names, unsupported group/backend combinations.
    Usage(String),
    /// A checked mathematical invariant failed.
    Invariant(String),
    /// The environment failed us (unwritable output, unreadable config).
    Io(String),
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Usage(m) | AppError::Invariant(m) | AppError::Io(m) => f.write_str(m),
        }
    }
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Usage(_) | AppError::Io(_) => 2,
            AppError::Invariant(_) => 1,
        }
    }
}

impl From<ExponentError> for AppError {
    fn from(e: ExponentError) -> Self {
        AppError::Usage(e.to_string())
    }
}

impl From<HcError> for AppError {
    fn from(e: HcError) -> Self {
        match e {
            HcError::DecompositionFailure => AppError::Invariant(e.to_string()),
            _ => AppError::Usage(e.to_string()),
        }
    }
}

impl From<KazhdanError> for AppError {
    fn from(e: KazhdanError) -> Self {
        match e {
            KazhdanError::InvalidXi(_) => AppError::Invariant(e.to_string()),
            KazhdanError::Hc(inner) => inner.into(),
            _ => AppError::Usage(e.to_string()),
        }
    }
}

impl From<OrbitError> for AppError {
    fn from(e: OrbitError) -> Self {
        match e {
            OrbitError::FitFailure(_) => AppError::Invariant(e.to_string()),
            _ => AppError::Usage(e.to_string()),
        }
    }
}

impl From<VerifyError> for AppError {
    fn from(e: VerifyError) -> Self {
        AppError::Usage(e.to_string())
    }
}

// ─────────────────────────────────────────────────────────────────────────────
// Flags
// ─────────────────────────────────────────────────────────────────────────────

#[derive(Parser)]
#[command(
    name = "decaylab",
    version,
    about = "Exact decay exponents, spherical-function numerics, spectral-gap constants, and shell-packing experiments for classical matrix groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// key=value defaults file (keys: format, out_dir, samples, seed)
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout (relative paths resolve
    /// under $DECAYLAB_OUT_DIR)
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact decay exponents for one group and representation
    Exponents(ExponentsArgs),
    /// Closed-form family summary table
    Table(TableArgs),
    /// Spherical-function estimates along the scalar chamber ray
    Hc(HcArgs),
    /// Spectral-gap constant for a compact/torus generating pair
    Kazhdan(KazhdanArgs),
    /// Greedy shell packings over a c0 grid with fitted exponent
    OrbitPack(OrbitPackArgs),
    /// Cross-module invariant suites
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GroupArgs {
    /// Family token: sl2, sl3, sl (with --n), sp2n, so01n, su1n, sp1n,
    /// sunm, spnm
    #[arg(long)]
    group: String,
    /// Rank parameter n (required by the parametric families)
    #[arg(long)]
    n: Option<u32>,
    /// Second parameter m of SU(n,m)/Sp(n,m)
    #[arg(long)]
    m: Option<u32>,
    /// Matrix-entry field: R, C, H, or k (nonarchimedean)
    #[arg(long)]
    field: Option<String>,
}

#[derive(Args)]
struct ExponentsArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Representation: standard or adjoint
    #[arg(long, default_value = "standard")]
    rep: String,
}

#[derive(Args)]
struct TableArgs {
    /// Smallest family parameter n
    #[arg(long, default_value_t = 2)]
    n_min: u32,
    /// Largest family parameter n
    #[arg(long, default_value_t = 8)]
    n_max: u32,
    /// Largest second parameter m of the two-parameter families
    /// (default: n_max)
    #[arg(long)]
    m_max: Option<u32>,
}

#[derive(Args)]
struct HcArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Evaluation points on the chamber ray: comma-separated values
    #[arg(long)]
    t: Option<String>,
    /// Grid for the envelope check: "a:b" (integer steps) or comma floats
    #[arg(long)]
    t_grid: Option<String>,
    /// Envelope-check decay margin in (0, 1/2); presence selects the
    /// envelope check instead of point estimates
    #[arg(long)]
    epsilon: Option<f64>,
    /// Backend: mc or quadrature
    #[arg(long)]
    method: Option<String>,
    /// Monte Carlo sample count
    #[arg(long)]
    samples: Option<u64>,
    /// Random seed (always recorded in the output)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct KazhdanArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Representation: standard or adjoint
    #[arg(long, default_value = "standard")]
    rep: String,
    /// Chamber coordinate of the torus witness (t > 0)
    #[arg(long)]
    t: f64,
    /// Monte Carlo sample count
    #[arg(long)]
    samples: Option<u64>,
    /// Random seed (always recorded in the output)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct OrbitPackArgs {
    /// Shell example: sl3-standard, sl2-adjoint, or so12-standard
    #[arg(long)]
    example: String,
    /// c0 grid: "2^-4:2^-9" (inclusive powers of two) or comma floats
    #[arg(long, default_value = "2^-4:2^-9")]
    c0_grid: String,
    /// Rotation-parameter grid points per packing window
    #[arg(long, default_value_t = 1000)]
    grid_resolution: u32,
    /// Certificate samples per pair
    #[arg(long)]
    samples: Option<u64>,
    /// Random seed (always recorded in the output)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run a single suite: lattice, catalog, exponents, or kazhdan
    #[arg(long)]
    only: Option<String>,
    /// Deliberately corrupt a datum to exercise the failure path
    #[arg(long, hide = true, value_name = "FAULT")]
    inject_fault: Option<String>,
}

// ─────────────────────────────────────────────────────────────────────────────
// Configuration resolution
// ─────────────────────────────────────────────────────────────────────────────

#[derive(Default)]
struct FileDefaults {
    format: Option<Format>,
    out_dir: Option<PathBuf>,
    samples: Option<u64>,
    seed: Option<u64>,
}

fn load_defaults(path: Option<&Path>) -> Result<FileDefaults, AppError> {
    let mut defaults = FileDefaults::default();
    let Some(path) = path else {
        return Ok(defaults);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Io(format!("cannot read config {}: {e}", path.display())))?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(AppError::Usage(format!(
                "config line {} is not key=value: `{raw}`",
                lineno + 1
            )));
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "format" => {
                defaults.format = Some(
                    Format::from_str(value, true)
                        .map_err(|e| AppError::Usage(format!("config format: {e}")))?,
                )
            }
            "out_dir" => defaults.out_dir = Some(PathBuf::from(value)),
            "samples" => {
                defaults.samples = Some(value.parse().map_err(|e| {
                    AppError::Usage(format!("config samples `{value}`: {e}"))
                })?)
            }
            "seed" => {
                defaults.seed = Some(value.parse().map_err(|e| {
                    AppError::Usage(format!("config seed `{value}`: {e}"))
                })?)
            }
            other => {
                return Err(AppError::Usage(format!(
                    "unknown config key `{other}` (expected format, out_dir, samples, seed)"
                )))
            }
        }
    }
    Ok(defaults)
}

/// Resolved output sink: format plus destination.
struct Sink {
    format: Format,
    out: Option<PathBuf>,
}

impl Sink {
    fn resolve(cli: &Cli, defaults: &FileDefaults) -> Self {
        let format = cli.format.or(defaults.format).unwrap_or(Format::Text);
        let out_dir = defaults
            .out_dir
            .clone()
            .or_else(|| std::env::var_os("DECAYLAB_OUT_DIR").map(PathBuf::from));
        let out = cli.out.clone().map(|p| match (&out_dir, p.is_relative()) {
            (Some(dir), true) => dir.join(p),
            _ => p,
        });
        Sink { format, out }
    }

    fn emit(
        &self,
        text: String,
        json: &impl Serialize,
        csv: Option<String>,
    ) -> Result<(), AppError> {
        let body = match self.format {
            Format::Text => text,
            Format::Json => {
                let mut s = serde_json::to_string_pretty(json)
                    .map_err(|e| AppError::Io(format!("serialization failed: {e}")))?;
                s.push('\n');
                s
            }
            Format::Csv => csv.ok_or_else(|| {
                AppError::Usage("this command has no CSV rendering".into())
            })?,
        };
        match &self.out {
            Some(path) => {
                if let Some(dir) = path.parent() {
                    if !dir.as_os_str().is_empty() {
                        std::fs::create_dir_all(dir).map_err(|e| {
                            AppError::Io(format!("cannot create {}: {e}", dir.display()))
                        })?;
                    }
                }
                std::fs::write(path, body)
                    .map_err(|e| AppError::Io(format!("cannot write {}: {e}", path.display())))
            }
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

// ─────────────────────────────────────────────────────────────────────────────
// Argument parsing helpers
// ─────────────────────────────────────────────────────────────────────────────

fn parse_field(s: &str) -> Result<FieldKind, AppError> {
    match s.to_ascii_lowercase().as_str() {
        "r" | "real" => Ok(FieldKind::Real),
        "c" | "complex" => Ok(FieldKind::Complex),
        "h" | "quaternion" => Ok(FieldKind::Quaternion),
        "k" | "qp" | "nonarch" | "nonarchimedean" | "p-adic" => Ok(FieldKind::NonArchimedean),
        other => Err(AppError::Usage(format!(
            "unknown field `{other}` (expected R, C, H, or k)"
        ))),
    }
}

impl GroupArgs {
    fn parse(&self) -> Result<GroupSpec, AppError> {
        let field = self.field.as_deref().map(parse_field).transpose()?;
        let need_n = |what: &str| {
            self.n.ok_or_else(|| {
                AppError::Usage(format!("--group {what} requires --n"))
            })
        };
        let need_m = |what: &str| {
            self.m.ok_or_else(|| {
                AppError::Usage(format!("--group {what} requires --m"))
            })
        };
        let usage = |e: decaylab::catalog::CatalogError| AppError::Usage(e.to_string());
        let token = self.group.to_ascii_lowercase();
        if let Some(rest) = token.strip_prefix("sl") {
            let n = if rest.is_empty() {
                need_n("sl")?
            } else {
                rest.parse().map_err(|_| {
                    AppError::Usage(format!("unknown group token `{}`", self.group))
                })?
            };
            return GroupSpec::sl(n, field.unwrap_or(FieldKind::Real)).map_err(usage);
        }
        match token.as_str() {
            "sp2n" => GroupSpec::sp2n(need_n("sp2n")?, field.unwrap_or(FieldKind::Complex))
                .map_err(usage),
            "so01n" | "so1n" => GroupSpec::so01n(need_n("so01n")?).map_err(usage),
            "su1n" => GroupSpec::su1n(need_n("su1n")?).map_err(usage),
            "sp1n" => GroupSpec::sp1n(need_n("sp1n")?).map_err(usage),
            "sunm" => GroupSpec::sunm(need_n("sunm")?, need_m("sunm")?).map_err(usage),
            "spnm" => GroupSpec::spnm(need_n("spnm")?, need_m("spnm")?).map_err(usage),
            other => Err(AppError::Usage(format!(
                "unknown group token `{other}` (expected sl2, sl3, sl, sp2n, so01n, su1n, sp1n, sunm, spnm)"
            ))),
        }
    }
}

fn parse_rep(s: &str) -> Result<RepSpec, AppError> {
    match s.to_ascii_lowercase().as_str() {
        "standard" => Ok(RepSpec::Standard),
        "adjoint" => Ok(RepSpec::Adjoint),
        other => Err(AppError::Usage(format!(
            "unknown representation `{other}` (expected standard or adjoint)"
        ))),
    }
}

fn parse_method(s: Option<&str>) -> Result<Method, AppError> {
    match s.map(str::to_ascii_lowercase).as_deref() {
        None | Some("mc") | Some("monte-carlo") | Some("monte_carlo") => Ok(Method::MonteCarlo),
        Some("quadrature") | Some("quad") => Ok(Method::Quadrature),
        Some(other) => Err(AppError::Usage(format!(
            "unknown method `{other}` (expected mc or quadrature)"
        ))),
    }
}

fn parse_float_list(s: &str, what: &str) -> Result<Vec<f64>, AppError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| AppError::Usage(format!("bad {what} value `{t}`: {e}")))
        })
        .collect()
}

/// "a:b" with integer endpoints (inclusive, step 1) or a comma float list.
fn parse_t_grid(s: &str) -> Result<Vec<f64>, AppError> {
    if let Some((a, b)) = s.split_once(':') {
        let lo: i64 = a.trim().parse().map_err(|e| {
            AppError::Usage(format!("bad grid start `{a}`: {e}"))
        })?;
        let hi: i64 = b.trim().parse().map_err(|e| {
            AppError::Usage(format!("bad grid end `{b}`: {e}"))
        })?;
        if hi < lo {
            return Err(AppError::Usage(format!("empty grid {lo}:{hi}")));
        }
        Ok((lo..=hi).map(|k| k as f64).collect())
    } else {
        parse_float_list(s, "grid")
    }
}

/// "2^-4:2^-9" (inclusive powers of two, either direction) or comma floats.
fn parse_c0_grid(s: &str) -> Result<Vec<f64>, AppError> {
    let parse_pow = |tok: &str| -> Result<i32, AppError> {
        tok.trim()
            .strip_prefix("2^")
            .ok_or_else(|| {
                AppError::Usage(format!(
                    "bad c0 grid endpoint `{tok}` (expected the form 2^-4)"
                ))
            })?
            .parse()
            .map_err(|e| AppError::Usage(format!("bad exponent in `{tok}`: {e}")))
    };
    if let Some((a, b)) = s.split_once(':') {
        let (ka, kb) = (parse_pow(a)?, parse_pow(b)?);
        let range: Vec<i32> = if ka <= kb {
            (ka..=kb).collect()
        } else {
            (kb..=ka).rev().collect()
        };
        Ok(range.into_iter().map(|k| 2f64.powi(k)).collect())
    } else {
        parse_float_list(s, "c0")
    }
}

// ─────────────────────────────────────────────────────────────────────────────
// CSV support
// ─────────────────────────────────────────────────────────────────────────────

fn csv_from_rows(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, AppError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)
        .and_then(|()| rows.iter().try_for_each(|r| w.write_record(r)))
        .map_err(|e| AppError::Io(format!("csv encoding failed: {e}")))?;
    let bytes = w
        .into_inner()
        .map_err(|e| AppError::Io(format!("csv encoding failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| AppError::Io(format!("csv not UTF-8: {e}")))
}

fn opt_str<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

// ─────────────────────────────────────────────────────────────────────────────
// exponents
// ─────────────────────────────────────────────────────────────────────────────

#[derive(Serialize)]
struct ExponentsOut {
    group: String,
    rep: String,
    baseline: ExponentReport,
    improved: Option<ExponentReport>,
    howe_product: Option<ExponentReport>,
    rank1_prime: Option<ExponentReport>,
    notes: Vec<String>,
}

/// Run a construction that is only catalogued for part of the grid: absence
/// is a note, every other failure is an error.
fn optional_construction(
    result: Result<ExponentReport, ExponentError>,
    label: &str,
    notes: &mut Vec<String>,
) -> Result<Option<ExponentReport>, AppError> {
    match result {
        Ok(r) => Ok(Some(r)),
        Err(
            e @ (ExponentError::UnsupportedMechanism { .. }
            | ExponentError::Catalog(decaylab::catalog::CatalogError::NoImprovement { .. })),
        ) => {
            notes.push(format!("{label}: {e}"));
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_exponents(args: &ExponentsArgs, sink: &Sink) -> Result<(), AppError> {
    let group = args.group.parse()?;
    let rep = parse_rep(&args.rep)?;
    let mut notes = Vec::new();
    let baseline = baseline_exponent(&group, &rep)?;
    let improved = optional_construction(improved_exponent(&group, &rep), "improved", &mut notes)?;
    let howe = optional_construction(
        howe_product_exponent(&group, &rep),
        "howe_product",
        &mut notes,
    )?;
    let rank1 = optional_construction(
        rank1_prime_exponent(&group, &rep),
        "rank1_prime",
        &mut notes,
    )?;
    let out = ExponentsOut {
        group: group.id(),
        rep: rep.name().into(),
        baseline,
        improved,
        howe_product: howe,
        rank1_prime: rank1,
        notes,
    };

    let mut text = format!("group {}, representation {}\n\n", out.group, out.rep);
    let _ = writeln!(
        text,
        "{:<14} {:>12} {:>14} {:>6}",
        "construction", "p (exact)", "p (decimal)", "m"
    );
    let mut row = |label: &str, r: &ExponentReport| {
        let _ = writeln!(
            text,
            "{:<14} {:>12} {:>14} {:>6}{}",
            label,
            display(&r.p),
            decimal_string(&r.p, 6),
            r.m,
            if r.epsilon_flag { "  (+eps)" } else { "" }
        );
    };
    row("baseline", &out.baseline);
    if let Some(r) = &out.improved {
        row("improved", r);
    }
    if let Some(r) = &out.howe_product {
        row("howe_product", r);
    }
    if let Some(r) = &out.rank1_prime {
        row("rank1_prime", r);
    }
    for note in &out.notes {
        let _ = writeln!(text, "note: {note}");
    }

    let mut rows = Vec::new();
    let mut csv_row = |label: &str, r: &ExponentReport| {
        let repr = RatRepr::from(&r.p);
        rows.push(vec![
            out.group.clone(),
            out.rep.clone(),
            label.to_string(),
            repr.num,
            repr.den,
            repr.decimal,
            r.m.to_string(),
            r.epsilon_flag.to_string(),
        ]);
    };
    csv_row("baseline", &out.baseline);
    if let Some(r) = &out.improved {
        csv_row("improved", r);
    }
    if let Some(r) = &out.howe_product {
        csv_row("howe_product", r);
    }
    if let Some(r) = &out.rank1_prime {
        csv_row("rank1_prime", r);
    }
    let csv = csv_from_rows(
        &[
            "group", "rep", "construction", "p_num", "p_den", "p_decimal", "m", "epsilon_flag",
        ],
        rows,
    )?;

    sink.emit(text, &out, Some(csv))
}

// ─────────────────────────────────────────────────────────────────────────────
// table
// ─────────────────────────────────────────────────────────────────────────────

#[derive(Serialize)]
struct TableOut {
    n_min: u32,
    n_max: u32,
    m_max: u32,
    rows: Vec<decaylab::exponents::RemarkRow>,
}

fn cmd_table(args: &TableArgs, sink: &Sink) -> Result<(), AppError> {
    let m_max = args.m_max.unwrap_or(args.n_max);
    let rows = if args.n_min > args.n_max {
        Vec::new()
    } else {
        remark_table(args.n_min..=args.n_max, m_max)?
    };
    let out = TableOut {
        n_min: args.n_min,
        n_max: args.n_max,
        m_max,
        rows,
    };

    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<12} {:<18} {:>10} {:>12} {:>4}",
        "group", "mechanism", "p (exact)", "p (decimal)", "m"
    );
    for r in &out.rows {
        let _ = writeln!(
            text,
            "{:<12} {:<18} {:>10} {:>12} {:>4}{}",
            r.group,
            r.mechanism.name(),
            display(&r.p),
            decimal_string(&r.p, 6),
            r.m_int,
            if r.epsilon_flag { "  (+eps)" } else { "" }
        );
    }
    let _ = writeln!(text, "{} rows", out.rows.len());

    let csv_rows = out
        .rows
        .iter()
        .map(|r| {
            let repr = RatRepr::from(&r.p);
            vec![
                r.group.clone(),
                r.mechanism.name().to_string(),
                r.n.to_string(),
                opt_str(&r.m),
                repr.num,
                repr.den,
                repr.decimal,
                r.m_int.to_string(),
                r.epsilon_flag.to_string(),
            ]
        })
        .collect();
    let csv = csv_from_rows(
        &[
            "group",
            "mechanism",
            "n",
            "m",
            "p_num",
            "p_den",
            "p_decimal",
            "m_int",
            "epsilon_flag",
        ],
        csv_rows,
    )?;

    sink.emit(text, &out, Some(csv))
}

// ─────────────────────────────────────────────────────────────────────────────
// hc
// ─────────────────────────────────────────────────────────────────────────────

#[derive(Serialize)]
struct HcPointRow {
    t: f64,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    std_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    /// Independent dense-quadrature value, where the backend exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    quadrature_reference: Option<f64>,
}

#[derive(Serialize)]
struct HcEstimateOut {
    group: String,
    method: Method,
    points: Vec<HcPointRow>,
}

fn quadrature_value(group: &GroupSpec, t: f64) -> Option<f64> {
    use decaylab::catalog::Family;
    if group.family == Family::Sl && group.n == 2 {
        match group.field {
            FieldKind::Real => Some(quadrature::xi_sl2_real(t)),
            FieldKind::Complex => Some(quadrature::xi_sl2_complex(t)),
            _ => None,
        }
    } else {
        None
    }
}

fn cmd_hc(args: &HcArgs, defaults: &FileDefaults, sink: &Sink) -> Result<(), AppError> {
    let group = args.group.parse()?;
    let method = parse_method(args.method.as_deref())?;
    let samples = args.samples.or(defaults.samples).unwrap_or(100_000);
    let seed = args.seed.or(defaults.seed).unwrap_or(11);

    if let Some(epsilon) = args.epsilon {
        // Envelope-check mode.
        let grid_spec = args.t_grid.as_deref().ok_or_else(|| {
            AppError::Usage("--epsilon (envelope check) requires --t-grid".into())
        })?;
        let grid = parse_t_grid(grid_spec)?;
        let report = hc_bound_check(&group, &grid, epsilon, method, samples, seed)?;

        let mut text = format!(
            "group {}, method {}, epsilon {}\n\n",
            report.group,
            match report.method {
                Method::MonteCarlo => "monte_carlo",
                Method::Quadrature => "quadrature",
            },
            report.epsilon
        );
        let _ = writeln!(
            text,
            "{:>8} {:>14} {:>12} {:>14} {:>14}",
            "t", "xi", "std_error", "lower r(t)", "upper u(t)"
        );
        for p in &report.points {
            let _ = writeln!(
                text,
                "{:>8} {:>14.8} {:>12} {:>14.8} {:>14.8}",
                p.t,
                p.xi,
                p.std_error
                    .map(|s| format!("{s:.2e}"))
                    .unwrap_or_default(),
                p.lower,
                p.upper
            );
        }
        let _ = writeln!(
            text,
            "\nlower bound (r > 0):            {}",
            if report.pass_lower { "PASS" } else { "FAIL" }
        );
        let _ = writeln!(
            text,
            "upper bound (u decreasing past peak at index {}): {}",
            report.peak_index,
            if report.pass_upper { "PASS" } else { "FAIL" }
        );

        let csv_rows = report
            .points
            .iter()
            .map(|p| {
                vec![
                    p.t.to_string(),
                    p.xi.to_string(),
                    opt_str(&p.std_error),
                    p.lower.to_string(),
                    p.upper.to_string(),
                ]
            })
            .collect();
        let csv = csv_from_rows(&["t", "xi", "std_error", "lower", "upper"], csv_rows)?;

        let passed = report.pass_lower && report.pass_upper;
        sink.emit(text, &report, Some(csv))?;
        if !passed {
            return Err(AppError::Invariant(format!(
                "envelope check failed (lower {}, upper {})",
                report.pass_lower, report.pass_upper
            )));
        }
        return Ok(());
    }

    // Point-estimate mode.
    let t_spec = args
        .t
        .as_deref()
        .ok_or_else(|| AppError::Usage("hc needs --t (or --epsilon with --t-grid)".into()))?;
    let ts = parse_float_list(t_spec, "t")?;
    let mut points = Vec::new();
    for &t in &ts {
        let point = CartanPoint::scalar(group.clone(), t)?;
        let row = match method {
            Method::MonteCarlo => {
                let est = hc_estimate(&point, samples, seed)?;
                HcPointRow {
                    t,
                    value: est.value,
                    std_error: Some(est.std_error),
                    n_samples: Some(est.n_samples),
                    seed: Some(est.seed),
                    quadrature_reference: quadrature_value(&group, t),
                }
            }
            Method::Quadrature => {
                let value = quadrature_value(&group, t).ok_or_else(|| {
                    HcError::QuadratureUnsupported(group.id())
                })?;
                HcPointRow {
                    t,
                    value,
                    std_error: None,
                    n_samples: None,
                    seed: None,
                    quadrature_reference: None,
                }
            }
        };
        points.push(row);
    }
    let out = HcEstimateOut {
        group: group.id(),
        method,
        points,
    };

    let mut text = format!("group {}\n\n", out.group);
    let _ = writeln!(
        text,
        "{:>8} {:>14} {:>12} {:>14}",
        "t", "value", "std_error", "quad_ref"
    );
    for p in &out.points {
        let _ = writeln!(
            text,
            "{:>8} {:>14.8} {:>12} {:>14}",
            p.t,
            p.value,
            p.std_error.map(|s| format!("{s:.2e}")).unwrap_or_default(),
            p.quadrature_reference
                .map(|q| format!("{q:.8}"))
                .unwrap_or_default()
        );
    }

    let csv_rows = out
        .points
        .iter()
        .map(|p| {
            vec![
                p.t.to_string(),
                p.value.to_string(),
                opt_str(&p.std_error),
                opt_str(&p.n_samples),
                opt_str(&p.seed),
                opt_str(&p.quadrature_reference),
            ]
        })
        .collect();
    let csv = csv_from_rows(
        &["t", "value", "std_error", "n_samples", "seed", "quadrature_reference"],
        csv_rows,
    )?;

    sink.emit(text, &out, Some(csv))
}

// ─────────────────────────────────────────────────────────────────────────────
// kazhdan
// ─────────────────────────────────────────────────────────────────────────────

fn cmd_kazhdan(args: &KazhdanArgs, defaults: &FileDefaults, sink: &Sink) -> Result<(), AppError> {
    let group = args.group.parse()?;
    let rep = parse_rep(&args.rep)?;
    let samples = args.samples.or(defaults.samples).unwrap_or(50_000);
    let seed = args.seed.or(defaults.seed).unwrap_or(11);
    let h = CartanPoint::scalar(group.clone(), args.t).map_err(KazhdanError::from)?;
    let report = kazhdan_for_set(&group, &rep, &h, samples, seed)?;

    let mut text = format!(
        "group {}, representation {}, witness t = {}\n\n",
        report.group, report.rep, args.t
    );
    let _ = writeln!(text, "exponent construction: {}", report.provenance.name());
    let _ = writeln!(
        text,
        "p = {} ({}), m = {}",
        display(&report.p),
        decimal_string(&report.p, 6),
        report.m
    );
    let _ = writeln!(
        text,
        "xi estimate = {:.8} +/- {:.2e}  (n = {}, seed = {})",
        report.xi.value, report.xi.std_error, report.xi.n_samples, report.xi.seed
    );
    let _ = writeln!(text, "xi^(1/m) = {:.8}", report.xi_pow);
    let _ = writeln!(text, "kappa(K, h) >= {:.8}", report.kappa);

    let repr = RatRepr::from(&report.p);
    let csv = csv_from_rows(
        &[
            "group", "rep", "provenance", "p_num", "p_den", "p_decimal", "m", "t", "xi",
            "xi_std_error", "n_samples", "seed", "xi_pow", "kappa",
        ],
        vec![vec![
            report.group.clone(),
            report.rep.clone(),
            report.provenance.name().to_string(),
            repr.num,
            repr.den,
            repr.decimal,
            report.m.to_string(),
            args.t.to_string(),
            report.xi.value.to_string(),
            report.xi.std_error.to_string(),
            report.xi.n_samples.to_string(),
            report.xi.seed.to_string(),
            report.xi_pow.to_string(),
            report.kappa.to_string(),
        ]],
    )?;

    sink.emit(text, &report, Some(csv))
}

// ─────────────────────────────────────────────────────────────────────────────
// orbit-pack
// ─────────────────────────────────────────────────────────────────────────────

#[derive(Serialize)]
struct PackPoint {
    c0: f64,
    count: u64,
    violations: u64,
}

#[derive(Serialize)]
struct OrbitPackOut {
    example: ShellExample,
    claimed_exponent: f64,
    grid_resolution: u32,
    samples_per_pair: u64,
    seed: u64,
    points: Vec<PackPoint>,
    gamma_fit: f64,
    r2: f64,
}

fn cmd_orbit_pack(
    args: &OrbitPackArgs,
    defaults: &FileDefaults,
    sink: &Sink,
) -> Result<(), AppError> {
    let example = ShellExample::parse(&args.example)?;
    let grid = parse_c0_grid(&args.c0_grid)?;
    let samples = args.samples.or(defaults.samples).unwrap_or(20_000);
    let seed = args.seed.or(defaults.seed).unwrap_or(11);

    let mut points = Vec::new();
    let mut fit_input = Vec::new();
    let mut total_violations = 0u64;
    for &c0 in &grid {
        let result = greedy_pack(example, c0, args.grid_resolution, samples, seed)?;
        total_violations += result.violations;
        fit_input.push((c0, result.count));
        points.push(PackPoint {
            c0,
            count: result.count,
            violations: result.violations,
        });
    }
    let (gamma_fit, r2) = fit_gamma(&fit_input)?;
    let out = OrbitPackOut {
        example,
        claimed_exponent: example.claimed_exponent(),
        grid_resolution: args.grid_resolution,
        samples_per_pair: samples,
        seed,
        points,
        gamma_fit,
        r2,
    };

    let mut text = format!(
        "example {}, claimed exponent {}\n\n",
        example.name(),
        out.claimed_exponent
    );
    let _ = writeln!(text, "{:>14} {:>8} {:>12}", "c0", "count", "violations");
    for p in &out.points {
        let _ = writeln!(text, "{:>14.8} {:>8} {:>12}", p.c0, p.count, p.violations);
    }
    let _ = writeln!(
        text,
        "\nfitted exponent = {:.4} (r^2 = {:.4}), seed = {}, {} samples/pair",
        out.gamma_fit, out.r2, out.seed, out.samples_per_pair
    );

    let csv_rows = out
        .points
        .iter()
        .map(|p| {
            vec![
                p.c0.to_string(),
                p.count.to_string(),
                p.violations.to_string(),
            ]
        })
        .collect();
    let csv = csv_from_rows(&["c0", "count", "violations"], csv_rows)?;

    sink.emit(text, &out, Some(csv))?;
    if total_violations > 0 {
        return Err(AppError::Invariant(format!(
            "{total_violations} retained pairs failed re-verification"
        )));
    }
    Ok(())
}

// ─────────────────────────────────────────────────────────────────────────────
// verify
// ─────────────────────────────────────────────────────────────────────────────

fn cmd_verify(args: &VerifyArgs, sink: &Sink) -> Result<(), AppError> {
    let fault = match args.inject_fault.as_deref() {
        None => None,
        Some("delta-b") | Some("delta_b") => Some(Fault::DeltaB),
        Some(other) => {
            return Err(AppError::Usage(format!(
                "unknown fault `{other}` (expected delta-b)"
            )))
        }
    };
    let report = run_with_fault(args.only.as_deref(), fault)?;

    let mut text = String::new();
    for (suite, total, failed) in report.suite_counts() {
        let _ = writeln!(text, "{suite}: {total} checks, {failed} failures");
    }
    for outcome in report.outcomes.iter().filter(|o| !o.passed) {
        let _ = writeln!(
            text,
            "FAIL {}/{} ({}): {}",
            outcome.suite, outcome.check, outcome.subject, outcome.detail
        );
    }
    let _ = writeln!(
        text,
        "{}",
        if report.passed {
            "all suites passed"
        } else {
            "verification FAILED"
        }
    );

    let csv_rows = report
        .outcomes
        .iter()
        .map(|o| {
            vec![
                o.suite.clone(),
                o.check.clone(),
                o.subject.clone(),
                o.passed.to_string(),
                o.detail.clone(),
            ]
        })
        .collect();
    let csv = csv_from_rows(&["suite", "check", "subject", "passed", "detail"], csv_rows)?;

    let passed = report.passed;
    let first = report.first_failure.clone();
    sink.emit(text, &report, Some(csv))?;
    if !passed {
        return Err(AppError::Invariant(format!(
            "first failing invariant: {}",
            first.unwrap_or_else(|| "unknown".into())
        )));
    }
    Ok(())
}

// ─────────────────────────────────────────────────────────────────────────────
// Entry point
// ─────────────────────────────────────────────────────────────────────────────

fn run(cli: &Cli) -> Result<(), AppError> {
    let defaults = load_defaults(cli.config.as_deref())?;
    let sink = Sink::resolve(cli, &defaults);
    match &cli.command {
        Command::Exponents(args) => cmd_exponents(args, &sink),
        Command::Table(args) => cmd_table(args, &sink),
        Command::Hc(args) => cmd_hc(args, &defaults, &sink),
        Command::Kazhdan(args) => cmd_kazhdan(args, &defaults, &sink),
        Command::OrbitPack(args) => cmd_orbit_pack(args, &defaults, &sink),
        Command::Verify(args) => cmd_verify(args, &sink),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

// ─────────────────────────────────────────────────────────────────────────────
// Tests
// ─────────────────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;

    fn group_args(group: &str, n: Option<u32>, m: Option<u32>, field: Option<&str>) -> GroupArgs {
        GroupArgs {
            group: group.to_string(),
            n,
            m,
            field: field.map(str::to_string),
        }
    }

    #[test]
    fn group_tokens_parse() {
        let cases = [
            (group_args("sl2", None, None, None), "SL(2,R)"),
            (group_args("sl3", None, None, Some("H")), "SL(3,H)"),
            (group_args("sl", Some(4), None, Some("complex")), "SL(4,C)"),
            (group_args("sp2n", Some(3), None, None), "Sp(6,C)"),
            (group_args("so01n", Some(4), None, None), "SO0(1,4)"),
            (group_args("so1n", Some(4), None, None), "SO0(1,4)"),
            (group_args("su1n", Some(3), None, None), "SU(1,3)"),
            (group_args("sp1n", Some(2), None, None), "Sp(1,2)"),
            (group_args("sunm", Some(2), Some(3), None), "SU(2,3)"),
            (group_args("spnm", Some(3), Some(4), None), "Sp(3,4)"),
        ];
        for (args, expected) in cases {
            assert_eq!(args.parse().unwrap().id(), expected);
        }
    }

    #[test]
    fn group_tokens_reject_malformed_input() {
        assert!(matches!(
            group_args("e8", None, None, None).parse(),
            Err(AppError::Usage(_))
        ));
        assert!(matches!(
            group_args("sl", None, None, None).parse(),
            Err(AppError::Usage(_))
        ));
        assert!(matches!(
            group_args("sunm", Some(2), None, None).parse(),
            Err(AppError::Usage(_))
        ));
        assert!(matches!(
            group_args("sl2", None, None, Some("octonion")).parse(),
            Err(AppError::Usage(_))
        ));
    }

    #[test]
    fn t_grid_accepts_ranges_and_lists() {
        assert_eq!(parse_t_grid("1:4").unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(parse_t_grid("0.5, 2").unwrap(), vec![0.5, 2.0]);
        assert_eq!(parse_t_grid("3:3").unwrap(), vec![3.0]);
        assert!(parse_t_grid("4:1").is_err());
        assert!(parse_t_grid("a:b").is_err());
    }

    #[test]
    fn c0_grid_accepts_power_ranges_in_either_direction() {
        let down = parse_c0_grid("2^-4:2^-6").unwrap();
        assert_eq!(down, vec![0.0625, 0.03125, 0.015625]);
        let up = parse_c0_grid("2^-6:2^-4").unwrap();
        assert_eq!(up, vec![0.015625, 0.03125, 0.0625]);
        assert_eq!(parse_c0_grid("0.1,0.05").unwrap(), vec![0.1, 0.05]);
        assert!(parse_c0_grid("2^-4:8").is_err());
    }

    #[test]
    fn config_parser_handles_comments_and_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ok.conf");
        std::fs::write(&path, "# comment\n\nformat = csv\nsamples = 500\n").unwrap();
        let defaults = load_defaults(Some(path.as_path())).unwrap();
        assert_eq!(defaults.format, Some(Format::Csv));
        assert_eq!(defaults.samples, Some(500));
        assert_eq!(defaults.seed, None);

        let bad = dir.path().join("bad.conf");
        std::fs::write(&bad, "volume = 11\n").unwrap();
        assert!(matches!(
            load_defaults(Some(bad.as_path())),
            Err(AppError::Usage(_))
        ));

        let split = dir.path().join("split.conf");
        std::fs::write(&split, "format json\n").unwrap();
        assert!(matches!(
            load_defaults(Some(split.as_path())),
            Err(AppError::Usage(_))
        ));
    }

    #[test]
    fn method_parser_covers_aliases() {
        assert_eq!(parse_method(None).unwrap(), Method::MonteCarlo);
        assert_eq!(parse_method(Some("mc")).unwrap(), Method::MonteCarlo);
        assert_eq!(parse_method(Some("quadrature")).unwrap(), Method::Quadrature);
        assert!(parse_method(Some("exact")).is_err());
    }
}
