//! `fqequiv`: counts and representatives of equivalence classes of rational
//! functions and polynomials over finite fields.

mod grid;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fqequiv::classify::{self, ClassifyError};
use fqequiv::oracle::{self, rational_orbits, KeySpace, OracleError, VerificationReport, VerifyKind};
use fqequiv::polyring::PolyRing;
use fqequiv::ratmap::{subfield_key, RatError};
use fqequiv::{counting, BigCount, CountError, Elem, FieldCtx, DEFAULT_KEY_BUDGET};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Failed(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) | CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Budget { .. } | OracleError::Rat(RatError::BudgetExceeded { .. }) => {
                CliError::Budget(format!("{e}; raise --budget to run it"))
            }
            OracleError::Count(c) => c.into(),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::NotPrimePower(_) | CountError::InvalidArgument { .. } => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Oracle(o) => o.into(),
            ClassifyError::Count(c) => c.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "fqequiv", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for enumeration (default: all cores)
    #[arg(long, global = true, env = "FQEQUIV_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Number of classes for a single (q, n)
    Count(CountArgs),
    /// Counts over a grid of (q, n)
    Table(TableArgs),
    /// Compare closed forms with brute-force enumeration
    Verify(VerifyArgs),
    /// List class representatives
    Classify(ClassifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Rational,
    Poly,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Rational => "rational",
            Kind::Poly => "poly",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Closed-form count
    Formula,
    /// Burnside sum with enumerated fixed points
    Burnside,
    /// Explicit orbit enumeration
    Orbit,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    #[value(name = "fix")]
    Fix,
    #[value(name = "frakN")]
    FrakN,
    #[value(name = "frakM")]
    FrakM,
    #[value(name = "appendix")]
    Appendix,
}

impl From<KindArg> for VerifyKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Fix => VerifyKind::FixFormulas,
            KindArg::FrakN => VerifyKind::FrakN,
            KindArg::FrakM => VerifyKind::FrakM,
            KindArg::Appendix => VerifyKind::AppendixLemmas,
        }
    }
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write output to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long, value_enum, default_value = "rational")]
    kind: Kind,
    /// Field order
    #[arg(long)]
    q: String,
    /// Degree
    #[arg(long)]
    n: String,
    #[arg(long, value_enum, default_value = "formula")]
    method: Method,
    /// Largest enumeration the oracle methods may attempt
    #[arg(long, default_value_t = DEFAULT_KEY_BUDGET)]
    budget: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_enum, default_value = "rational")]
    kind: Kind,
    /// Field orders: `q`, `q1,q2,...` or inclusive `a..b` (prime powers only)
    #[arg(long)]
    q: String,
    /// Degrees: `n`, `n1,n2,...` or inclusive `a..b`
    #[arg(long)]
    n: String,
    #[arg(long, value_enum, default_value = "formula")]
    method: Method,
    #[arg(long, default_value_t = DEFAULT_KEY_BUDGET)]
    budget: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "2,3,4,5")]
    q: String,
    #[arg(long, default_value = "1..3")]
    n: String,
    /// Checks to run
    #[arg(long, value_enum, value_delimiter = ',', default_value = "fix,frakN,frakM,appendix")]
    kinds: Vec<KindArg>,
    #[arg(long, default_value_t = DEFAULT_KEY_BUDGET)]
    budget: u64,
    /// Treat cells skipped for budget as an error (exit 3)
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, value_enum, default_value = "poly")]
    kind: Kind,
    #[arg(long)]
    q: String,
    #[arg(long)]
    n: String,
    #[arg(long, default_value_t = DEFAULT_KEY_BUDGET)]
    budget: u64,
    #[command(flatten)]
    output: Output,
}

/// One `(q, n)` cell of a count table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct CountRow {
    q: u64,
    n: u64,
    kind: Kind,
    #[serde(with = "fqequiv::counting::count_string")]
    count: BigCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct PolyEntry {
    rep: String,
    /// Constant term first.
    coeffs: Vec<Elem>,
    orbit_size: u64,
    family: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RationalEntry {
    rep: String,
    num: Vec<Elem>,
    den: Vec<Elem>,
    /// Number of degree-`n` subfields in the class.
    orbit_size: u64,
}

fn count_cell(kind: Kind, method: Method, q: u64, n: u64, budget: u64) -> Result<BigCount, CliError> {
    if method == Method::Formula {
        return Ok(match kind {
            Kind::Rational => counting::frak_n(q, n)?,
            Kind::Poly => counting::frak_m(q, n)?,
        });
    }
    let field = FieldCtx::of_order(q).map_err(|e| CliError::Usage(e.to_string()))?;
    let n = n as usize;
    Ok(match (kind, method) {
        (Kind::Rational, Method::Burnside) => oracle::burnside_count_rational(&field, n, budget)?,
        (Kind::Rational, _) => oracle::orbit_count_rational(&field, n, budget)?,
        (Kind::Poly, Method::Burnside) => oracle::burnside_count_poly(&field, n, budget)?,
        (Kind::Poly, _) => oracle::orbit_count_poly(&field, n, budget)?,
    })
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn csv_text<T: Serialize>(header: &[&str], rows: impl IntoIterator<Item = T>) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Failed(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn render_rows(rows: &[CountRow], format: Format, bare: bool) -> Result<String, CliError> {
    Ok(match format {
        Format::Text if bare => format!("{}\n", rows[0].count),
        Format::Text => rows
            .iter()
            .map(|r| format!("q={} n={} {} {}\n", r.q, r.n, r.kind.name(), r.count))
            .collect(),
        Format::Json if bare => json(&rows[0]),
        Format::Json => json(&rows),
        Format::Csv => csv_text(
            &["q", "n", "kind", "count"],
            rows.iter().map(|r| (r.q, r.n, r.kind.name(), r.count.to_string())),
        )?,
    })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn single(what: &str, values: Vec<u64>) -> Result<u64, CliError> {
    match values[..] {
        [v] => Ok(v),
        _ => Err(CliError::Usage(format!("--{what} takes a single value here; use `table` for grids"))),
    }
}

fn cmd_count(a: &CountArgs) -> Result<(), CliError> {
    let q = single("q", grid::parse_orders(&a.q)?)?;
    let n = single("n", grid::parse_degrees(&a.n)?)?;
    let count = count_cell(a.kind, a.method, q, n, a.budget)?;
    let rows = [CountRow { q, n, kind: a.kind, count }];
    emit(&render_rows(&rows, a.output.format, true)?, a.output.out.as_ref())
}

fn cmd_table(a: &TableArgs) -> Result<(), CliError> {
    let qs = grid::parse_orders(&a.q)?;
    let ns = grid::parse_degrees(&a.n)?;
    let mut rows = Vec::with_capacity(qs.len() * ns.len());
    for &q in &qs {
        for &n in &ns {
            let count = count_cell(a.kind, a.method, q, n, a.budget)?;
            rows.push(CountRow { q, n, kind: a.kind, count });
        }
    }
    emit(&render_rows(&rows, a.output.format, false)?, a.output.out.as_ref())
}

fn render_report(report: &VerificationReport, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => json(report),
        Format::Csv => csv_text(
            &["name", "q", "n", "expected", "actual", "pass", "elapsed_ms"],
            report.checks.iter().map(|c| {
                (&c.name, c.q, c.n, c.expected.to_string(), c.actual.to_string(), c.pass, c.elapsed_ms)
            }),
        )?,
        Format::Text => {
            let mut s: String = report
                .checks
                .iter()
                .map(|c| {
                    let status = if c.pass { "ok" } else { "FAIL" };
                    format!("{status} q={} n={} {}: expected {}, got {}\n", c.q, c.n, c.name, c.expected, c.actual)
                })
                .collect();
            let m = &report.summary;
            s.push_str(&format!("{} checks, {} failed, {} cells skipped\n", m.total, m.failed, m.skipped));
            s
        }
    })
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), CliError> {
    let qs = grid::parse_orders(&a.q)?;
    let ns = grid::parse_degrees(&a.n)?;
    let mut kinds: Vec<VerifyKind> = Vec::new();
    for k in &a.kinds {
        let k = VerifyKind::from(*k);
        if !kinds.contains(&k) {
            kinds.push(k);
        }
    }
    let report = oracle::verify_grid(&qs, &ns, &kinds, a.budget)?;
    emit(&render_report(&report, a.format)?, a.out.as_ref())?;
    let m = &report.summary;
    if m.failed > 0 {
        return Err(CliError::Failed(format!("{} of {} checks failed", m.failed, m.total)));
    }
    if a.strict && m.skipped > 0 {
        return Err(CliError::Budget(format!("{} cells skipped for budget", m.skipped)));
    }
    Ok(())
}

fn classify_poly(field: &FieldCtx, n: usize, budget: u64) -> Result<Vec<PolyEntry>, CliError> {
    let ring = PolyRing::new(field);
    Ok(classify::classify_all(field, n, budget)?
        .into_iter()
        .map(|r| PolyEntry {
            rep: ring.format(&r.canon),
            coeffs: r.canon.coeffs().to_vec(),
            orbit_size: r.orbit_size,
            family: r.family_tag,
        })
        .collect())
}

fn classify_rational(field: &FieldCtx, n: usize, budget: u64) -> Result<Vec<RationalEntry>, CliError> {
    let ring = PolyRing::new(field);
    let reps = match n {
        1 => vec![fqequiv::RationalMap::polynomial(&ring, &fqequiv::Polynomial::x()).expect("X has degree 1")],
        2 => classify::degree2_rational_reps(field),
        _ => {
            let why = if field.q() % 2 == 1 && n == 3 {
                "the classification of degree-3 rational functions over fields of odd order is unsolved"
            } else {
                "rational representatives are available only for n <= 2"
            };
            return Err(CliError::Usage(format!("cannot classify rational functions of degree {n}: {why}")));
        }
    };
    let space = KeySpace::build(field, n, budget)?;
    let orbits = rational_orbits(&space);
    let mut sizes = vec![0u64; orbits.count];
    for &l in &orbits.labels {
        sizes[l as usize] += 1;
    }
    Ok(reps
        .iter()
        .map(|g| {
            let code = space.codec().encode(&subfield_key(&ring, g));
            let label = orbits.labels[space.index_of(code).expect("every key is enumerated")];
            RationalEntry {
                rep: g.format(field),
                num: g.num().coeffs().to_vec(),
                den: g.den().coeffs().to_vec(),
                orbit_size: sizes[label as usize],
            }
        })
        .collect())
}

fn cmd_classify(a: &ClassifyArgs) -> Result<(), CliError> {
    let q = single("q", grid::parse_orders(&a.q)?)?;
    let n = single("n", grid::parse_degrees(&a.n)?)? as usize;
    let field = FieldCtx::of_order(q).map_err(|e| CliError::Usage(e.to_string()))?;
    let format = a.output.format;
    let text = match a.kind {
        Kind::Poly => {
            let entries = classify_poly(&field, n, a.budget)?;
            match format {
                Format::Json => json(&entries),
                Format::Csv => csv_text(
                    &["rep", "orbit_size", "family"],
                    entries.iter().map(|e| (&e.rep, e.orbit_size, e.family.as_deref().unwrap_or(""))),
                )?,
                Format::Text => entries
                    .iter()
                    .map(|e| match &e.family {
                        Some(tag) => format!("{}\torbit {}\t{tag}\n", e.rep, e.orbit_size),
                        None => format!("{}\torbit {}\n", e.rep, e.orbit_size),
                    })
                    .collect(),
            }
        }
        Kind::Rational => {
            let entries = classify_rational(&field, n, a.budget)?;
            match format {
                Format::Json => json(&entries),
                Format::Csv => csv_text(&["rep", "orbit_size"], entries.iter().map(|e| (&e.rep, e.orbit_size)))?,
                Format::Text => entries.iter().map(|e| format!("{}\torbit {}\n", e.rep, e.orbit_size)).collect(),
            }
        }
    };
    emit(&text, a.output.out.as_ref())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    match &cli.command {
        Command::Count(a) => cmd_count(a),
        Command::Table(a) => cmd_table(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Classify(a) => cmd_classify(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fqequiv: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
