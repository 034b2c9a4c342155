//! The `discspace` command line. Every subcommand writes one JSON document
//! to stdout; errors go to stderr as `{"error": kind, "message": text}`.
//!
//! Exit codes: 0 success, 1 a check that ran and failed, 2 parameter or
//! unsupported-input errors, 3 an inconclusive outcome, 64 malformed argv.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::decision::{self, includes, superposition_class, Space};
use crate::descriptor::{family_descriptor, parse_function_str, parse_symbol_str};
use crate::error::{Error, Result};
use crate::lacunary::TriState;
use crate::report::{to_json, write_plot, Settings};
use crate::series::AnalyticFunction;
use crate::suite;
use crate::symbols::{default_radii, EntireSymbol};
use crate::witnesses::{self, criterion_for, quadrature_for, report_verdict, VerifyConfig, Witness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_PARAM: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable naming a `key = value` settings file.
pub const CONFIG_ENV: &str = "DISCSPACE_CONFIG";

#[derive(Parser, Debug)]
#[command(
    name = "discspace",
    version,
    about = "Function spaces on the disc and superposition operators between them"
)]
struct Cli {
    /// Override a setting, as in the config file (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quadrature norm of a function along the radius ladder
    Norm {
        #[arg(long)]
        space: String,
        /// Descriptor JSON, or @path to a file holding it
        #[arg(long)]
        function: String,
        /// Write the ladder as two-column `r value` text
        #[arg(long)]
        plot_out: Option<PathBuf>,
    },
    /// Membership by coefficient criterion, falling back to quadrature
    Member {
        #[arg(long)]
        space: String,
        #[arg(long)]
        function: String,
    },
    /// Order, type and class of an entire symbol
    OrderType {
        #[arg(long)]
        symbol: String,
    },
    /// Which symbols map X into Y; with --symbol, whether that one does
    Decide {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        symbol: Option<String>,
    },
    /// Whether X is contained in Y
    Include {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Build a witness function and check its claimed memberships
    Witness {
        kind: WitnessKind,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        /// Number of gap terms
        #[arg(long, default_value_t = crate::lacunary::DEFAULT_K_MAX)]
        len: usize,
        #[arg(long)]
        no_verify: bool,
    },
    /// Run a check suite; exits 0 iff every check passes
    Verify {
        #[arg(long, default_value = "paper")]
        suite: SuiteName,
        /// Comma-separated check numbers; all by default
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WitnessKind {
    BesovNotQs,
    DtNotQs,
    QsNotDt,
    UnboundedDt,
    Girela,
    Nowak,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteName {
    Paper,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Branch => "branch",
        Error::UnsupportedRepresentation(_) => "unsupported-representation",
        Error::TooFewTerms => "too-few-terms",
        Error::Parameter(_) => "parameter",
        Error::OverflowGuard(_) => "overflow",
        Error::Inconclusive(_) => "inconclusive",
        Error::Singularity => "singularity",
        Error::UnsupportedSpace(_) => "unsupported-space",
        Error::UnsupportedPair(_) => "unsupported-pair",
        Error::Descriptor(_) => "descriptor",
        Error::Table(_) => "table",
        Error::NotConstructible(_) => "not-constructible",
    }
}

/// A finished subcommand: the JSON document and its exit code.
struct Output {
    doc: Value,
    code: i32,
}

impl Output {
    fn ok(doc: Value) -> Self {
        Output { doc, code: EXIT_OK }
    }

    fn by_verdict(doc: Value, v: TriState) -> Self {
        let code = if v == TriState::Unknown { EXIT_INCONCLUSIVE } else { EXIT_OK };
        Output { doc, code }
    }
}

fn value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn read_arg(text: &str) -> Result<String> {
    match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::param(format!("reading {path}: {e}"))),
        None => Ok(text.to_string()),
    }
}

fn function_arg(text: &str) -> Result<AnalyticFunction> {
    parse_function_str(&read_arg(text)?)
}

fn symbol_arg(text: &str) -> Result<EntireSymbol> {
    parse_symbol_str(&read_arg(text)?)
}

fn settings(overrides: &[String]) -> Result<Settings> {
    let mut s = Settings::default();
    if let Some(path) = std::env::var_os(CONFIG_ENV) {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::param(format!("reading {}: {e}", PathBuf::from(&path).display())))?;
        s.apply_config(&text)?;
    }
    for kv in overrides {
        if !kv.contains('=') {
            return Err(Error::param(format!("--set expects KEY=VALUE, got {kv:?}")));
        }
        // one line of the config grammar, validated the same way
        s.apply_config(kv)?;
    }
    Ok(s)
}

fn spaces_json(x: &Space, y: &Space) -> Value {
    json!({"X": x.to_string(), "Y": y.to_string()})
}

fn verify_config(s: &Settings) -> VerifyConfig {
    VerifyConfig {
        k_max: s.k_max,
        ..VerifyConfig::default()
    }
}

fn norm(s: &Settings, space: &str, function: &str, plot_out: Option<PathBuf>) -> Result<Output> {
    let raw: Space = space.parse()?;
    let space = raw.normalize()?;
    let f = function_arg(function)?;
    let report = quadrature_for(&f, &space, &s.quadrature)?;
    if let Some(path) = plot_out {
        write_plot(&path, &report.ladder)?;
    }
    let verdict = report_verdict(&report);
    Ok(Output::by_verdict(
        json!({"space": raw.to_string(), "normalized": space.to_string(), "verdict": verdict, "report": value(&report)}),
        verdict,
    ))
}

fn member(s: &Settings, space: &str, function: &str) -> Result<Output> {
    let raw: Space = space.parse()?;
    let space = raw.normalize()?;
    let f = function_arg(function)?;
    let mut notes = Vec::new();
    let criterion = criterion_for(&f, &space, &verify_config(s), &mut notes)?;
    let (verdict, method, detail) = match criterion {
        Some(m) if m.verdict != TriState::Unknown => (m.verdict, "criterion", value(&m)),
        other => {
            if let Some(m) = other {
                notes.push(format!("{} criterion was inconclusive", m.criterion.as_str()));
            }
            let report = quadrature_for(&f, &space, &s.quadrature)?;
            (report_verdict(&report), "quadrature", value(&report))
        }
    };
    Ok(Output::by_verdict(
        json!({
            "space": raw.to_string(),
            "normalized": space.to_string(),
            "verdict": verdict,
            "method": method,
            "detail": detail,
            "notes": notes,
        }),
        verdict,
    ))
}

fn order_type(s: &Settings, symbol: &str) -> Result<Output> {
    let phi = symbol_arg(symbol)?;
    let c = phi.classify(&s.symbol)?;
    let radii = default_radii();
    // the classifier skips the growth fit for polynomials; report it anyway when it succeeds
    let order = match c.order {
        Some(o) => Some(o),
        None => phi.estimate_order(&radii).ok(),
    };
    let code = if c.boundary { EXIT_INCONCLUSIVE } else { EXIT_OK };
    Ok(Output {
        doc: json!({"class": c.class, "boundary": c.boundary, "order": order, "type": c.type_estimate}),
        code,
    })
}

fn decide(s: &Settings, from: &str, to: &str, symbol: Option<&str>) -> Result<Output> {
    let (x, y): (Space, Space) = (from.parse()?, to.parse()?);
    let v = superposition_class(&x, &y)?;
    let mut doc = json!({
        "verdict_class": v.class,
        "citation": v.citation,
        "normalized": spaces_json(&v.normalized.0, &v.normalized.1),
        "route": v.route,
        "region": v.region,
    });
    if let Some(sym) = symbol {
        let d = decision::decide(&x, &y, &symbol_arg(sym)?, &s.symbol)?;
        doc["answer"] = value(&d.answer);
        doc["symbol"] = value(&d.symbol);
    }
    Ok(Output::ok(doc))
}

fn include(from: &str, to: &str) -> Result<Output> {
    let (x, y): (Space, Space) = (from.parse()?, to.parse()?);
    let inc = includes(&x, &y)?;
    let doc = json!({
        "verdict": inc.verdict,
        "citation": inc.citation,
        "normalized": spaces_json(&x.normalize()?, &y.normalize()?),
        "route": inc.route,
    });
    Ok(Output::by_verdict(doc, inc.verdict))
}

fn need(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| Error::param(format!("this witness needs --{name}")))
}

fn witness(
    s: &Settings,
    kind: WitnessKind,
    p: Option<f64>,
    alpha: Option<f64>,
    sv: Option<f64>,
    len: usize,
    verify: bool,
) -> Result<Output> {
    let mut branch = None;
    let w: Witness = match kind {
        WitnessKind::BesovNotQs => witnesses::besov_not_qs(need(p, "p")?, need(sv, "s")?, len)?,
        WitnessKind::DtNotQs => witnesses::dirichlet_type_not_qs(need(p, "p")?, need(alpha, "alpha")?, need(sv, "s")?, len)?,
        WitnessKind::QsNotDt => {
            let (w, b) = witnesses::qs_not_dirichlet_type(need(p, "p")?, need(alpha, "alpha")?, need(sv, "s")?, len)?;
            branch = Some(match b {
                witnesses::Thm8Branch::Strict => "strict",
                witnesses::Thm8Branch::Boundary => "boundary",
            });
            w
        }
        WitnessKind::UnboundedDt => witnesses::unbounded_in_dirichlet_type(need(p, "p")?, need(alpha, "alpha")?)?,
        WitnessKind::Girela => witnesses::girela_function()?,
        WitnessKind::Nowak => witnesses::nowak_function()?,
    };
    let claims: Vec<Value> = w
        .claims
        .iter()
        .map(|(sp, t)| json!({"space": sp.to_string(), "expected": t}))
        .collect();
    let mut doc = json!({
        "function": family_descriptor(&w.family, len),
        "claims": claims,
    });
    if let Some(b) = branch {
        doc["branch"] = json!(b);
    }
    let mut code = EXIT_OK;
    if verify {
        let report = w.verify(&verify_config(s))?;
        if !report.pass() {
            code = EXIT_FAILED;
        }
        doc["report"] = value(&report);
    }
    Ok(Output { doc, code })
}

fn verify(criteria: &[u8]) -> Result<Output> {
    if let Some(bad) = criteria.iter().find(|&&c| !(1..=10).contains(&c)) {
        return Err(Error::param(format!("no check numbered {bad}")));
    }
    let results = suite::run(criteria);
    let pass = results.iter().all(|r| r.pass);
    Ok(Output {
        doc: json!({"suite": "paper", "pass": pass, "results": value(&results)}),
        code: if pass { EXIT_OK } else { EXIT_FAILED },
    })
}

fn dispatch(cli: Cli) -> Result<Output> {
    let s = settings(&cli.set)?;
    match cli.command {
        Command::Norm { space, function, plot_out } => norm(&s, &space, &function, plot_out),
        Command::Member { space, function } => member(&s, &space, &function),
        Command::OrderType { symbol } => order_type(&s, &symbol),
        Command::Decide { from, to, symbol } => decide(&s, &from, &to, symbol.as_deref()),
        Command::Include { from, to } => include(&from, &to),
        Command::Witness {
            kind,
            p,
            alpha,
            s: sv,
            len,
            no_verify,
        } => witness(&s, kind, p, alpha, sv, len, !no_verify),
        Command::Verify {
            suite: SuiteName::Paper,
            criteria,
        } => verify(&criteria),
    }
}

/// Runs one command line. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli) {
        Ok(o) => {
            let _ = writeln!(out, "{}", to_json(&o.doc));
            o.code
        }
        Err(e) => {
            let code = if matches!(e, Error::Inconclusive(_)) {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_PARAM
            };
            let _ = writeln!(err, "{}", to_json(&json!({"error": error_kind(&e), "message": e.to_string()})));
            code
        }
    }
}
