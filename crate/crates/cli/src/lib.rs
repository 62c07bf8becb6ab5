//! Command implementations behind the `pinchcalc` binary.
//!
//! Every command returns its rendered output together with the process exit status,
//! so the binary stays a thin shell and the commands can be tested in-process.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use pinch_core::catalog::{standard_catalog, CatalogEntry, CatalogError, CatalogFilter, Family, ParamSurface, SurfaceSpec};
use pinch_core::chowlattice::{ModelError, SurfaceModel};
use pinch_core::exactalg::AlgError;
use pinch_core::harness::{
    format_table, rows_to_csv, run_suite, verify_inner_chain, Config, HarnessError, OutputFormat, Suite,
};
use pinch_core::projector::{
    exceptional_rank, jet_normalize, ram_length_with_retries, random_chart_point, AttemptOutcome, ProjectorError,
    RamReport, RamStatus,
};

/// Exit status for malformed input: bad flags, unknown surfaces, unreadable descriptors.
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_UNLUCKY: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Projector(#[from] ProjectorError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let alg = match self {
            CliError::Projector(ProjectorError::Alg(e)) => Some(e),
            CliError::Harness(HarnessError::Projector(ProjectorError::Alg(e))) => Some(e),
            _ => None,
        };
        match alg {
            Some(AlgError::BudgetExceeded(_)) => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pinchcalc", version, about = "Pinch points of generic projections of surfaces to P3")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Run configuration. Each option falls back to its environment variable, then to the default.
#[derive(Debug, Default, Args)]
pub struct GlobalArgs {
    /// Prime for the finite-field projection experiments [default: 32003]
    #[arg(long, global = true, env = "PINCH_PRIME")]
    pub prime: Option<u64>,
    /// Base seed for every random choice [default: 0]
    #[arg(long, global = true, env = "PINCH_SEED")]
    pub seed: Option<u64>,
    /// Resamples after a failed projection [default: 8]
    #[arg(long, global = true, env = "PINCH_RETRIES")]
    pub retries: Option<usize>,
    /// Jet truncation order [default: 4]
    #[arg(long, global = true, env = "PINCH_OMEGA")]
    pub omega: Option<u32>,
    /// table, csv or json [default: table]
    #[arg(long, global = true, env = "PINCH_FORMAT")]
    pub format: Option<String>,
    /// Gröbner budget: S-pairs processed [default: 200000]
    #[arg(long, global = true, env = "PINCH_MAX_PAIRS")]
    pub max_pairs: Option<usize>,
    /// Gröbner budget: largest S-polynomial degree [default: 60]
    #[arg(long, global = true, env = "PINCH_MAX_DEGREE")]
    pub max_degree: Option<u32>,
}

impl GlobalArgs {
    pub fn config(&self) -> Result<Config, CliError> {
        let mut c = Config::default();
        if let Some(p) = self.prime {
            c.prime = p;
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(r) = self.retries {
            c.retries = r;
        }
        if let Some(w) = self.omega {
            c.omega = w;
        }
        if let Some(f) = &self.format {
            c.format = f.parse()?;
        }
        if let Some(m) = self.max_pairs {
            c.max_pairs = m;
        }
        if let Some(m) = self.max_degree {
            c.max_degree = m;
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the standard catalog with its lattice invariants
    Catalog {
        #[arg(long)]
        max_n: Option<i64>,
        /// scrolls, veronese or delpezzo
        #[arg(long)]
        only: Option<String>,
    },
    /// Pinch number from the intersection lattice
    Pinch { surface: String },
    /// Project to P3 over GF(p) and measure the ramification ideal
    Project { surface: String },
    /// Iterate inner projection from a general point
    InnerChain {
        surface: String,
        /// Number of steps [default: down to P3]
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Local jets and the rank of the blown-up map along the exceptional curve
    Jets {
        surface: String,
        /// Chart point `s,t` (integers or fractions) [default: random immersive point]
        #[arg(long)]
        point: Option<String>,
    },
    /// Run a verification suite: bound, inner-chain, ruled, explicit or all
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Rendered output and exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let config = cli.global.config()?;
    match &cli.command {
        Command::Catalog { max_n, only } => {
            let only = only.as_deref().map(str::parse::<Family>).transpose()?;
            cmd_catalog(CatalogFilter { max_n: *max_n, only }, &config)
        }
        Command::Pinch { surface } => cmd_pinch(surface, &config),
        Command::Project { surface } => cmd_project(surface, &config),
        Command::InnerChain { surface, steps } => cmd_inner_chain(surface, *steps, &config),
        Command::Jets { surface, point } => cmd_jets(surface, point.as_deref(), &config),
        Command::Verify { suite } => cmd_verify(suite, &config),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogRow {
    pub name: String,
    #[serde(rename = "N")]
    pub n: i64,
    pub deg: i64,
    pub g: Option<i64>,
    pub pinch: i64,
    pub gamma2: i64,
    pub i: Option<i64>,
    pub classification: String,
}

impl CatalogRow {
    pub fn new(model: &SurfaceModel) -> Self {
        let (i, classification) = match model.classify() {
            Ok(c) => (Some(c.excess), c.branch.to_string()),
            Err(ModelError::TheoremViolation(_)) => {
                let diff = model.pinch_number() - model.bound();
                (Some(diff / 2), "theorem-violation".to_string())
            }
            Err(_) => (None, "invalid".to_string()),
        };
        CatalogRow {
            name: model.name().to_string(),
            n: model.ambient(),
            deg: model.degree(),
            g: model.genus(),
            pinch: model.pinch_number(),
            gamma2: model.class_degree(),
            i,
            classification,
        }
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

fn render_rows(rows: &[CatalogRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json(rows),
        OutputFormat::Csv => rows_to_csv(rows),
        OutputFormat::Table => {
            let header = ["name", "N", "deg", "g", "P", "gamma2", "i", "class"];
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        r.n.to_string(),
                        r.deg.to_string(),
                        opt(&r.g),
                        r.pinch.to_string(),
                        r.gamma2.to_string(),
                        opt(&r.i),
                        r.classification.clone(),
                    ]
                })
                .collect();
            format_table(&header, &cells)
        }
    }
}

pub fn resolve(spec: &str) -> Result<CatalogEntry, CliError> {
    let spec: SurfaceSpec = spec.parse()?;
    Ok(spec.resolve()?)
}

fn chart(entry: &CatalogEntry, config: &Config) -> Result<ParamSurface, CliError> {
    entry
        .chart(config.seed)?
        .ok_or_else(|| CliError::Usage(format!("{} has no explicit parametrization", entry.spec)))
}

pub fn cmd_catalog(filter: CatalogFilter, config: &Config) -> Result<Output, CliError> {
    let rows: Vec<CatalogRow> = standard_catalog(&filter).iter().map(|e| CatalogRow::new(&e.model)).collect();
    Ok(Output::ok(render_rows(&rows, config.format)))
}

pub fn cmd_pinch(spec: &str, config: &Config) -> Result<Output, CliError> {
    let entry = resolve(spec)?;
    let row = CatalogRow::new(&entry.model);
    let text = match config.format {
        OutputFormat::Table => format!("{}\n", row.pinch),
        f => render_rows(&[row], f),
    };
    Ok(Output::ok(text))
}

fn ram_exit_code(status: RamStatus) -> i32 {
    match status {
        RamStatus::Agree => 0,
        RamStatus::Disagree => EXIT_VIOLATION,
        RamStatus::ResourceExhausted => EXIT_RESOURCE,
        RamStatus::Unlucky => EXIT_UNLUCKY,
    }
}

fn describe(outcome: &AttemptOutcome) -> String {
    match outcome {
        AttemptOutcome::Length(l) => format!("length {l}"),
        AttemptOutcome::PositiveDimensional(d) => format!("positive dimensional ({d})"),
        AttemptOutcome::BudgetExceeded(m) => format!("budget exceeded: {m}"),
    }
}

fn render_ram(r: &RamReport, format: OutputFormat) -> String {
    #[derive(Serialize)]
    struct Row<'a> {
        surface: &'a str,
        prime: u64,
        seed: u64,
        attempt: usize,
        attempt_seed: u64,
        outcome: String,
        predicted: i64,
        status: RamStatus,
    }
    match format {
        OutputFormat::Json => json(r),
        OutputFormat::Csv => {
            let rows: Vec<Row> = r
                .attempts
                .iter()
                .enumerate()
                .map(|(k, a)| Row {
                    surface: &r.surface,
                    prime: r.prime,
                    seed: r.seed,
                    attempt: k,
                    attempt_seed: a.seed,
                    outcome: describe(&a.outcome),
                    predicted: r.predicted,
                    status: r.status,
                })
                .collect();
            rows_to_csv(&rows)
        }
        OutputFormat::Table => {
            let status = serde_json::to_value(r.status).expect("status serializes");
            let mut cells = vec![
                vec!["surface".to_string(), r.surface.clone()],
                vec!["prime".to_string(), r.prime.to_string()],
                vec!["seed".to_string(), r.seed.to_string()],
                vec!["predicted".to_string(), r.predicted.to_string()],
                vec!["length".to_string(), opt(&r.length)],
                vec!["status".to_string(), status.as_str().unwrap_or_default().to_string()],
            ];
            for (k, a) in r.attempts.iter().enumerate() {
                cells.push(vec![format!("attempt {k}"), format!("seed {}: {}", a.seed, describe(&a.outcome))]);
            }
            format_table(&["field", "value"], &cells)
        }
    }
}

pub fn cmd_project(spec: &str, config: &Config) -> Result<Output, CliError> {
    let entry = resolve(spec)?;
    let surface = chart(&entry, config)?;
    let report = ram_length_with_retries(&surface, config.prime, config.seed, config.retries, &config.budget())?;
    Ok(Output {
        text: render_ram(&report, config.format),
        code: ram_exit_code(report.status),
    })
}

pub fn cmd_inner_chain(spec: &str, steps: Option<usize>, config: &Config) -> Result<Output, CliError> {
    let entry = resolve(spec)?;
    let max = (entry.model.ambient() - 3).max(0) as usize;
    let steps = steps.unwrap_or(max);
    if steps > max {
        return Err(CliError::Usage(format!(
            "{} sits in P^{}; at most {max} inner projections reach P^3",
            entry.model.name(),
            entry.model.ambient()
        )));
    }
    let report = verify_inner_chain(&entry.model, steps, config);
    Ok(Output {
        text: report.render(config.format),
        code: report.exit_code(),
    })
}

#[derive(Debug, Serialize)]
pub struct JetReport {
    pub surface: String,
    pub point: [String; 2],
    pub omega: u32,
    pub coordinates: Vec<String>,
    pub h_on_e: Vec<String>,
    pub ramified_along_e: bool,
    pub drop_points: Option<usize>,
    pub verdict: String,
}

fn parse_point(text: &str) -> Result<[BigRational; 2], CliError> {
    let bad = || CliError::Usage(format!("point must be `s,t` with integer or fraction entries, got `{text}`"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [s, t] = parts.as_slice() else {
        return Err(bad());
    };
    Ok([s.parse().map_err(|_| bad())?, t.parse().map_err(|_| bad())?])
}

pub fn cmd_jets(spec: &str, point: Option<&str>, config: &Config) -> Result<Output, CliError> {
    let entry = resolve(spec)?;
    let surface = chart(&entry, config)?;
    let x = match point {
        Some(p) => parse_point(p)?,
        None => random_chart_point(&surface, config.seed)?.map(|v| BigRational::from_integer(v.into())),
    };
    let jets = jet_normalize(&surface, &x, config.omega)?;
    let rank = exceptional_rank(&jets)?;
    let verdict = if rank.ramified_along_e {
        "ramified along E (all h-polynomials vanish)"
    } else {
        "unramified along E (h-polynomials nonzero)"
    };
    let report = JetReport {
        surface: surface.name().to_string(),
        point: [x[0].to_string(), x[1].to_string()],
        omega: jets.omega,
        coordinates: jets.coordinates().iter().map(|c| c.to_string()).collect(),
        h_on_e: rank.h_on_e.iter().map(|h| h.to_string()).collect(),
        ramified_along_e: rank.ramified_along_e,
        drop_points: rank.drop_points,
        verdict: verdict.to_string(),
    };
    let text = match config.format {
        OutputFormat::Json => json(&report),
        OutputFormat::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                surface: &'a str,
                s: &'a str,
                t: &'a str,
                omega: u32,
                ramified_along_e: bool,
                drop_points: Option<usize>,
                h_on_e: String,
            }
            rows_to_csv(&[Row {
                surface: &report.surface,
                s: &report.point[0],
                t: &report.point[1],
                omega: report.omega,
                ramified_along_e: report.ramified_along_e,
                drop_points: report.drop_points,
                h_on_e: report.h_on_e.join(";"),
            }])
        }
        OutputFormat::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "surface: {}", report.surface);
            let _ = writeln!(out, "point: ({}, {})", report.point[0], report.point[1]);
            let _ = writeln!(out, "jets to order {}: [{}]", report.omega, report.coordinates.join(" : "));
            let _ = writeln!(out, "h on E: [{}]", report.h_on_e.join(", "));
            if let Some(d) = report.drop_points {
                let _ = writeln!(out, "rank drops at {d} point(s) of E");
            }
            let _ = writeln!(out, "{}", report.verdict);
            out
        }
    };
    Ok(Output::ok(text))
}

pub fn cmd_verify(suite: &str, config: &Config) -> Result<Output, CliError> {
    let suite: Suite = suite.parse()?;
    let report = run_suite(suite, config)?;
    Ok(Output {
        text: report.render(config.format),
        code: report.exit_code(),
    })
}
