//! Verification sweeps reconciling the lattice formula, the explicit Gröbner
//! computation and the classification, rendered as JSON, CSV or a table.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{ruled_model, standard_catalog, CatalogEntry, CatalogError, CatalogFilter};
use crate::chowlattice::{ruled_pinch, Branch, ModelError, SurfaceModel};
use crate::exactalg::field::is_prime;
use crate::exactalg::{GroebnerBudget, DEFAULT_PRIME};
use crate::projector::{ram_length_with_retries, ProjectorError, RamStatus};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Projector(#[from] ProjectorError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(OutputFormat::Table),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(HarnessError::Config(format!("unknown format `{s}` (table, csv, json)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    pub prime: u64,
    pub seed: u64,
    /// Resamples allowed after the first projection.
    pub retries: usize,
    /// Jet truncation order.
    pub omega: u32,
    pub format: OutputFormat,
    pub max_pairs: usize,
    pub max_degree: u32,
}

impl Default for Config {
    fn default() -> Self {
        let budget = GroebnerBudget::default();
        Config {
            prime: DEFAULT_PRIME,
            seed: 0,
            retries: 8,
            omega: 4,
            format: OutputFormat::Table,
            max_pairs: budget.max_pairs,
            max_degree: budget.max_degree,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.prime <= 10_000 || !is_prime(self.prime) || self.prime >= 1 << 32 {
            return Err(HarnessError::Config(format!(
                "prime must be a prime in (10000, 2^32), got {}",
                self.prime
            )));
        }
        if self.retries < 1 {
            return Err(HarnessError::Config("retry budget must be at least 1".into()));
        }
        if self.omega < 3 {
            return Err(HarnessError::Config(format!("truncation order must be >= 3, got {}", self.omega)));
        }
        if self.max_pairs == 0 || self.max_degree == 0 {
            return Err(HarnessError::Config("Gröbner budgets must be positive".into()));
        }
        Ok(())
    }

    pub fn budget(&self) -> GroebnerBudget {
        GroebnerBudget {
            max_pairs: self.max_pairs,
            max_degree: self.max_degree,
        }
    }

    /// `count` consecutive seeds starting at `self.seed`.
    pub fn seeds(&self, count: usize) -> Vec<u64> {
        (0..count as u64).map(|k| self.seed.wrapping_add(k)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Pass,
    TheoremViolation,
    ResourceExhausted,
    UnluckyRandomness,
    OutsideHypotheses,
    Skipped,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Pass => "pass",
            RowStatus::TheoremViolation => "theorem-violation",
            RowStatus::ResourceExhausted => "resource-exhausted",
            RowStatus::UnluckyRandomness => "unlucky-randomness",
            RowStatus::OutsideHypotheses => "outside-hypotheses",
            RowStatus::Skipped => "skipped",
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(
            self,
            RowStatus::TheoremViolation | RowStatus::ResourceExhausted | RowStatus::UnluckyRandomness
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub name: String,
    #[serde(rename = "N")]
    pub n: i64,
    pub deg: i64,
    pub pinch_lattice: i64,
    pub pinch_groebner: Option<i64>,
    pub bound: i64,
    pub i: Option<i64>,
    pub classification: String,
    pub status: RowStatus,
    pub g: Option<i64>,
    pub parity: bool,
    pub noether: bool,
    pub agreement: Option<bool>,
    pub seed: Option<u64>,
    pub note: Option<String>,
}

impl ReportRow {
    fn fail(&mut self, status: RowStatus, note: impl Into<String>) {
        if self.status != RowStatus::TheoremViolation {
            self.status = status;
        }
        let note = note.into();
        self.note = Some(match self.note.take() {
            Some(old) => format!("{old}; {note}"),
            None => note,
        });
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub suite: String,
    pub prime: u64,
    pub seeds: Vec<u64>,
    pub retries: usize,
    pub omega: u32,
    pub max_pairs: usize,
    pub max_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: ConfigEcho,
    pub rows: Vec<ReportRow>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(suite: &str, config: &Config, seeds: Vec<u64>, rows: Vec<ReportRow>) -> Self {
        let mut summary = Summary::default();
        for r in &rows {
            if r.status == RowStatus::Pass {
                summary.pass += 1;
            } else if r.status.is_failure() {
                summary.fail += 1;
            } else {
                summary.skipped += 1;
            }
        }
        VerificationReport {
            config: ConfigEcho {
                suite: suite.to_string(),
                prime: config.prime,
                seeds,
                retries: config.retries,
                omega: config.omega,
                max_pairs: config.max_pairs,
                max_degree: config.max_degree,
            },
            rows,
            summary,
        }
    }

    /// Concatenates reports of several suites under one configuration echo.
    pub fn merge(suite: &str, config: &Config, parts: Vec<VerificationReport>) -> Self {
        let mut seeds: Vec<u64> = parts.iter().flat_map(|p| p.config.seeds.iter().copied()).collect();
        seeds.sort_unstable();
        seeds.dedup();
        let rows = parts.into_iter().flat_map(|p| p.rows).collect();
        VerificationReport::new(suite, config, seeds, rows)
    }

    pub fn has_status(&self, status: RowStatus) -> bool {
        self.rows.iter().any(|r| r.status == status)
    }

    /// 0 when clean; 1 on a theorem violation; 2 on resource exhaustion; 3 on unlucky randomness.
    pub fn exit_code(&self) -> i32 {
        if self.has_status(RowStatus::TheoremViolation) {
            1
        } else if self.has_status(RowStatus::ResourceExhausted) {
            2
        } else if self.has_status(RowStatus::UnluckyRandomness) {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        rows_to_csv(&self.rows)
    }

    pub fn to_table(&self) -> String {
        let mut out = rows_to_table(&self.rows);
        let _ = writeln!(
            out,
            "summary: pass {}, fail {}, skipped {}",
            self.summary.pass, self.summary.fail, self.summary.skipped
        );
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Table => self.to_table(),
        }
    }
}

pub fn rows_to_csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialize to csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

fn rows_to_table(rows: &[ReportRow]) -> String {
    let header = ["name", "N", "deg", "g", "P_lat", "P_grb", "2N-6", "i", "class", "status", "note"];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                r.n.to_string(),
                r.deg.to_string(),
                opt(&r.g),
                r.pinch_lattice.to_string(),
                opt(&r.pinch_groebner),
                r.bound.to_string(),
                opt(&r.i),
                r.classification.clone(),
                r.status.as_str().to_string(),
                r.note.clone().unwrap_or_default(),
            ]
        })
        .collect();
    format_table(&header, &cells)
}

/// Left-aligned plain-text table.
pub fn format_table(header: &[&str], cells: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, row: Vec<&str>| {
        let padded: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(&mut out, header.to_vec());
    for row in cells {
        line(&mut out, row.iter().map(String::as_str).collect());
    }
    out
}

fn base_row(model: &SurfaceModel) -> ReportRow {
    let pinch = model.pinch_number();
    let bound = model.bound();
    let parity = pinch.rem_euclid(2) == 0;
    let noether = (model.k_squared() + model.c2()).rem_euclid(12) == 0;
    let mut row = ReportRow {
        name: model.name().to_string(),
        n: model.ambient(),
        deg: model.degree(),
        pinch_lattice: pinch,
        pinch_groebner: None,
        bound,
        i: parity.then(|| (pinch - bound) / 2),
        classification: String::new(),
        status: RowStatus::Pass,
        g: model.genus(),
        parity,
        noether,
        agreement: None,
        seed: None,
        note: None,
    };
    if !parity {
        row.fail(RowStatus::TheoremViolation, "pinch number is odd");
    }
    if !noether {
        row.fail(RowStatus::TheoremViolation, "Noether divisibility fails");
    }
    match model.classify() {
        Ok(c) => {
            row.classification = c.branch.to_string();
            if c.branch == Branch::OutsideHypotheses && row.status == RowStatus::Pass {
                row.status = RowStatus::OutsideHypotheses;
            }
            if c.genus_bound == Some(false) {
                row.fail(RowStatus::TheoremViolation, "genus exceeds i/2");
            }
        }
        Err(e) => {
            row.classification = "none".into();
            row.fail(RowStatus::TheoremViolation, e.to_string());
        }
    }
    row
}

/// Lattice row checking `𝔓 ≥ 2N − 6`, equality exactly on scrolls (for `N ≥ 4`), parity and Noether.
pub fn bound_row(model: &SurfaceModel) -> ReportRow {
    let mut row = base_row(model);
    let flags = model.flags();
    if flags.uncrumpled {
        if row.pinch_lattice < row.bound {
            row.fail(RowStatus::TheoremViolation, "pinch number below 2N-6");
        }
        if model.ambient() >= 4 && (row.pinch_lattice == row.bound) != flags.scroll {
            row.fail(RowStatus::TheoremViolation, "equality with 2N-6 does not match the scroll flag");
        }
    }
    row
}

pub fn verify_bound(entries: &[CatalogEntry], config: &Config) -> VerificationReport {
    let mut rows: Vec<ReportRow> = entries.par_iter().map(|e| bound_row(&e.model)).collect();
    rows.sort_by(|a, b| a.name.cmp(&b.name));
    VerificationReport::new("bound", config, Vec::new(), rows)
}

fn is_anticanonical(m: &SurfaceModel) -> bool {
    let l = m.lattice();
    l.hyperplane.iter().zip(&l.canonical).all(|(z, k)| *z == -k)
}

/// Iterated inner projection, checking that each step drops `𝔓` by 4 and `deg`, `N` by 1.
/// Rows are in step order. Anticanonical models of degree ≥ 3 keep the uncrumpled flag.
pub fn verify_inner_chain(model: &SurfaceModel, steps: usize, config: &Config) -> VerificationReport {
    let mut rows = vec![bound_row(model)];
    let keep_flag = model.flags().uncrumpled && is_anticanonical(model);
    let mut current = model.clone();
    for k in 1..=steps {
        if current.ambient() <= 3 {
            break;
        }
        let next = match current.inner_projection_model() {
            Ok(n) => n.renamed(format!("{}/inner{k}", model.name())),
            Err(e) => {
                let mut row = base_row(&current);
                row.name = format!("{}/inner{k}", model.name());
                row.fail(RowStatus::TheoremViolation, e.to_string());
                rows.push(row);
                break;
            }
        };
        let next = if keep_flag && is_anticanonical(&next) && next.degree() >= 3 {
            next.with_uncrumpled(true).unwrap_or_else(|_| unreachable!("anticanonical del Pezzo model"))
        } else {
            next
        };
        let mut row = bound_row(&next);
        if next.pinch_number() != current.pinch_number() - 4 {
            row.fail(RowStatus::TheoremViolation, "pinch number did not drop by 4");
        }
        if next.degree() != current.degree() - 1 || next.ambient() != current.ambient() - 1 {
            row.fail(RowStatus::TheoremViolation, "degree or ambient did not drop by 1");
        }
        if !next.flags().uncrumpled && next.pinch_number() < next.bound() {
            let note = "below 2N-6: outside the uncrumpled regime";
            row.note = Some(row.note.map_or(note.to_string(), |n| format!("{n}; {note}")));
        }
        rows.push(row);
        current = next;
    }
    VerificationReport::new("inner-chain", config, Vec::new(), rows)
}

/// Lattice evaluation against the closed form `2d + 4g − 4` on `0 ≤ g ≤ g_max`, `3 ≤ d ≤ d_max`,
/// with the genus bound `g ≤ i/2`.
pub fn verify_ruled_formula(g_max: i64, d_max: i64, config: &Config) -> Result<VerificationReport, HarnessError> {
    let mut rows = Vec::new();
    for g in 0..=g_max {
        for d in 3..=d_max {
            let model = ruled_model(g, d)?;
            let mut row = bound_row(&model);
            if g > 0 {
                // no embedding is asserted for g >= 1, so classification comes from the flags alone
                row.classification = "ruled".into();
                row.status = if row.status == RowStatus::OutsideHypotheses { RowStatus::Pass } else { row.status };
            }
            let closed = ruled_pinch(d, g)?;
            if closed != row.pinch_lattice {
                row.fail(RowStatus::TheoremViolation, format!("closed form gives {closed}"));
            }
            match row.i {
                Some(i) if 2 * g <= i => {}
                _ => row.fail(RowStatus::TheoremViolation, "genus exceeds i/2"),
            }
            rows.push(row);
        }
    }
    Ok(VerificationReport::new("ruled", config, Vec::new(), rows))
}

fn explicit_row(entry: &CatalogEntry, seed: u64, config: &Config) -> ReportRow {
    let mut row = bound_row(&entry.model);
    row.seed = Some(seed);
    let chart = match entry.chart(seed) {
        Ok(Some(c)) => c,
        Ok(None) => {
            row.status = RowStatus::Skipped;
            row.note = Some("lattice-only: no explicit chart".into());
            return row;
        }
        Err(e) => {
            row.fail(RowStatus::UnluckyRandomness, e.to_string());
            return row;
        }
    };
    match ram_length_with_retries(&chart, config.prime, seed, config.retries, &config.budget()) {
        Ok(r) => {
            row.pinch_groebner = r.length.map(|l| l as i64);
            row.agreement = Some(r.agreement);
            let attempts: Vec<String> = r
                .attempts
                .iter()
                .map(|a| match &a.outcome {
                    crate::projector::AttemptOutcome::Length(l) => l.to_string(),
                    crate::projector::AttemptOutcome::PositiveDimensional(d) => format!("dim{d}"),
                    crate::projector::AttemptOutcome::BudgetExceeded(_) => "budget".into(),
                })
                .collect();
            if attempts.len() > 1 {
                row.note = Some(format!("attempts: {}", attempts.join(",")));
            }
            match r.status {
                RamStatus::Agree => {}
                RamStatus::Disagree => row.fail(RowStatus::TheoremViolation, "Gröbner length disagrees with lattice"),
                RamStatus::ResourceExhausted => row.fail(RowStatus::ResourceExhausted, "Gröbner budget exceeded"),
                RamStatus::Unlucky => row.fail(RowStatus::UnluckyRandomness, "ramification ideal never zero-dimensional"),
            }
        }
        Err(ProjectorError::Alg(crate::exactalg::AlgError::BudgetExceeded(m))) => {
            row.fail(RowStatus::ResourceExhausted, m)
        }
        Err(e) => row.fail(RowStatus::UnluckyRandomness, e.to_string()),
    }
    row
}

/// Gröbner ramification length against the lattice pinch number, per surface and seed.
/// Rows are sorted by name, then seed.
pub fn verify_explicit(entries: &[CatalogEntry], seeds: &[u64], config: &Config) -> VerificationReport {
    let jobs: Vec<(&CatalogEntry, u64)> = entries.iter().flat_map(|e| seeds.iter().map(move |&s| (e, s))).collect();
    let mut rows: Vec<ReportRow> = jobs.par_iter().map(|(e, s)| explicit_row(e, *s, config)).collect();
    rows.sort_by(|a, b| a.name.cmp(&b.name).then(a.seed.cmp(&b.seed)));
    VerificationReport::new("explicit", config, seeds.to_vec(), rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Bound,
    InnerChain,
    Ruled,
    Explicit,
    All,
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bound" => Ok(Suite::Bound),
            "inner-chain" | "inner" => Ok(Suite::InnerChain),
            "ruled" => Ok(Suite::Ruled),
            "explicit" => Ok(Suite::Explicit),
            "all" => Ok(Suite::All),
            _ => Err(HarnessError::Config(format!(
                "unknown suite `{s}` (bound, inner-chain, ruled, explicit, all)"
            ))),
        }
    }
}

pub const EXPLICIT_SEEDS: usize = 5;

/// Runs a named suite over the standard catalog.
pub fn run_suite(suite: Suite, config: &Config) -> Result<VerificationReport, HarnessError> {
    config.validate()?;
    let catalog = standard_catalog(&CatalogFilter::default());
    let bound = || verify_bound(&catalog, config);
    let chains = || {
        let parts = catalog
            .iter()
            .filter(|e| e.model.ambient() >= 4)
            .map(|e| verify_inner_chain(&e.model, (e.model.ambient() - 3) as usize, config))
            .collect();
        VerificationReport::merge("inner-chain", config, parts)
    };
    let ruled = || verify_ruled_formula(3, 12, config);
    let explicit = || {
        verify_explicit(&catalog, &config.seeds(EXPLICIT_SEEDS), config)
    };
    Ok(match suite {
        Suite::Bound => bound(),
        Suite::InnerChain => chains(),
        Suite::Ruled => ruled()?,
        Suite::Explicit => explicit(),
        Suite::All => VerificationReport::merge("all", config, vec![bound(), chains(), ruled()?, explicit()]),
    })
}
