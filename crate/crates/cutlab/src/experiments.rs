//! Seeded Monte Carlo experiments over the exact cut machinery.
//!
//! An experiment is a pure function of an [`ExperimentConfig`]: trial `t` at
//! grid point `i` draws its randomness from stream `(i << 32) | t` of the
//! master seed, trials run independently (and in parallel), and aggregation
//! folds results in trial-index order.  Summaries are therefore byte-identical
//! across reruns and across thread counts.
//!
//! Each experiment reports, per grid point, both the empirical statistic and
//! the matching closed-form reference value (a theorem bound, a threshold
//! location, or an exact normalizer) so the two columns can be read side by
//! side.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::{WorkBudget, DEFAULT_WORK_BUDGET};
use crate::cuts::{enumerate_cuts_budgeted, max_cut_size_budgeted};
use crate::equiv::{equivalence_budgeted, in_core_class_budgeted, is_rigid_budgeted};
use crate::error::{Error, Result};
use crate::extremal::is_h_simonovits;
use crate::graph::{boundary_edges, common_neighbourhood, sample_gnm, sample_gnp, Graph, RngSeed};
use crate::pairs::pair_count;
use crate::patterns::Pattern;

/// Number of random vertex subsets probed per trial by the boundary
/// experiment when the host is too large for the exhaustive subset sweep.
pub const BOUNDARY_RANDOM_SUBSETS: u64 = 1 << 16;

/// Stream index for trial `trial` at grid point `grid`.
fn trial_stream(grid: usize, trial: usize) -> u64 {
    ((grid as u64) << 32) | trial as u64
}

/// Streams for auxiliary in-trial randomness (subset sampling) that must not
/// collide with the graph-sampling streams.
fn aux_stream(grid: usize, trial: usize) -> u64 {
    trial_stream(grid, trial) | (1 << 63)
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// The statistic an experiment estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Frequency of sampled graphs that fail the rigidity predicate.
    RigidityFrequency,
    /// Frequency of sampled graphs whose core meets the size condition.
    CoreFrequency,
    /// Mean number of vertices left outside the core, across an `n` grid.
    XrScaling,
    /// Mean of `(b_r - (r-1)m/r) / sqrt(mn)`.
    MaxcutSecondOrder,
    /// Worst neighbourhood imbalance over all maximum cuts and small sets.
    NeighbourhoodBalance,
    /// Frequency of the pattern-Simonovits property near its threshold.
    SimonovitsProbe,
    /// Minimal constant making the boundary-size inequality hold.
    BoundaryBoundCheck,
}

impl ExperimentKind {
    /// All kinds, in the order they are documented.
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::RigidityFrequency,
        ExperimentKind::CoreFrequency,
        ExperimentKind::XrScaling,
        ExperimentKind::MaxcutSecondOrder,
        ExperimentKind::NeighbourhoodBalance,
        ExperimentKind::SimonovitsProbe,
        ExperimentKind::BoundaryBoundCheck,
    ];

    fn name(self) -> &'static str {
        match self {
            ExperimentKind::RigidityFrequency => "rigidity_frequency",
            ExperimentKind::CoreFrequency => "core_frequency",
            ExperimentKind::XrScaling => "xr_scaling",
            ExperimentKind::MaxcutSecondOrder => "maxcut_second_order",
            ExperimentKind::NeighbourhoodBalance => "neighbourhood_balance",
            ExperimentKind::SimonovitsProbe => "simonovits_probe",
            ExperimentKind::BoundaryBoundCheck => "boundary_bound_check",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::format(format!("unknown experiment kind {s:?}")))
    }
}

/// Edge density of a sampled graph: an exact edge count or an edge
/// probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Density {
    /// Uniform graph with exactly this many edges.
    Edges(usize),
    /// Each pair present independently with this probability.
    Probability(f64),
}

/// One cell of the parameter grid: a vertex count and a density.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    /// Number of vertices.
    pub n: usize,
    /// Edge density.
    pub density: Density,
}

impl GridPoint {
    /// The per-pair edge probability of this cell (`m / C(n,2)` for exact
    /// edge counts).
    pub fn edge_probability(&self) -> f64 {
        match self.density {
            Density::Edges(m) => m as f64 / pair_count(self.n) as f64,
            Density::Probability(p) => p,
        }
    }

    /// The expected number of edges of this cell.
    pub fn expected_edges(&self) -> f64 {
        match self.density {
            Density::Edges(m) => m as f64,
            Density::Probability(p) => p * pair_count(self.n) as f64,
        }
    }

    fn sample(&self, seed: RngSeed) -> Result<Graph> {
        match self.density {
            Density::Edges(m) => sample_gnm(self.n, m, seed),
            Density::Probability(p) => sample_gnp(self.n, p, seed),
        }
    }
}

/// Full description of an experiment; two equal configs produce
/// byte-identical summaries.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    /// Which statistic to estimate.
    pub kind: ExperimentKind,
    /// Vertex-count grid (a single entry broadcasts across the density grid).
    pub n: Vec<usize>,
    /// Number of cut parts.
    pub r: usize,
    /// Deficit budget for cut families.
    pub d: i64,
    /// Edge-count grid; mutually exclusive with `p`.
    pub m: Option<Vec<usize>>,
    /// Edge-probability grid; mutually exclusive with `m`.
    pub p: Option<Vec<f64>>,
    /// Rigidity margin (rigidity experiment) or imbalance tolerance for the
    /// within-tolerance column of the neighbourhood experiment.
    pub eps: Option<f64>,
    /// Core-class size tolerance.
    pub alpha: Option<f64>,
    /// Size of the probed vertex sets in the neighbourhood experiment.
    pub k: Option<usize>,
    /// Pattern name for the Simonovits probe.
    pub pattern: Option<String>,
    /// Number of independent trials per grid point.
    pub trials: usize,
    /// Master seed; trial randomness is derived per grid point and trial.
    pub seed: u64,
    /// Leading constant for the reported theorem-bound columns.
    pub bound_c: f64,
    /// Work-budget limit applied to each trial separately.
    pub budget: u64,
    /// Whether the summary retains every per-trial record.
    pub keep_trials: bool,
}

impl ExperimentConfig {
    /// A config with the given kind and every optional field unset.
    ///
    /// `n`, a density and `trials` must still be filled in before running.
    pub fn new(kind: ExperimentKind, seed: u64) -> Self {
        ExperimentConfig {
            kind,
            n: Vec::new(),
            r: 2,
            d: 0,
            m: None,
            p: None,
            eps: None,
            alpha: None,
            k: None,
            pattern: None,
            trials: 0,
            seed,
            bound_c: 1.0,
            budget: DEFAULT_WORK_BUDGET,
            keep_trials: false,
        }
    }

    /// Parses a `key = value` config text.  Lines may be blank or comments
    /// (`#`); list values are comma-separated.  `kind`, `n`, `trials`, `seed`
    /// and exactly one of `m`/`p` are required.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kind: Option<ExperimentKind> = None;
        let mut seen: Vec<String> = Vec::new();
        let mut pairs: Vec<(String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::format(format!(
                    "config line {}: expected key = value, got {raw:?}",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if seen.contains(&key) {
                return Err(Error::format(format!(
                    "config line {}: duplicate key {key:?}",
                    lineno + 1
                )));
            }
            seen.push(key.clone());
            if key == "kind" {
                kind = Some(value.parse()?);
            } else {
                pairs.push((key, value));
            }
        }
        let Some(kind) = kind else {
            return Err(Error::format("config is missing the kind key"));
        };
        let mut cfg = ExperimentConfig::new(kind, 0);
        let mut have_seed = false;
        for (key, value) in &pairs {
            cfg.apply_kv(key, value)?;
            if key == "seed" {
                have_seed = true;
            }
        }
        if cfg.n.is_empty() {
            return Err(Error::format("config is missing the n key"));
        }
        if cfg.trials == 0 && !seen.iter().any(|k| k == "trials") {
            return Err(Error::format("config is missing the trials key"));
        }
        if !have_seed {
            return Err(Error::format("config is missing the seed key"));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and parses a config file.
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        ExperimentConfig::parse(&text)
    }

    /// Applies one `key = value` setting; shared by the file parser and
    /// command-line overrides.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "kind" => self.kind = value.parse()?,
            "n" => self.n = parse_list(key, value, parse_usize)?,
            "r" => self.r = parse_usize(key, value)?,
            "d" => {
                self.d = value
                    .parse::<i64>()
                    .map_err(|_| Error::format(format!("key d: {value:?} is not an integer")))?
            }
            "m" => self.m = Some(parse_list(key, value, parse_usize)?),
            "p" => self.p = Some(parse_list(key, value, parse_f64)?),
            "eps" => self.eps = Some(parse_f64(key, value)?),
            "alpha" => self.alpha = Some(parse_f64(key, value)?),
            "k" => self.k = Some(parse_usize(key, value)?),
            "pattern" => self.pattern = Some(value.to_string()),
            "trials" => self.trials = parse_usize(key, value)?,
            "seed" => {
                self.seed = value
                    .parse::<u64>()
                    .map_err(|_| Error::format(format!("key seed: {value:?} is not a u64")))?
            }
            "bound_c" => self.bound_c = parse_f64(key, value)?,
            "budget" => {
                self.budget = value
                    .parse::<u64>()
                    .map_err(|_| Error::format(format!("key budget: {value:?} is not a u64")))?
            }
            "keep_trials" => {
                self.keep_trials = match value {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(Error::format(format!(
                            "key keep_trials: expected true or false, got {other:?}"
                        )))
                    }
                }
            }
            other => return Err(Error::format(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Checks the cross-field invariants shared by every experiment kind.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::parameter("trials must be at least 1"));
        }
        if self.bound_c <= 0.0 || !self.bound_c.is_finite() {
            return Err(Error::parameter(format!(
                "bound_c={} must be positive and finite",
                self.bound_c
            )));
        }
        if self.budget == 0 {
            return Err(Error::parameter("budget must be positive"));
        }
        self.grid().map(|_| ())
    }

    /// Expands the `n` and density grids into concrete grid points.
    ///
    /// Grids of equal length are zipped; a length-one grid broadcasts across
    /// the other.  Mismatched lengths are rejected.
    pub fn grid(&self) -> Result<Vec<GridPoint>> {
        if self.n.is_empty() {
            return Err(Error::parameter("the n grid is empty"));
        }
        let densities: Vec<Density> = match (&self.m, &self.p) {
            (Some(_), Some(_)) => {
                return Err(Error::parameter(
                    "specify the density as m (edge counts) or p (probabilities), not both",
                ))
            }
            (None, None) => return Err(Error::parameter("a density grid is required: set m or p")),
            (Some(ms), None) => {
                if ms.is_empty() {
                    return Err(Error::parameter("the m grid is empty"));
                }
                ms.iter().map(|&m| Density::Edges(m)).collect()
            }
            (None, Some(ps)) => {
                if ps.is_empty() {
                    return Err(Error::parameter("the p grid is empty"));
                }
                ps.iter().map(|&p| Density::Probability(p)).collect()
            }
        };
        let points = if self.n.len() == densities.len() {
            self.n
                .iter()
                .zip(&densities)
                .map(|(&n, &density)| GridPoint { n, density })
                .collect()
        } else if self.n.len() == 1 {
            densities
                .iter()
                .map(|&density| GridPoint {
                    n: self.n[0],
                    density,
                })
                .collect()
        } else if densities.len() == 1 {
            self.n
                .iter()
                .map(|&n| GridPoint {
                    n,
                    density: densities[0],
                })
                .collect()
        } else {
            return Err(Error::parameter(format!(
                "grid lengths do not match: {} vertex counts vs {} densities \
                 (equal lengths zip, a single value broadcasts)",
                self.n.len(),
                densities.len()
            )));
        };
        Ok(points)
    }
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value.parse::<usize>().map_err(|_| {
        Error::format(format!(
            "key {key}: {value:?} is not a non-negative integer"
        ))
    })
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    let v = value
        .parse::<f64>()
        .map_err(|_| Error::format(format!("key {key}: {value:?} is not a number")))?;
    if !v.is_finite() {
        return Err(Error::format(format!("key {key}: {value:?} is not finite")));
    }
    Ok(v)
}

fn parse_list<T>(key: &str, value: &str, one: impl Fn(&str, &str) -> Result<T>) -> Result<Vec<T>> {
    value.split(',').map(|part| one(key, part.trim())).collect()
}

// ---------------------------------------------------------------------------
// Interval statistics
// ---------------------------------------------------------------------------

/// Two-sided 95% normal quantile used by the Wilson interval.
const Z_95: f64 = 1.959963984540054;

/// Two-sided 95% Student-t quantiles by degrees of freedom; lookups take the
/// largest tabulated entry not exceeding the actual df.
const T_TABLE_95: &[(usize, f64)] = &[
    (1, 12.706),
    (2, 4.303),
    (3, 3.182),
    (4, 2.776),
    (5, 2.571),
    (6, 2.447),
    (7, 2.365),
    (8, 2.306),
    (9, 2.262),
    (10, 2.228),
    (12, 2.179),
    (15, 2.131),
    (20, 2.086),
    (25, 2.060),
    (30, 2.042),
    (40, 2.021),
    (60, 2.000),
    (120, 1.980),
];

fn t_quantile_95(df: usize) -> f64 {
    let mut q = Z_95;
    for &(table_df, value) in T_TABLE_95 {
        if table_df <= df {
            q = value;
        } else {
            break;
        }
    }
    if df > 120 {
        q = Z_95;
    }
    q
}

/// 95% Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(Error::parameter(format!(
            "wilson interval needs 0 <= successes <= trials, got {successes}/{trials}"
        )));
    }
    let t = trials as f64;
    let p_hat = successes as f64 / t;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / t;
    let centre = (p_hat + z2 / (2.0 * t)) / denom;
    let half = Z_95 * (p_hat * (1.0 - p_hat) / t + z2 / (4.0 * t * t)).sqrt() / denom;
    // At the boundary counts the exact endpoint is 0 (or 1); keep it free of
    // rounding residue.
    let low = if successes == 0 {
        0.0
    } else {
        (centre - half).max(0.0)
    };
    let high = if successes == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    Ok((low, high))
}

/// Mean of `values`, summed in slice order.
pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (zero for fewer than two values).
pub fn sample_sd(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mu = mean(values);
    let ss: f64 = values.iter().map(|v| (v - mu) * (v - mu)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

/// 95% Student-t confidence interval for the mean of `values`.
pub fn t_interval(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::parameter("t interval needs at least one value"));
    }
    let mu = mean(values);
    if values.len() == 1 {
        return Ok((mu, mu));
    }
    let half = t_quantile_95(values.len() - 1) * sample_sd(values) / (values.len() as f64).sqrt();
    Ok((mu - half, mu + half))
}

// ---------------------------------------------------------------------------
// Summaries
// ---------------------------------------------------------------------------

/// One retained trial outcome.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    /// Grid-point index the trial belongs to.
    pub grid: usize,
    /// Trial index within the grid point.
    pub trial: usize,
    /// The per-trial statistic.
    pub value: f64,
}

/// Aggregates for one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    /// Number of vertices.
    pub n: usize,
    /// Configured edge count, if the density was an edge count.
    pub m: Option<usize>,
    /// Configured edge probability, if the density was a probability.
    pub p: Option<f64>,
    /// Number of trials aggregated.
    pub trials: usize,
    /// Named aggregate columns, in a fixed per-experiment order.
    pub columns: Vec<(String, f64)>,
}

impl SummaryRow {
    fn new(gp: &GridPoint, trials: usize) -> Self {
        let (m, p) = match gp.density {
            Density::Edges(m) => (Some(m), None),
            Density::Probability(p) => (None, Some(p)),
        };
        SummaryRow {
            n: gp.n,
            m,
            p,
            trials,
            columns: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, value: f64) {
        self.columns.push((name.to_string(), value));
    }

    /// The value of a named column, if present.
    pub fn column(&self, name: &str) -> Option<f64> {
        self.columns
            .iter()
            .find(|(c, _)| c == name)
            .map(|&(_, v)| v)
    }
}

/// The result of an experiment run: per-grid-point aggregates plus,
/// optionally, every per-trial record.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSummary {
    /// The configuration the summary was computed from.
    pub config: ExperimentConfig,
    /// Name of the per-trial statistic the rows aggregate.
    pub metric: String,
    /// One row per grid point, in grid order.
    pub rows: Vec<SummaryRow>,
    /// Per-trial records, retained when the config asks for them.
    pub records: Option<Vec<TrialRecord>>,
}

impl ExperimentSummary {
    /// CSV rendering: a header line, then one line per grid point.
    ///
    /// Columns missing from a row (the first row has no ratio to a previous
    /// row, for instance) render as empty cells.
    pub fn to_csv(&self) -> String {
        let mut names: Vec<&str> = Vec::new();
        for row in &self.rows {
            for (name, _) in &row.columns {
                if !names.contains(&name.as_str()) {
                    names.push(name);
                }
            }
        }
        let mut out = String::from("n,m,p,trials");
        for name in &names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.n.to_string());
            out.push(',');
            if let Some(m) = row.m {
                out.push_str(&m.to_string());
            }
            out.push(',');
            if let Some(p) = row.p {
                out.push_str(&p.to_string());
            }
            out.push(',');
            out.push_str(&row.trials.to_string());
            for name in &names {
                out.push(',');
                if let Some(v) = row.column(name) {
                    out.push_str(&v.to_string());
                }
            }
            out.push('\n');
        }
        out
    }

    /// JSON rendering of the config echo, rows and (if retained) records.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut columns = serde_json::Map::new();
                for (name, value) in &row.columns {
                    columns.insert(name.clone(), json_number(*value));
                }
                serde_json::json!({
                    "n": row.n,
                    "m": row.m,
                    "p": row.p,
                    "trials": row.trials,
                    "columns": columns,
                })
            })
            .collect();
        serde_json::json!({
            "kind": self.config.kind,
            "metric": self.metric,
            "config": self.config,
            "rows": rows,
            "records": self.records,
        })
    }

    /// One JSON object per retained trial record, newline separated.
    pub fn records_jsonl(&self) -> Option<String> {
        let records = self.records.as_ref()?;
        let mut out = String::new();
        for record in records {
            out.push_str(
                &serde_json::to_string(record).expect("trial records serialize infallibly"),
            );
            out.push('\n');
        }
        Some(out)
    }

    /// Recomputes each row's leading aggregate (`frequency` or `mean`) from
    /// the retained records and checks bitwise equality.
    ///
    /// Errors if the summary kept no records or an aggregate disagrees.
    pub fn verify_aggregates(&self) -> Result<()> {
        let Some(records) = &self.records else {
            return Err(Error::parameter(
                "aggregate verification needs a summary with retained records",
            ));
        };
        for (gi, row) in self.rows.iter().enumerate() {
            let values: Vec<f64> = records
                .iter()
                .filter(|rec| rec.grid == gi)
                .map(|rec| rec.value)
                .collect();
            if values.len() != row.trials {
                return Err(Error::contract(format!(
                    "grid point {gi} has {} records but {} trials",
                    values.len(),
                    row.trials
                )));
            }
            let recomputed = mean(&values);
            let stored = row
                .column("frequency")
                .or_else(|| row.column("mean"))
                .ok_or_else(|| {
                    Error::contract(format!("grid point {gi} has no frequency or mean column"))
                })?;
            if recomputed.to_bits() != stored.to_bits() {
                return Err(Error::contract(format!(
                    "grid point {gi}: stored aggregate {stored} != recomputed {recomputed}"
                )));
            }
        }
        Ok(())
    }
}

fn json_number(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v)
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

// ---------------------------------------------------------------------------
// Harness
// ---------------------------------------------------------------------------

/// Runs every (grid point, trial) job in parallel and folds the outcomes in
/// trial-index order; the first error in that order wins.
fn run_trials(
    cfg: &ExperimentConfig,
    grid: &[GridPoint],
    trial_fn: impl Fn(usize, &GridPoint, usize) -> Result<f64> + Sync,
) -> Result<Vec<Vec<f64>>> {
    let mut per_grid = Vec::with_capacity(grid.len());
    for (gi, gp) in grid.iter().enumerate() {
        // Collecting into `Result<Vec<_>, _>` keeps trial order on success and
        // lets rayon skip remaining trials once one has failed, so an
        // over-budget grid point aborts after a single trial instead of
        // burning the full budget `trials` times over.
        let values: Vec<f64> = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| trial_fn(gi, gp, trial))
            .collect::<Result<_>>()?;
        per_grid.push(values);
    }
    Ok(per_grid)
}

fn collect_records(per_grid: &[Vec<f64>]) -> Vec<TrialRecord> {
    let mut records = Vec::new();
    for (grid, values) in per_grid.iter().enumerate() {
        for (trial, &value) in values.iter().enumerate() {
            records.push(TrialRecord { grid, trial, value });
        }
    }
    records
}

fn summarize(
    cfg: &ExperimentConfig,
    metric: &str,
    rows: Vec<SummaryRow>,
    per_grid: &[Vec<f64>],
) -> ExperimentSummary {
    ExperimentSummary {
        config: cfg.clone(),
        metric: metric.to_string(),
        rows,
        records: cfg.keep_trials.then(|| collect_records(per_grid)),
    }
}

/// Pushes the standard frequency columns (frequency plus Wilson bounds).
fn push_frequency_columns(row: &mut SummaryRow, values: &[f64]) -> Result<()> {
    let successes = values.iter().filter(|&&v| v == 1.0).count();
    row.push("frequency", mean(values));
    let (lo, hi) = wilson_interval(successes, values.len())?;
    row.push("wilson_low", lo);
    row.push("wilson_high", hi);
    Ok(())
}

/// Pushes the standard mean columns (mean, sd and the t interval).
fn push_mean_columns(row: &mut SummaryRow, values: &[f64]) -> Result<()> {
    row.push("mean", mean(values));
    row.push("sd", sample_sd(values));
    let (lo, hi) = t_interval(values)?;
    row.push("t_low", lo);
    row.push("t_high", hi);
    Ok(())
}

/// The shared deviation term of the rigidity and core theorem bounds:
/// `((d+1)/delta + r) * sqrt(n/m) + (n/m)^(1/4)` with `delta` the edge
/// density `m / C(n,2)`.
fn deviation_term(gp: &GridPoint, r: usize, d: i64) -> f64 {
    let n = gp.n as f64;
    let m = gp.expected_edges();
    let delta = gp.edge_probability();
    let ratio = n / m;
    ((d as f64 + 1.0) / delta + r as f64) * ratio.sqrt() + ratio.powf(0.25)
}

// ---------------------------------------------------------------------------
// Per-trial statistics (exposed so forced instances can be checked exactly)
// ---------------------------------------------------------------------------

/// `(b_r(G) - (r-1)m/r) / sqrt(mn)`, the second-order normalized excess of
/// the maximum r-cut over the trivial expectation; zero for edgeless graphs.
pub fn normalized_cut_excess(g: &Graph, r: usize, budget: &mut WorkBudget) -> Result<f64> {
    let m = g.m() as f64;
    let b = max_cut_size_budgeted(g, r, budget)? as f64;
    if g.m() == 0 {
        return Ok(0.0);
    }
    Ok((b - (r - 1) as f64 * m / r as f64) / (m * g.n() as f64).sqrt())
}

/// The worst value of `| |N(W) ∩ V_i| - |N(W)|/r |` over every maximum
/// r-cut `(V_1, ..., V_r)`, every k-set `W` of vertices and every part index
/// `i`.  The caller normalizes by `n p^k`.
pub fn worst_neighbourhood_deviation(
    g: &Graph,
    r: usize,
    k: usize,
    budget: &mut WorkBudget,
) -> Result<f64> {
    if k == 0 || k > g.n() {
        return Err(Error::parameter(format!(
            "set size k={k} outside 1..={}",
            g.n()
        )));
    }
    let family = enumerate_cuts_budgeted(g, r, 0, budget)?;
    let subsets = binomial_u64(g.n(), k);
    let checks = (family.len() as u64)
        .saturating_mul(subsets)
        .saturating_mul(r as u64);
    budget.charge(checks, "neighbourhood balance scan")?;
    let full = g.vertices_mask();
    let mut worst = 0.0f64;
    for cut in family.iter() {
        let parts = cut.part_masks();
        for_each_subset_mask(g.n(), k, &mut |w_mask| {
            let nb = common_neighbourhood(g, w_mask, full);
            let target = nb.count_ones() as f64 / r as f64;
            for &part in &parts {
                let inside = (nb & part).count_ones() as f64;
                worst = worst.max((inside - target).abs());
            }
        });
    }
    Ok(worst)
}

/// The minimal constant `C` for which every nonempty vertex set `A`
/// satisfies `|∂(A)| <= (m/C(n,2)) |A| n + C sqrt(m/n) |A| ln(e n / |A|)`.
///
/// Hosts with at most 16 vertices are swept exhaustively; larger hosts are
/// probed on all degree-sorted prefixes plus [`BOUNDARY_RANDOM_SUBSETS`]
/// seeded random subsets.  Edgeless graphs need `C = 0`.
pub fn minimal_boundary_constant(
    g: &Graph,
    subset_seed: RngSeed,
    budget: &mut WorkBudget,
) -> Result<f64> {
    let n = g.n();
    if g.m() == 0 {
        return Ok(0.0);
    }
    let density = g.m() as f64 / pair_count(n) as f64;
    let scale_base = (g.m() as f64 / n as f64).sqrt();
    let required_c = |a_mask: u64| -> f64 {
        let a = a_mask & g.vertices_mask();
        if a == 0 {
            return 0.0;
        }
        let size = a.count_ones() as f64;
        let boundary = boundary_edges(g, a).len() as f64;
        let base = density * size * n as f64;
        let scale = scale_base * size * ((n as f64 / size).ln() + 1.0);
        ((boundary - base) / scale).max(0.0)
    };
    let mut worst = 0.0f64;
    if n <= 16 {
        budget.charge(1 << n, "boundary subset sweep")?;
        for mask in 1..(1u64 << n) {
            worst = worst.max(required_c(mask));
        }
    } else {
        budget.charge(n as u64 + BOUNDARY_RANDOM_SUBSETS, "boundary subset probes")?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        let mut prefix = 0u64;
        for &v in &order {
            prefix |= 1 << v;
            worst = worst.max(required_c(prefix));
        }
        let mut rng = subset_seed.rng();
        for _ in 0..BOUNDARY_RANDOM_SUBSETS {
            worst = worst.max(required_c(rng.random::<u64>()));
        }
    }
    Ok(worst)
}

/// `C(n, k)` saturating at `u64::MAX`.
fn binomial_u64(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Calls `f` with every k-subset of `0..n` encoded as a bitmask, in
/// lexicographic order of the sorted element lists.
fn for_each_subset_mask(n: usize, k: usize, f: &mut impl FnMut(u64)) {
    fn rec(next: usize, n: usize, left: usize, acc: u64, f: &mut impl FnMut(u64)) {
        if left == 0 {
            f(acc);
            return;
        }
        for v in next..=(n - left) {
            rec(v + 1, n, left - 1, acc | (1 << v), f);
        }
    }
    if k <= n {
        rec(0, n, k, 0, f);
    }
}

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

/// Runs the experiment described by `cfg`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    cfg.validate()?;
    match cfg.kind {
        ExperimentKind::RigidityFrequency => run_rigidity_frequency(cfg),
        ExperimentKind::CoreFrequency => run_core_frequency(cfg),
        ExperimentKind::XrScaling => run_xr_scaling(cfg),
        ExperimentKind::MaxcutSecondOrder => run_maxcut_second_order(cfg),
        ExperimentKind::NeighbourhoodBalance => run_neighbourhood_balance(cfg),
        ExperimentKind::SimonovitsProbe => run_simonovits_probe(cfg),
        ExperimentKind::BoundaryBoundCheck => run_boundary_bound_check(cfg),
    }
}

fn require(value: Option<f64>, what: &str, kind: ExperimentKind) -> Result<f64> {
    value.ok_or_else(|| Error::parameter(format!("{kind} needs the {what} parameter")))
}

fn run_rigidity_frequency(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    let eps = require(cfg.eps, "eps", cfg.kind)?;
    let grid = cfg.grid()?;
    let per_grid = run_trials(cfg, &grid, |gi, gp, trial| {
        let seed = RngSeed::with_stream(cfg.seed, trial_stream(gi, trial));
        let g = gp.sample(seed)?;
        let mut budget = WorkBudget::new(cfg.budget);
        let rigid = is_rigid_budgeted(&g, cfg.r, cfg.d, eps, &mut budget)?;
        Ok(if rigid { 0.0 } else { 1.0 })
    })?;
    let mut rows = Vec::new();
    for (gp, values) in grid.iter().zip(&per_grid) {
        let mut row = SummaryRow::new(gp, values.len());
        push_frequency_columns(&mut row, values)?;
        row.push(
            "theorem_bound",
            cfg.bound_c * cfg.r as f64 / eps * deviation_term(gp, cfg.r, cfg.d),
        );
        rows.push(row);
    }
    Ok(summarize(cfg, "non_rigid", rows, &per_grid))
}

fn run_core_frequency(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    let alpha = require(cfg.alpha, "alpha", cfg.kind)?;
    let grid = cfg.grid()?;
    let per_grid = run_trials(cfg, &grid, |gi, gp, trial| {
        let seed = RngSeed::with_stream(cfg.seed, trial_stream(gi, trial));
        let g = gp.sample(seed)?;
        let mut budget = WorkBudget::new(cfg.budget);
        let in_core = in_core_class_budgeted(&g, cfg.r, cfg.d, alpha, &mut budget)?;
        Ok(if in_core { 1.0 } else { 0.0 })
    })?;
    let mut rows = Vec::new();
    for (gp, values) in grid.iter().zip(&per_grid) {
        let mut row = SummaryRow::new(gp, values.len());
        push_frequency_columns(&mut row, values)?;
        row.push(
            "non_core_bound",
            cfg.bound_c * (cfg.r * cfg.r) as f64 / alpha * deviation_term(gp, cfg.r, cfg.d),
        );
        rows.push(row);
    }
    Ok(summarize(cfg, "in_core_class", rows, &per_grid))
}

fn run_xr_scaling(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    let grid = cfg.grid()?;
    let per_grid = run_trials(cfg, &grid, |gi, gp, trial| {
        let seed = RngSeed::with_stream(cfg.seed, trial_stream(gi, trial));
        let g = gp.sample(seed)?;
        let mut budget = WorkBudget::new(cfg.budget);
        let s = equivalence_budgeted(&g, cfg.r, cfg.d, &mut budget)?;
        Ok(s.x_r as f64)
    })?;
    let mut rows = Vec::new();
    let mut previous_mean: Option<f64> = None;
    for (gp, values) in grid.iter().zip(&per_grid) {
        let mut row = SummaryRow::new(gp, values.len());
        push_mean_columns(&mut row, values)?;
        let mu = mean(values);
        row.push(
            "mean_over_sqrt_n_over_p",
            mu / (gp.n as f64 / gp.edge_probability()).sqrt(),
        );
        if let Some(prev) = previous_mean {
            row.push("ratio_vs_previous", mu / prev);
        }
        previous_mean = Some(mu);
        rows.push(row);
    }
    Ok(summarize(cfg, "x_r", rows, &per_grid))
}

fn run_maxcut_second_order(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    let grid = cfg.grid()?;
    let per_grid = run_trials(cfg, &grid, |gi, gp, trial| {
        let seed = RngSeed::with_stream(cfg.seed, trial_stream(gi, trial));
        let g = gp.sample(seed)?;
        let mut budget = WorkBudget::new(cfg.budget);
        normalized_cut_excess(&g, cfg.r, &mut budget)
    })?;
    let mut rows = Vec::new();
    for (gp, values) in grid.iter().zip(&per_grid) {
        let mut row = SummaryRow::new(gp, values.len());
        push_mean_columns(&mut row, values)?;
        rows.push(row);
    }
    Ok(summarize(cfg, "normalized_excess", rows, &per_grid))
}

fn run_neighbourhood_balance(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    let k = cfg.k.unwrap_or(1);
    for &n in &cfg.n {
        if k == 0 || k > n {
            return Err(Error::parameter(format!("set size k={k} outside 1..={n}")));
        }
    }
    let grid = cfg.grid()?;
    let per_grid = run_trials(cfg, &grid, |gi, gp, trial| {
        let seed = RngSeed::with_stream(cfg.seed, trial_stream(gi, trial));
        let g = gp.sample(seed)?;
        let mut budget = WorkBudget::new(cfg.budget);
        let worst = worst_neighbourhood_deviation(&g, cfg.r, k, &mut budget)?;
        let scale = gp.n as f64 * gp.edge_probability().powi(k as i32);
        Ok(worst / scale)
    })?;
    let mut rows = Vec::new();
    for (gp, values) in grid.iter().zip(&per_grid) {
        let mut row = SummaryRow::new(gp, values.len());
        push_mean_columns(&mut row, values)?;
        row.push("max", values.iter().cloned().fold(0.0f64, f64::max));
        if let Some(eps) = cfg.eps {
            let within = values.iter().filter(|&&v| v <= eps).count();
            row.push("within_eps_frequency", within as f64 / values.len() as f64);
        }
        rows.push(row);
    }
    Ok(summarize(cfg, "worst_deviation", rows, &per_grid))
}

fn run_simonovits_probe(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    let name = cfg
        .pattern
        .as_deref()
        .ok_or_else(|| Error::parameter("simonovits_probe needs the pattern parameter"))?;
    let pattern = Pattern::by_name(name)
        .ok_or_else(|| Error::parameter(format!("unknown pattern {name:?}")))??;
    let grid = cfg.grid()?;
    let per_grid = run_trials(cfg, &grid, |gi, gp, trial| {
        let seed = RngSeed::with_stream(cfg.seed, trial_stream(gi, trial));
        let g = gp.sample(seed)?;
        Ok(if is_h_simonovits(&g, &pattern)? {
            1.0
        } else {
            0.0
        })
    })?;
    let mut rows = Vec::new();
    for (gp, values) in grid.iter().zip(&per_grid) {
        let mut row = SummaryRow::new(gp, values.len());
        push_frequency_columns(&mut row, values)?;
        if let Ok(theta) = crate::patterns::theta_constant(&pattern) {
            let n = gp.n as f64;
            let m2: f64 = {
                let r = pattern.m2();
                *r.numer() as f64 / *r.denom() as f64
            };
            let threshold =
                theta * n.powf(-1.0 / m2) * n.ln().powf(1.0 / (pattern.e() as f64 - 1.0));
            row.push("threshold_p", threshold);
        }
        rows.push(row);
    }
    Ok(summarize(cfg, "simonovits", rows, &per_grid))
}

fn run_boundary_bound_check(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    let grid = cfg.grid()?;
    let per_grid = run_trials(cfg, &grid, |gi, gp, trial| {
        let seed = RngSeed::with_stream(cfg.seed, trial_stream(gi, trial));
        let g = gp.sample(seed)?;
        let mut budget = WorkBudget::new(cfg.budget);
        let subset_seed = RngSeed::with_stream(cfg.seed, aux_stream(gi, trial));
        minimal_boundary_constant(&g, subset_seed, &mut budget)
    })?;
    let mut rows = Vec::new();
    for (gp, values) in grid.iter().zip(&per_grid) {
        let mut row = SummaryRow::new(gp, values.len());
        push_mean_columns(&mut row, values)?;
        row.push("min", values.iter().cloned().fold(f64::MAX, f64::min));
        row.push("max", values.iter().cloned().fold(0.0f64, f64::max));
        rows.push(row);
    }
    Ok(summarize(cfg, "required_c", rows, &per_grid))
}
