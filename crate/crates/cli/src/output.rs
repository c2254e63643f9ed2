//! CSV and JSON record formats.
//!
//! CSV numbers carry 12 significant digits with a dot decimal separator and
//! LF line endings. JSON numbers are written in shortest round-trip form, so a
//! document read back and written again is byte-identical.

use std::io::Write;
use std::path::Path;

use qgame_core::{NashEquilibrium, SteppingParams, StrategyGrid, StrategyParams, Sweep, SweepRecord};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const TOOL_NAME: &str = "qgame";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Values read back from 12-digit CSV may overshoot an interval end by rounding.
const CSV_READ_SLACK: f64 = 1e-9;

pub const TWO_PLAYER_COLUMNS: [&str; 12] = [
    "gamma", "eq_index", "a_index", "b_index", "theta_a", "phi_a", "alpha_a", "theta_b", "phi_b", "alpha_b",
    "payoff_a", "payoff_b",
];

pub const BAYES_COLUMNS: [&str; 18] = [
    "gamma",
    "p",
    "eq_index",
    "a_index",
    "b_index",
    "b2_index",
    "theta_a",
    "phi_a",
    "alpha_a",
    "theta_b",
    "phi_b",
    "alpha_b",
    "theta_b2",
    "phi_b2",
    "alpha_b2",
    "payoff_a",
    "payoff_b",
    "payoff_b2",
];

/// Formats `x` like C's `%.12g`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let fixed = format!("{:.*}", (11 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub games: Vec<String>,
    pub steps: [f64; 3],
    pub epsilon: f64,
    pub grid_size: usize,
    pub gamma_points: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_points: Option<Vec<f64>>,
}

impl Metadata {
    pub fn new(
        command: &str,
        games: Vec<String>,
        steps: SteppingParams,
        epsilon: f64,
        grid_size: usize,
        sweep: &Sweep,
    ) -> Self {
        let (t, p, a) = steps.as_tuple();
        Self {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            games,
            steps: [t, p, a],
            epsilon,
            grid_size,
            gamma_points: sweep.gamma_points.clone(),
            p_points: sweep.p_points.clone(),
        }
    }
}

/// One equilibrium as a flat row; the optional fields are present for Bayesian sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Row {
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub eq_index: usize,
    pub a_index: usize,
    pub b_index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2_index: Option<usize>,
    pub theta_a: f64,
    pub phi_a: f64,
    pub alpha_a: f64,
    pub theta_b: f64,
    pub phi_b: f64,
    pub alpha_b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_b2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_b2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_b2: Option<f64>,
    pub payoff_a: f64,
    pub payoff_b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payoff_b2: Option<f64>,
}

impl Row {
    pub fn is_bayesian(&self) -> bool {
        self.p.is_some()
    }

    fn from_record(r: &SweepRecord, eq_index: usize) -> Self {
        let idx = &r.equilibrium.strategy_indices;
        let pay = &r.equilibrium.payoffs;
        let sp = &r.strategy_params;
        let third = sp.get(2);
        Self {
            gamma: r.gamma,
            p: r.p,
            eq_index,
            a_index: idx[0],
            b_index: idx[1],
            b2_index: idx.get(2).copied(),
            theta_a: sp[0].theta(),
            phi_a: sp[0].phi(),
            alpha_a: sp[0].alpha(),
            theta_b: sp[1].theta(),
            phi_b: sp[1].phi(),
            alpha_b: sp[1].alpha(),
            theta_b2: third.map(StrategyParams::theta),
            phi_b2: third.map(StrategyParams::phi),
            alpha_b2: third.map(StrategyParams::alpha),
            payoff_a: pay[0],
            payoff_b: pay[1],
            payoff_b2: pay.get(2).copied(),
        }
    }

    fn to_record(&self, slack: f64) -> Result<SweepRecord, String> {
        let params = |t, p, a| StrategyParams::new_clamped(t, p, a, slack).map_err(|e| e.to_string());
        let mut strategy_indices = vec![self.a_index, self.b_index];
        let mut payoffs = vec![self.payoff_a, self.payoff_b];
        let mut strategy_params = vec![
            params(self.theta_a, self.phi_a, self.alpha_a)?,
            params(self.theta_b, self.phi_b, self.alpha_b)?,
        ];
        match (
            self.p,
            self.b2_index,
            self.theta_b2,
            self.phi_b2,
            self.alpha_b2,
            self.payoff_b2,
        ) {
            (None, None, None, None, None, None) => {}
            (Some(_), Some(i), Some(t), Some(p), Some(a), Some(pay)) => {
                strategy_indices.push(i);
                payoffs.push(pay);
                strategy_params.push(params(t, p, a)?);
            }
            _ => return Err("row mixes two-player and Bayesian fields".to_string()),
        }
        Ok(SweepRecord {
            gamma: self.gamma,
            p: self.p,
            equilibrium: NashEquilibrium {
                strategy_indices,
                payoffs,
            },
            strategy_params,
        })
    }

    fn csv_fields(&self) -> Vec<String> {
        let f = |x: f64| fmt_num(x);
        let opt = |x: Option<f64>| x.map(fmt_num).unwrap_or_default();
        let mut out = vec![f(self.gamma)];
        if self.is_bayesian() {
            out.push(opt(self.p));
        }
        out.extend([
            self.eq_index.to_string(),
            self.a_index.to_string(),
            self.b_index.to_string(),
        ]);
        if self.is_bayesian() {
            out.push(self.b2_index.map(|i| i.to_string()).unwrap_or_default());
        }
        out.extend([
            f(self.theta_a),
            f(self.phi_a),
            f(self.alpha_a),
            f(self.theta_b),
            f(self.phi_b),
            f(self.alpha_b),
        ]);
        if self.is_bayesian() {
            out.extend([opt(self.theta_b2), opt(self.phi_b2), opt(self.alpha_b2)]);
        }
        out.extend([f(self.payoff_a), f(self.payoff_b)]);
        if self.is_bayesian() {
            out.push(opt(self.payoff_b2));
        }
        out
    }
}

/// Rows for every record; `eq_index` counts from 0 within each `(γ, p)` point.
pub fn rows(records: &[SweepRecord]) -> Vec<Row> {
    let mut out = Vec::with_capacity(records.len());
    let mut key = None;
    let mut next = 0;
    for r in records {
        if key != Some((r.gamma, r.p)) {
            key = Some((r.gamma, r.p));
            next = 0;
        }
        out.push(Row::from_record(r, next));
        next += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub metadata: Metadata,
    pub records: Vec<Row>,
}

impl Document {
    pub fn new(metadata: Metadata, sweep: &Sweep) -> Self {
        Self {
            metadata,
            records: rows(&sweep.records),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_sweep(&self) -> Result<Sweep, String> {
        Ok(Sweep {
            gamma_points: self.metadata.gamma_points.clone(),
            p_points: self.metadata.p_points.clone(),
            records: self
                .records
                .iter()
                .map(|r| r.to_record(0.0))
                .collect::<Result<_, _>>()?,
        })
    }
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

/// Records as CSV; the header is written even when there are no records.
pub fn records_csv(records: &[SweepRecord], bayesian: bool) -> String {
    let mut w = csv_writer(Vec::new());
    if bayesian {
        w.write_record(BAYES_COLUMNS).expect("in-memory write");
    } else {
        w.write_record(TWO_PLAYER_COLUMNS).expect("in-memory write");
    }
    for row in rows(records) {
        w.write_record(row.csv_fields()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// Parses rows written by [`records_csv`].
pub fn read_rows_csv(text: &str) -> Result<Vec<Row>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    let expected: Vec<&str> = if headers.iter().any(|h| h == "p") {
        BAYES_COLUMNS.to_vec()
    } else {
        TWO_PLAYER_COLUMNS.to_vec()
    };
    if headers.iter().ne(expected.iter().copied()) {
        return Err(format!("unexpected CSV header; expected {}", expected.join(",")));
    }
    reader
        .deserialize::<Row>()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| format!("row {}: {e}", i + 2)))
        .collect()
}

/// A sweep loaded from a previous run's output, in either format.
#[derive(Debug, Clone)]
pub struct LoadedSweep {
    pub sweep: Sweep,
    pub games: Vec<String>,
}

/// Reads JSON when the file is `.json` or starts with `{`, CSV otherwise.
/// CSV carries no point lists, so the γ and p points are the distinct values found.
pub fn load_sweep(path: &Path) -> Result<LoadedSweep, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let bad = |message: String| CliError::Input {
        path: path.to_path_buf(),
        message,
    };
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) || text.trim_start().starts_with('{') {
        let doc = Document::from_json(&text).map_err(|e| bad(e.to_string()))?;
        return Ok(LoadedSweep {
            sweep: doc.to_sweep().map_err(bad)?,
            games: doc.metadata.games,
        });
    }
    let rows = read_rows_csv(&text).map_err(bad)?;
    let records: Vec<SweepRecord> = rows
        .iter()
        .map(|r| r.to_record(CSV_READ_SLACK))
        .collect::<Result<_, _>>()
        .map_err(bad)?;
    let distinct = |xs: Vec<f64>| {
        let mut xs = xs;
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs
    };
    let gamma_points = distinct(records.iter().map(|r| r.gamma).collect());
    let bayesian = records.first().is_some_and(|r| r.p.is_some());
    let p_points = bayesian.then(|| distinct(records.iter().filter_map(|r| r.p).collect()));
    Ok(LoadedSweep {
        sweep: Sweep {
            gamma_points,
            p_points,
            records,
        },
        games: Vec::new(),
    })
}

#[derive(Debug, Clone, Serialize)]
struct StrategyRow {
    index: usize,
    theta: f64,
    phi: f64,
    alpha: f64,
}

pub fn strategies_csv(grid: &StrategyGrid) -> String {
    let mut w = csv_writer(Vec::new());
    w.write_record(["index", "theta", "phi", "alpha"])
        .expect("in-memory write");
    for (i, e) in grid.entries().iter().enumerate() {
        let (t, p, a) = e.params.as_tuple();
        w.write_record([i.to_string(), fmt_num(t), fmt_num(p), fmt_num(a)])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn strategies_json(grid: &StrategyGrid) -> String {
    let rows: Vec<StrategyRow> = grid
        .entries()
        .iter()
        .enumerate()
        .map(|(index, e)| {
            let (theta, phi, alpha) = e.params.as_tuple();
            StrategyRow {
                index,
                theta,
                phi,
                alpha,
            }
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
    s.push('\n');
    s
}

/// A header plus numeric rows, for the analysis datasets.
pub fn table_csv<R: AsRef<[f64]>>(header: &[&str], rows: impl IntoIterator<Item = R>) -> String {
    let mut w = csv_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.as_ref().iter().map(|&x| fmt_num(x)))
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}
