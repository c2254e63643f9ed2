use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;
use std::path::Path;

use qgame_core::sweep::{gamma_points, nearest_point, p_points, records_in_slice};
use qgame_core::{
    bayes_sweep, gamma_sweep, payoff_branches, payoff_histogram, scatter_theta, theta_vs_payoff, EntanglementParam,
    GameDefinition, StrategyGrid, Sweep, SweepRecord,
};

use crate::args::{Command, Format};
use crate::catalogue::{load_catalogue, GameCatalogue};
use crate::config::{RunConfig, DEFAULT_GAMMA_SLICE};
use crate::error::CliError;
use crate::output::{self, Document, Metadata};
use crate::svg::{Mark, Plot, Series, BLUE, PALETTE, RED};

/// Payoff vectors closer than this are drawn as one point.
const BRANCH_TOL: f64 = 1e-9;
const MAX_P_SERIES: usize = 5;

pub fn execute(command: Command, cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    if let Some(n) = cfg.threads {
        // Fails only if a pool already exists, e.g. on a second call in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match command {
        Command::Solve => solve(cfg, stdout),
        Command::Sweep => sweep(cfg, stdout),
        Command::BayesSweep => bayes(cfg, stdout),
        Command::Analyze => analyze(cfg, stdout),
        Command::Strategies => strategies(cfg, stdout),
    }
}

fn pick<'a>(cat: &'a GameCatalogue, name: Option<&str>, flag: &str) -> Result<&'a GameDefinition, CliError> {
    match name {
        Some(n) => Ok(cat.get(n)?),
        None => Err(CliError::config(format!(
            "no game selected; pass {flag} NAME (available: {})",
            cat.names().join(", ")
        ))),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn emit(cfg: &RunConfig, contents: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => write_file(path, contents),
        None => stdout
            .write_all(contents.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn emit_sweep(
    cfg: &RunConfig,
    command: Command,
    games: &[&GameDefinition],
    grid: &StrategyGrid,
    sweep: &Sweep,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let text = match cfg.format {
        Format::Csv => output::records_csv(&sweep.records, sweep.p_points.is_some()),
        Format::Json => {
            let names = games.iter().map(|g| g.name.clone()).collect();
            let meta = Metadata::new(command.name(), names, cfg.steps, cfg.epsilon, grid.len(), sweep);
            Document::new(meta, sweep).to_json()
        }
    };
    emit(cfg, &text, stdout)
}

fn solve(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cat = load_catalogue(cfg.catalogue.as_deref())?;
    let game = pick(&cat, cfg.game.as_deref(), "--game")?;
    EntanglementParam::new(cfg.gamma)?;
    let grid = StrategyGrid::build(cfg.steps);
    let result = gamma_sweep(game, &grid, &[cfg.gamma], cfg.epsilon)?;
    let plot = cfg
        .plot
        .as_ref()
        .map(|_| payoff_plot(&format!("{} equilibria", game.name), &result));
    emit_sweep(cfg, Command::Solve, &[game], &grid, &result, stdout)?;
    write_plot(cfg.plot.as_deref(), plot)
}

fn sweep(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cat = load_catalogue(cfg.catalogue.as_deref())?;
    let game = pick(&cat, cfg.game.as_deref(), "--game")?;
    let grid = StrategyGrid::build(cfg.steps);
    let result = gamma_sweep(game, &grid, &gamma_points(cfg.gamma_points), cfg.epsilon)?;
    let plot = cfg
        .plot
        .as_ref()
        .map(|_| payoff_plot(&format!("{} equilibria", game.name), &result));
    emit_sweep(cfg, Command::Sweep, &[game], &grid, &result, stdout)?;
    write_plot(cfg.plot.as_deref(), plot)
}

fn bayes(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cat = load_catalogue(cfg.catalogue.as_deref())?;
    let g1 = pick(&cat, cfg.game.as_deref(), "--game")?;
    let g2 = pick(&cat, cfg.game2.as_deref(), "--game2")?;
    let grid = StrategyGrid::build(cfg.steps);
    let result = bayes_sweep(
        g1,
        g2,
        &grid,
        &gamma_points(cfg.gamma_points),
        &p_points(cfg.p_points),
        cfg.epsilon,
    )?;
    let plot = cfg
        .plot
        .as_ref()
        .map(|_| bayes_plot(&format!("{} / {} mixture, player A", g1.name, g2.name), &result));
    emit_sweep(cfg, Command::BayesSweep, &[g1, g2], &grid, &result, stdout)?;
    write_plot(cfg.plot.as_deref(), plot)
}

fn write_plot(path: Option<&Path>, svg: Option<String>) -> Result<(), CliError> {
    match (path, svg) {
        (Some(p), Some(s)) => write_file(p, &s),
        _ => Ok(()),
    }
}

/// A's payoffs as blue circles and B's as red crosses, one point per payoff class.
pub fn payoff_plot(title: &str, sweep: &Sweep) -> String {
    let branches = payoff_branches(&sweep.records, BRANCH_TOL);
    let mut plot = Plot::new(title, "entanglement γ", "payoff").with_x_range(0.0, FRAC_PI_2);
    let a = branches.iter().map(|b| (b.gamma, b.payoffs[0])).collect();
    let b = branches.iter().map(|b| (b.gamma, b.payoffs[1])).collect();
    plot.push(Series::new("player A", BLUE, Mark::Circle, a));
    plot.push(Series::new("player B", RED, Mark::Cross, b));
    plot.render()
}

/// Evenly spaced members of `points`, always including both ends.
fn spread(points: &[f64], k: usize) -> Vec<f64> {
    if points.len() <= k {
        return points.to_vec();
    }
    let mut out: Vec<f64> = (0..k)
        .map(|i| points[(i * (points.len() - 1) + (k - 1) / 2) / (k - 1)])
        .collect();
    out.dedup();
    out
}

/// A's payoff against γ, one series per selected prior.
pub fn bayes_plot(title: &str, sweep: &Sweep) -> String {
    let branches = payoff_branches(&sweep.records, BRANCH_TOL);
    let ps = spread(sweep.p_points.as_deref().unwrap_or(&[]), MAX_P_SERIES);
    let mut plot = Plot::new(title, "entanglement γ", "payoff to A").with_x_range(0.0, FRAC_PI_2);
    for (i, p) in ps.iter().enumerate() {
        let pts = branches
            .iter()
            .filter(|b| b.p == Some(*p))
            .map(|b| (b.gamma, b.payoffs[0]))
            .collect();
        plot.push(Series::new(
            format!("p = {}", output::fmt_num(*p)),
            PALETTE[i % PALETTE.len()],
            Mark::Circle,
            pts,
        ));
    }
    plot.render()
}

fn strategies(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let grid = StrategyGrid::build(cfg.steps);
    let text = match cfg.format {
        Format::Csv => output::strategies_csv(&grid),
        Format::Json => output::strategies_json(&grid),
    };
    emit(cfg, &text, stdout)
}

/// The three analysis tables as `(file stem, csv)`.
pub struct Analysis {
    pub gamma_slice: f64,
    pub tables: Vec<(&'static str, String)>,
    pub plots: Vec<(&'static str, String)>,
}

/// Resolves the histogram slice against the sweep's γ points.
pub fn resolve_slice(requested: Option<f64>, points: &[f64]) -> Result<f64, CliError> {
    let requested = match (requested, points) {
        (Some(g), _) => g,
        (None, [only]) => *only,
        (None, _) => DEFAULT_GAMMA_SLICE,
    };
    nearest_point(points, requested).ok_or_else(|| match (points.first(), points.last()) {
        (Some(lo), Some(hi)) => CliError::config(format!(
            "gamma slice {} outside the sweep range [{}, {}]",
            output::fmt_num(requested),
            output::fmt_num(*lo),
            output::fmt_num(*hi)
        )),
        _ => CliError::config("sweep has no gamma points"),
    })
}

fn keyed(r: &SweepRecord, tail: [f64; 2]) -> Vec<f64> {
    let mut v = vec![r.gamma];
    v.extend(r.p);
    v.extend(tail);
    v
}

pub fn analyze_sweep(sweep: &Sweep, gamma_slice: Option<f64>, bin_width: f64) -> Result<Analysis, CliError> {
    let slice = resolve_slice(gamma_slice, &sweep.gamma_points)?;
    let bayesian = sweep.p_points.is_some();
    let records = &sweep.records;

    let scatter = scatter_theta(records);
    let vs_payoff = theta_vs_payoff(records);
    let hist = payoff_histogram(records, slice, bin_width)?;

    let lead: &[&str] = if bayesian { &["gamma", "p"] } else { &["gamma"] };
    let header = |tail: [&'static str; 2]| lead.iter().copied().chain(tail).collect::<Vec<_>>();
    let scatter_rows = records.iter().map(|r| keyed(r, [r.theta_a(), r.theta_b()]));
    let payoff_rows = records.iter().map(|r| keyed(r, [r.theta_a(), r.payoff_a()]));
    let hist_csv = output::table_csv(&["bin_center", "count"], hist.iter().map(|&(c, n)| [c, n as f64]));

    let mut theta_plot = Plot::new("θ at equilibrium", "θ_A", "θ_B").with_x_range(-0.1, PI + 0.1);
    theta_plot.y_range = Some((-0.1, PI + 0.1));
    theta_plot.push(Series::new(
        "θ_A = θ_B",
        "#999999",
        Mark::Line,
        vec![(0.0, 0.0), (PI, PI)],
    ));
    theta_plot.push(Series::new("equilibria", BLUE, Mark::Circle, scatter));

    let slice_count = records_in_slice(records, slice).len();
    let mut hist_plot = Plot::new(
        &format!(
            "payoff to A at γ = {} ({slice_count} equilibria)",
            output::fmt_num(slice)
        ),
        "payoff to A",
        "count",
    );
    let bars = hist.iter().map(|&(c, n)| (c, n as f64)).collect();
    hist_plot.push(Series::new("count", BLUE, Mark::Bars(bin_width), bars));

    let mut tp_plot = Plot::new("θ_A against payoff", "θ_A", "payoff to A").with_x_range(-0.1, PI + 0.1);
    tp_plot.push(Series::new("equilibria", BLUE, Mark::Circle, vs_payoff));

    Ok(Analysis {
        gamma_slice: slice,
        tables: vec![
            (
                "theta_scatter",
                output::table_csv(&header(["theta_a", "theta_b"]), scatter_rows),
            ),
            ("payoff_histogram", hist_csv),
            (
                "theta_payoff",
                output::table_csv(&header(["theta_a", "payoff_a"]), payoff_rows),
            ),
        ],
        plots: vec![
            ("theta_scatter", theta_plot.render()),
            ("payoff_histogram", hist_plot.render()),
            ("theta_payoff", tp_plot.render()),
        ],
    })
}

fn analyze(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let sweep = match &cfg.input {
        Some(path) => output::load_sweep(path)?.sweep,
        None => {
            let cat = load_catalogue(cfg.catalogue.as_deref())?;
            let g1 = pick(&cat, cfg.game.as_deref(), "--game or --input")?;
            let grid = StrategyGrid::build(cfg.steps);
            let gammas = gamma_points(cfg.gamma_points);
            match cfg.game2.as_deref() {
                Some(name) => bayes_sweep(g1, cat.get(name)?, &grid, &gammas, &p_points(cfg.p_points), cfg.epsilon)?,
                None => gamma_sweep(g1, &grid, &gammas, cfg.epsilon)?,
            }
        }
    };
    let analysis = analyze_sweep(&sweep, cfg.gamma_slice, cfg.bin_width)?;

    match &cfg.out {
        Some(dir) => {
            for (stem, csv) in &analysis.tables {
                write_file(&dir.join(format!("{stem}.csv")), csv)?;
            }
        }
        None => {
            let mut text = String::new();
            for (i, (stem, csv)) in analysis.tables.iter().enumerate() {
                if i > 0 {
                    text.push('\n');
                }
                text.push_str(&format!("# {stem}\n{csv}"));
            }
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io("<stdout>", e))?;
        }
    }
    if let Some(dir) = &cfg.plot {
        for (stem, svg) in &analysis.plots {
            write_file(&dir.join(format!("{stem}.svg")), svg)?;
        }
    }
    Ok(())
}
