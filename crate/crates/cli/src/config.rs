//! Run configuration: a TOML file with `[run]`, `[grid]`, `[output]` and
//! `[analyze]` sections, overridden key by key from command-line flags.
//!
//! ```toml
//! [run]
//! game = "prisoners_dilemma"
//! epsilon = 1e-9
//!
//! [grid]
//! steps = ["pi", "pi/2", "pi/2"]
//! gamma_points = 65
//!
//! [output]
//! out = "pd.json"
//! plot = "pd.svg"
//! ```

use std::path::{Path, PathBuf};

use qgame_core::{SteppingParams, DEFAULT_EPSILON};
use serde::Deserialize;

use crate::angle::parse_angle;
use crate::args::{Flags, Format};
use crate::error::CliError;

pub const DEFAULT_GAMMA_SLICE: f64 = 0.7;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Angle {
    Number(f64),
    Text(String),
}

impl Angle {
    fn resolve(&self, key: &str) -> Result<f64, CliError> {
        match self {
            Self::Number(x) => Ok(*x),
            Self::Text(s) => parse_angle(s).map_err(|e| CliError::config(format!("{key}: {e}"))),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    game: Option<String>,
    game2: Option<String>,
    catalogue: Option<PathBuf>,
    epsilon: Option<f64>,
    threads: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    steps: Option<[Angle; 3]>,
    gamma: Option<Angle>,
    gamma_points: Option<usize>,
    p_points: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    out: Option<PathBuf>,
    format: Option<String>,
    plot: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalyzeSection {
    input: Option<PathBuf>,
    gamma_slice: Option<Angle>,
    bin_width: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    run: RunSection,
    #[serde(default)]
    grid: GridSection,
    #[serde(default)]
    output: OutputSection,
    #[serde(default)]
    analyze: AnalyzeSection,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub game: Option<String>,
    pub game2: Option<String>,
    pub catalogue: Option<PathBuf>,
    pub steps: SteppingParams,
    pub gamma: f64,
    pub gamma_points: usize,
    pub p_points: usize,
    pub epsilon: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub plot: Option<PathBuf>,
    pub threads: Option<usize>,
    pub input: Option<PathBuf>,
    /// `None` means "not given"; analyze then picks a default.
    pub gamma_slice: Option<f64>,
    pub bin_width: f64,
}

fn relative_to(base: Option<&Path>, p: PathBuf) -> PathBuf {
    match base {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p,
    }
}

fn parse_format(s: &str) -> Result<Format, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        _ => Err(CliError::config(format!(
            "format must be \"csv\" or \"json\", got {s:?}"
        ))),
    }
}

fn is_json_path(p: &Path) -> bool {
    p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

impl RunConfig {
    /// Reads `flags.config` if set, then applies the flags on top.
    pub fn resolve(flags: &Flags) -> Result<Self, CliError> {
        let (file, base) = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                let file = parse_config(&text, path)?;
                (file, path.parent().map(Path::to_path_buf))
            }
            None => (ConfigFile::default(), None),
        };
        Self::merge(file, base.as_deref(), flags)
    }

    /// Resolves a config given as text; relative paths stay as written.
    pub fn from_str(text: &str, flags: &Flags) -> Result<Self, CliError> {
        Self::merge(parse_config(text, Path::new("<config>"))?, None, flags)
    }

    fn merge(file: ConfigFile, base: Option<&Path>, flags: &Flags) -> Result<Self, CliError> {
        let path = |p: Option<PathBuf>| p.map(|p| relative_to(base, p));

        let steps = match (flags.steps, &file.grid.steps) {
            (Some(t), _) => t,
            (None, Some([t, p, a])) => (t.resolve("steps")?, p.resolve("steps")?, a.resolve("steps")?),
            (None, None) => SteppingParams::coarse().as_tuple(),
        };
        let steps = SteppingParams::new(steps.0, steps.1, steps.2)?;

        let gamma = match (flags.gamma, &file.grid.gamma) {
            (Some(g), _) => g,
            (None, Some(g)) => g.resolve("gamma")?,
            (None, None) => 0.0,
        };
        let gamma_slice = match (flags.gamma_slice, &file.analyze.gamma_slice) {
            (Some(g), _) => Some(g),
            (None, Some(g)) => Some(g.resolve("gamma_slice")?),
            (None, None) => None,
        };

        let out = flags.out.clone().or_else(|| path(file.output.out));
        let format = match (flags.format, file.output.format.as_deref()) {
            (Some(f), _) => f,
            (None, Some(s)) => parse_format(s)?,
            (None, None) if out.as_deref().is_some_and(is_json_path) => Format::Json,
            (None, None) => Format::Csv,
        };

        let cfg = Self {
            game: flags.game.clone().or(file.run.game),
            game2: flags.game2.clone().or(file.run.game2),
            catalogue: flags.catalogue.clone().or_else(|| path(file.run.catalogue)),
            steps,
            gamma,
            gamma_points: flags
                .gamma_grid
                .or(file.grid.gamma_points)
                .unwrap_or(qgame_core::sweep::DEFAULT_GAMMA_POINTS),
            p_points: flags
                .p_grid
                .or(file.grid.p_points)
                .unwrap_or(qgame_core::sweep::DEFAULT_P_POINTS),
            epsilon: flags.epsilon.or(file.run.epsilon).unwrap_or(DEFAULT_EPSILON),
            out,
            format,
            plot: flags.plot.clone().or_else(|| path(file.output.plot)),
            threads: flags.threads.or(file.run.threads),
            input: flags.input.clone().or_else(|| path(file.analyze.input)),
            gamma_slice,
            bin_width: flags
                .bin_width
                .or(file.analyze.bin_width)
                .unwrap_or(qgame_core::sweep::DEFAULT_BIN_WIDTH),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.gamma_points == 0 {
            return Err(CliError::config("gamma grid must have at least one point"));
        }
        if self.p_points == 0 {
            return Err(CliError::config("p grid must have at least one point"));
        }
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(CliError::config(format!(
                "epsilon must be finite and non-negative, got {}",
                self.epsilon
            )));
        }
        if self.threads == Some(0) {
            return Err(CliError::config("threads must be at least 1"));
        }
        if !(self.bin_width.is_finite() && self.bin_width > 0.0) {
            return Err(CliError::config(format!(
                "bin width must be positive, got {}",
                self.bin_width
            )));
        }
        Ok(())
    }
}

fn parse_config(text: &str, origin: &Path) -> Result<ConfigFile, CliError> {
    toml::from_str(text).map_err(|e| {
        let at = e
            .span()
            .map(|s| {
                let before = &text[..s.start.min(text.len())];
                format!(":{}", before.matches('\n').count() + 1)
            })
            .unwrap_or_default();
        CliError::config(format!("{}{at}: {}", origin.display(), e.message().trim()))
    })
}
