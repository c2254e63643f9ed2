//! Named game definitions read from a TOML catalogue.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qgame_core::GameDefinition;
use serde::Deserialize;
use thiserror::Error;

/// The catalogue shipped with the tool.
pub const DEFAULT_CATALOGUE: &str = include_str!("../catalogue/games.toml");

#[derive(Debug, Error)]
pub enum CatalogueError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{origin}:{line}:{column}: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{origin}: catalogue contains no games")]
    Empty { origin: String },

    #[error("{origin}: game {game:?}: {reason}")]
    Invalid {
        origin: String,
        game: String,
        reason: String,
    },

    #[error("unknown game {name:?}; available: {}", available.join(", "))]
    UnknownGame { name: String, available: Vec<String> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGame {
    payoff_a: Vec<f64>,
    payoff_b: Vec<f64>,
    #[serde(default)]
    #[allow(dead_code)]
    source: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct GameCatalogue {
    games: BTreeMap<String, GameDefinition>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn four(origin: &str, game: &str, field: &str, values: Vec<f64>) -> Result<[f64; 4], CatalogueError> {
    let n = values.len();
    values.try_into().map_err(|_| CatalogueError::Invalid {
        origin: origin.to_string(),
        game: game.to_string(),
        reason: format!("{field} has {n} entries, expected 4 (outcomes 00, 01, 10, 11)"),
    })
}

impl GameCatalogue {
    /// Parses catalogue text; `origin` names the source in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self, CatalogueError> {
        let raw: BTreeMap<String, RawGame> = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
            CatalogueError::Parse {
                origin: origin.to_string(),
                line,
                column,
                message: e.message().trim().to_string(),
            }
        })?;
        if raw.is_empty() {
            return Err(CatalogueError::Empty {
                origin: origin.to_string(),
            });
        }
        let mut games = BTreeMap::new();
        for (name, g) in raw {
            let a = four(origin, &name, "payoff_a", g.payoff_a)?;
            let b = four(origin, &name, "payoff_b", g.payoff_b)?;
            let game = GameDefinition::new(name.clone(), a, b).map_err(|e| CatalogueError::Invalid {
                origin: origin.to_string(),
                game: name.clone(),
                reason: e.to_string(),
            })?;
            games.insert(name, game);
        }
        Ok(Self { games })
    }

    pub fn load(path: &Path) -> Result<Self, CatalogueError> {
        let text = std::fs::read_to_string(path).map_err(|source| CatalogueError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_CATALOGUE, "builtin catalogue").expect("shipped catalogue is valid")
    }

    pub fn get(&self, name: &str) -> Result<&GameDefinition, CatalogueError> {
        self.games.get(name).ok_or_else(|| CatalogueError::UnknownGame {
            name: name.to_string(),
            available: self.names(),
        })
    }

    pub fn names(&self) -> Vec<String> {
        self.games.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.games.len()
    }

    pub fn is_empty(&self) -> bool {
        self.games.is_empty()
    }

    pub fn games(&self) -> impl Iterator<Item = &GameDefinition> {
        self.games.values()
    }
}

/// Loads `path`, or the shipped catalogue when no path is given.
pub fn load_catalogue(path: Option<&Path>) -> Result<GameCatalogue, CatalogueError> {
    match path {
        Some(p) => GameCatalogue::load(p),
        None => Ok(GameCatalogue::builtin()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_prisoners_dilemma() {
        let cat = GameCatalogue::builtin();
        let pd = cat.get("prisoners_dilemma").unwrap();
        assert_eq!(pd.payoff_a, [3.0, 0.0, 5.0, 1.0]);
        assert_eq!(pd.payoff_b, [3.0, 5.0, 0.0, 1.0]);
        assert_eq!(pd, &GameDefinition::prisoners_dilemma());
        for name in ["deadlock", "stag_hunt", "das_brother", "matching_pennies"] {
            assert!(cat.get(name).is_ok(), "{name}");
        }
        assert!(cat.get("type_b").is_err());
        assert_eq!(cat.get("matching_pennies").unwrap().constant_sum(), Some(0.0));
    }

    #[test]
    fn three_entries_names_the_game() {
        let text = "[broken]\npayoff_a = [1, 2, 3]\npayoff_b = [1, 2, 3, 4]\n";
        let err = GameCatalogue::parse(text, "t.toml").unwrap_err();
        assert!(matches!(&err, CatalogueError::Invalid { game, .. } if game == "broken"));
        assert!(err.to_string().contains("payoff_a has 3 entries"));
    }

    #[test]
    fn empty_file_is_a_parse_error() {
        assert!(matches!(
            GameCatalogue::parse("", "e"),
            Err(CatalogueError::Empty { .. })
        ));
        assert!(matches!(
            GameCatalogue::parse("# nothing\n", "e"),
            Err(CatalogueError::Empty { .. })
        ));
    }

    #[test]
    fn malformed_reports_position() {
        let text = "[ok]\npayoff_a = [1, 2, 3, 4]\npayoff_b = [1, 2, 3, 4\n";
        match GameCatalogue::parse(text, "m.toml").unwrap_err() {
            CatalogueError::Parse { line, .. } => assert!(line >= 3),
            other => panic!("unexpected {other:?}"),
        }
        let unknown_field = "[g]\npayoff_a = [1, 2, 3, 4]\npayoff_b = [1, 2, 3, 4]\npayoff_c = 1\n";
        assert!(matches!(
            GameCatalogue::parse(unknown_field, "u"),
            Err(CatalogueError::Parse { .. })
        ));
    }

    #[test]
    fn duplicate_and_non_finite_are_rejected() {
        let dup = "[g]\npayoff_a = [1, 2, 3, 4]\npayoff_b = [1, 2, 3, 4]\n[g]\npayoff_a = [1, 2, 3, 4]\npayoff_b = [1, 2, 3, 4]\n";
        assert!(GameCatalogue::parse(dup, "d").is_err());
        let inf = "[g]\npayoff_a = [1, 2, inf, 4]\npayoff_b = [1, 2, 3, 4]\n";
        assert!(matches!(
            GameCatalogue::parse(inf, "i"),
            Err(CatalogueError::Invalid { .. })
        ));
    }

    #[test]
    fn unknown_game_lists_names() {
        let msg = GameCatalogue::builtin().get("chess").unwrap_err().to_string();
        assert!(msg.contains("prisoners_dilemma") && msg.contains("stag_hunt"));
    }

    #[test]
    fn names_are_case_sensitive() {
        let text = "[G]\npayoff_a = [1, 2, 3, 4]\npayoff_b = [1, 2, 3, 4]\n[g]\npayoff_a = [0, 0, 0, 0]\npayoff_b = [0, 0, 0, 0]\n";
        let cat = GameCatalogue::parse(text, "c").unwrap();
        assert_eq!(cat.len(), 2);
    }
}
