//! Run configuration: a flat `key = value` file, `#` comments, unknown keys
//! rejected. Command-line flags are applied through the same [`RunConfig::set`]
//! after the file, so they override it.
//!
//! | key | value |
//! |---|---|
//! | `maze` | path to a maze file |
//! | `m`, `maze_seed` | generate the maze instead (default seed 0) |
//! | `start`, `goal` | `row,col` overrides |
//! | `n` | path length (required) |
//! | `formula` | `maintext` \| `appendix` |
//! | `mode` | `wall-aware` \| `bounds` \| `blind` |
//! | `cutoff0` | initial cutoff |
//! | `epsilon` | failure budget in (0, 1) |
//! | `rounds` | round cap `T` |
//! | `policy` | `known-k` \| `guessed-k` |
//! | `strictness` | `strict` \| `ge-at-max` |
//! | `samples` | `auto` or shots per round |
//! | `seed` | search seed |
//! | `stop_at_optimum` | `true` \| `false` |
//! | `out` | output path |
//! | `format` | `csv` \| `json` |

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::codec;
use crate::error::{Error, Result};
use crate::fitness::{FitnessFormula, FitnessSpec};
use crate::maze::{Cell, Maze, SimMode};
use crate::search::SearchConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            o => Err(Error::invalid(format!("unknown format {o:?} (expected csv|json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MazeSource {
    File(PathBuf),
    Generated { m: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub maze: MazeSource,
    pub start: Option<Cell>,
    pub goal: Option<Cell>,
    pub n: u32,
    pub formula: FitnessFormula,
    pub mode: SimMode,
    pub search: SearchConfig,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Accumulates settings before validation.
#[derive(Debug, Clone, Default)]
pub struct ConfigBuilder {
    maze: Option<PathBuf>,
    m: Option<usize>,
    maze_seed: Option<u64>,
    start: Option<Cell>,
    goal: Option<Cell>,
    n: Option<u32>,
    formula: FitnessFormula,
    mode: SimMode,
    search: SearchConfig,
    out: Option<PathBuf>,
    format: OutputFormat,
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
}

fn parse_cell(key: &str, v: &str) -> Result<Cell> {
    let (r, c) = v.split_once(',').ok_or_else(|| Error::Config(format!("{key}: expected row,col, got {v:?}")))?;
    Ok(Cell::new(parse_num(key, r.trim())?, parse_num(key, c.trim())?))
}

fn wrap<T>(key: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Config(format!("{key}: {e}")))
}

impl ConfigBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses file text; relative `maze` and `out` paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<ConfigBuilder> {
        let mut b = ConfigBuilder::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: i + 1, message: format!("expected key = value, got {line:?}") })?;
            let (k, v) = (k.trim(), v.trim());
            let v = match k {
                "maze" | "out" => base.join(v).to_string_lossy().into_owned(),
                _ => v.to_string(),
            };
            b.set(k, &v).map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })?;
        }
        Ok(b)
    }

    pub fn load(path: &Path) -> Result<ConfigBuilder> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "maze" => self.maze = Some(PathBuf::from(v)),
            "m" => self.m = Some(parse_num(key, v)?),
            "maze_seed" => self.maze_seed = Some(parse_num(key, v)?),
            "start" => self.start = Some(parse_cell(key, v)?),
            "goal" => self.goal = Some(parse_cell(key, v)?),
            "n" => self.n = Some(parse_num(key, v)?),
            "formula" => self.formula = wrap(key, v.parse())?,
            "mode" => self.mode = wrap(key, v.parse())?,
            "cutoff0" => self.search.initial_cutoff = parse_num(key, v)?,
            "epsilon" => self.search.epsilon = parse_num(key, v)?,
            "rounds" => self.search.max_rounds = Some(parse_num(key, v)?),
            "policy" => self.search.policy = wrap(key, v.parse())?,
            "strictness" => self.search.strictness = wrap(key, v.parse())?,
            "samples" => self.search.samples = wrap(key, v.parse())?,
            "seed" => self.search.seed = parse_num(key, v)?,
            "stop_at_optimum" => self.search.stop_at_optimum = parse_num(key, v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            "format" => self.format = wrap(key, v.parse())?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn build(self) -> Result<RunConfig> {
        let maze = match (self.maze, self.m) {
            (Some(_), Some(_)) => return Err(Error::Config("give either maze or m, not both".into())),
            (Some(p), None) => {
                if !p.is_file() {
                    return Err(Error::Config(format!("maze file {} does not exist", p.display())));
                }
                MazeSource::File(p)
            }
            (None, Some(m)) => MazeSource::Generated { m, seed: self.maze_seed.unwrap_or(0) },
            (None, None) => return Err(Error::Config("no maze: set maze or m".into())),
        };
        let n = self.n.ok_or_else(|| Error::Config("n is required".into()))?;
        codec::check_len(n)?;
        self.search.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(RunConfig {
            maze,
            start: self.start,
            goal: self.goal,
            n,
            formula: self.formula,
            mode: self.mode,
            search: self.search,
            out: self.out,
            format: self.format,
        })
    }
}

impl RunConfig {
    pub fn load_maze(&self) -> Result<Maze> {
        let maze = match &self.maze {
            MazeSource::File(p) => Maze::parse(&std::fs::read_to_string(p)?)?,
            MazeSource::Generated { m, seed } => Maze::generate(*m, *seed)?,
        };
        if self.start.is_none() && self.goal.is_none() {
            return Ok(maze);
        }
        let (s, g) = (self.start.unwrap_or(maze.start()), self.goal.unwrap_or(maze.goal()));
        maze.with_endpoints(s, g)
    }

    pub fn fitness_spec(&self, maze: &Maze) -> Result<FitnessSpec> {
        FitnessSpec::new(maze.size(), self.formula, self.mode)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{Policy, Samples};

    #[test]
    fn parses_and_overrides() {
        let text = "# small run\nm = 3\nmaze_seed = 4\nn = 2  # two steps\npolicy = guessed-k\nsamples = 16\n";
        let mut b = ConfigBuilder::parse(text, Path::new(".")).unwrap();
        b.set("seed", "99").unwrap();
        let c = b.build().unwrap();
        assert_eq!(c.maze, MazeSource::Generated { m: 3, seed: 4 });
        assert_eq!(c.n, 2);
        assert_eq!(c.search.policy, Policy::GuessedK);
        assert_eq!(c.search.samples, Samples::Fixed(16));
        assert_eq!(c.search.seed, 99);
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        let e = ConfigBuilder::parse("m = 2\nepsilom = 0.1\n", Path::new(".")).unwrap_err();
        assert!(e.to_string().contains("line 2") && e.to_string().contains("epsilom"));
        assert!(ConfigBuilder::parse("m 2\n", Path::new(".")).is_err());
        assert!(ConfigBuilder::parse("mode = sideways\n", Path::new(".")).is_err());
    }

    #[test]
    fn build_checks() {
        let mut b = ConfigBuilder::new();
        b.set("m", "2").unwrap();
        assert!(b.clone().build().is_err()); // no n
        b.set("n", "12").unwrap();
        assert!(matches!(b.clone().build(), Err(Error::CapExceeded { .. })));
        let mut f = ConfigBuilder::new();
        f.set("maze", "/nonexistent/maze.txt").unwrap();
        f.set("n", "2").unwrap();
        assert!(f.build().is_err());
        let mut e = ConfigBuilder::new();
        for (k, v) in [("m", "2"), ("n", "2"), ("epsilon", "1.5")] {
            e.set(k, v).unwrap();
        }
        assert!(e.build().is_err());
    }
}
