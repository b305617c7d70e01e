//! Classical reference fitness: the ground truth for the gate-level circuits
//! and the source of the diagonal oracle used by the amplitude engine.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{self, PathIndex};
use crate::error::{Error, Result};
use crate::maze::{Direction, Maze, SimMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum FitnessFormula {
    /// `C − d` with `C = 2^r` the smallest power of two strictly above `2(m−1)²`.
    #[default]
    MainText,
    /// `2m − d`.
    AppendixLinear,
}

impl std::str::FromStr for FitnessFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maintext" => Ok(FitnessFormula::MainText),
            "appendix" => Ok(FitnessFormula::AppendixLinear),
            other => Err(Error::invalid(format!("unknown formula {other:?} (expected maintext|appendix)"))),
        }
    }
}

impl FitnessFormula {
    pub fn name(self) -> &'static str {
        match self {
            FitnessFormula::MainText => "maintext",
            FitnessFormula::AppendixLinear => "appendix",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitnessSpec {
    pub grid_size: usize,
    /// The offset `C`; the best attainable fitness.
    pub offset: i64,
    /// MainText: `C = 2^r`. AppendixLinear: `r = ⌈log₂(2m+1)⌉`.
    pub r: u32,
    pub formula: FitnessFormula,
    pub mode: SimMode,
}

impl FitnessSpec {
    pub fn new(grid_size: usize, formula: FitnessFormula, mode: SimMode) -> Result<FitnessSpec> {
        if grid_size < 2 {
            return Err(Error::invalid("m must be ≥ 2"));
        }
        let m = grid_size as i64;
        let (offset, r) = match formula {
            FitnessFormula::MainText => {
                let bound = 2 * (m - 1) * (m - 1);
                let mut r = 0u32;
                while (1i64 << r) <= bound {
                    r += 1;
                }
                (1i64 << r, r)
            }
            FitnessFormula::AppendixLinear => {
                let c = 2 * m;
                (c, bits_for(c as u64))
            }
        };
        Ok(FitnessSpec { grid_size, offset, r, formula, mode })
    }

    /// Width of a register that holds every in-grid fitness value, `C` included.
    pub fn register_width(&self) -> u32 {
        match self.formula {
            FitnessFormula::MainText => self.r + 1,
            FitnessFormula::AppendixLinear => self.r,
        }
    }

    pub fn fitness(&self, maze: &Maze, path: &[Direction]) -> i64 {
        let end = maze.simulate_path(path, self.mode).end();
        self.offset - end.squared_distance(maze.goal())
    }

    pub fn fitness_of(&self, maze: &Maze, index: PathIndex) -> i64 {
        self.fitness(maze, &codec::decode_index(index))
    }

    fn check_maze(&self, maze: &Maze) -> Result<()> {
        if maze.size() != self.grid_size {
            return Err(Error::invalid(format!(
                "fitness spec built for m={} used with an m={} maze",
                self.grid_size,
                maze.size()
            )));
        }
        Ok(())
    }
}

/// Number of bits needed to write `v` in binary.
pub(crate) fn bits_for(v: u64) -> u32 {
    64 - v.leading_zeros()
}

/// Fitness of every path of length `n`, indexed by path-register value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FitnessLandscape {
    n: u32,
    values: Vec<i64>,
}

impl FitnessLandscape {
    pub fn build(maze: &Maze, n: u32, spec: &FitnessSpec) -> Result<FitnessLandscape> {
        spec.check_maze(maze)?;
        let count = codec::path_count(n)?;
        let values = (0..count as u64)
            .into_par_iter()
            .map(|v| {
                let idx = PathIndex::new(v, n).expect("value < 4^n");
                spec.fitness_of(maze, idx)
            })
            .collect();
        Ok(FitnessLandscape { n, values })
    }

    pub fn from_values(n: u32, values: Vec<i64>) -> Result<FitnessLandscape> {
        let count = codec::path_count(n)?;
        if values.len() != count {
            return Err(Error::invalid(format!("landscape for n={n} needs {count} values, got {}", values.len())));
        }
        Ok(FitnessLandscape { n, values })
    }

    pub fn path_len(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, index: usize) -> i64 {
        self.values[index]
    }

    pub fn max(&self) -> i64 {
        *self.values.iter().max().expect("landscape is never empty")
    }

    pub fn min(&self) -> i64 {
        *self.values.iter().min().expect("landscape is never empty")
    }

    /// Indices attaining the maximum, ascending.
    pub fn argmax(&self) -> Vec<usize> {
        let best = self.max();
        self.marked_where(|f| f == best).indices
    }

    /// Indices with fitness strictly above `cutoff`.
    pub fn marked_set(&self, cutoff: i64) -> MarkedSet {
        self.marked_where(|f| f > cutoff)
    }

    /// Indices with fitness at or above `cutoff`.
    pub fn marked_at_least(&self, cutoff: i64) -> MarkedSet {
        self.marked_where(|f| f >= cutoff)
    }

    fn marked_where(&self, pred: impl Fn(i64) -> bool) -> MarkedSet {
        let indices = self.values.iter().enumerate().filter(|(_, &f)| pred(f)).map(|(i, _)| i).collect();
        MarkedSet { indices, universe: self.values.len() }
    }

    /// The same landscape as read from a `width`-bit fitness register
    /// (values reduced modulo `2^width`).
    pub fn wrapped(&self, width: u32) -> FitnessLandscape {
        let modulus = 1i64 << width;
        FitnessLandscape { n: self.n, values: self.values.iter().map(|v| v.rem_euclid(modulus)).collect() }
    }

    /// CSV with columns `index,bits,path,fitness`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "bits", "path", "fitness"])?;
        for (i, f) in self.values.iter().enumerate() {
            let idx = PathIndex::new(i as u64, self.n)?;
            w.write_record([i.to_string(), idx.bits(), idx.letters(), f.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Marked basis indices (ascending) out of a universe of `4^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedSet {
    pub indices: Vec<usize>,
    pub universe: usize,
}

impl MarkedSet {
    pub fn count(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Membership mask over the whole universe.
    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.universe];
        for &i in &self.indices {
            mask[i] = true;
        }
        mask
    }
}
