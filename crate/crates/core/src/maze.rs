//! Perfect m×m mazes, the move transition function and classical path
//! simulation.
//!
//! Coordinates are `(row, col)`: rows grow southward and columns eastward,
//! so `N` decrements the row and `E` increments the column.

use std::collections::VecDeque;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    N,
    E,
    S,
    W,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::N, Direction::E, Direction::S, Direction::W];

    /// Row/column delta of one move.
    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::N => (-1, 0),
            Direction::E => (0, 1),
            Direction::S => (1, 0),
            Direction::W => (0, -1),
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::N => Direction::S,
            Direction::E => Direction::W,
            Direction::S => Direction::N,
            Direction::W => Direction::E,
        }
    }

    /// Bit used for this side in the maze file's hex cell digits.
    pub fn wall_bit(self) -> u8 {
        match self {
            Direction::N => 8,
            Direction::E => 4,
            Direction::S => 2,
            Direction::W => 1,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Direction::N => 'N',
            Direction::E => 'E',
            Direction::S => 'S',
            Direction::W => 'W',
        }
    }

    pub fn from_letter(c: char) -> Option<Direction> {
        match c.to_ascii_uppercase() {
            'N' => Some(Direction::N),
            'E' => Some(Direction::E),
            'S' => Some(Direction::S),
            'W' => Some(Direction::W),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A grid position. Signed because wall-blind simulation can leave the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub row: i32,
    pub col: i32,
}

impl Cell {
    pub const fn new(row: i32, col: i32) -> Self {
        Cell { row, col }
    }

    pub fn step(self, d: Direction) -> Cell {
        let (dr, dc) = d.delta();
        Cell::new(self.row + dr, self.col + dc)
    }

    pub fn squared_distance(self, other: Cell) -> i64 {
        let dr = (self.row - other.row) as i64;
        let dc = (self.col - other.col) as i64;
        dr * dr + dc * dc
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Which legality checks `transition` applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum SimMode {
    /// Walls and grid bounds both block a move.
    #[default]
    WallAware,
    /// Only the grid bounds block a move.
    BoundsOnly,
    /// Nothing blocks; plain coordinate arithmetic (the gate-level circuit's semantics).
    WallBlind,
}

impl SimMode {
    pub fn name(self) -> &'static str {
        match self {
            SimMode::WallAware => "wall-aware",
            SimMode::BoundsOnly => "bounds",
            SimMode::WallBlind => "blind",
        }
    }
}

impl std::str::FromStr for SimMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wall-aware" => Ok(SimMode::WallAware),
            "bounds" => Ok(SimMode::BoundsOnly),
            "blind" => Ok(SimMode::WallBlind),
            other => Err(Error::invalid(format!("unknown mode {other:?} (expected wall-aware|bounds|blind)"))),
        }
    }
}

/// Positions visited by a simulated path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    /// `cells[0]` is the start; `cells[k]` is the position after step `k`.
    /// After a blocked step the position stays frozen.
    pub cells: Vec<Cell>,
    /// 1-based index of the first blocked step.
    pub failed_at: Option<usize>,
}

impl Trajectory {
    pub fn end(&self) -> Cell {
        *self.cells.last().expect("trajectory always holds the start cell")
    }

    pub fn is_valid(&self) -> bool {
        self.failed_at.is_none()
    }
}

/// A perfect maze: the open passages form a spanning tree over the m×m cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Maze {
    size: usize,
    /// Open-side bitmask per cell (row-major), bits as in [`Direction::wall_bit`].
    open: Vec<u8>,
    start: Cell,
    goal: Cell,
}

impl Maze {
    /// Generate a perfect maze with a seeded recursive backtracker.
    /// Start is `(0,0)` and goal `(m-1,m-1)`; see [`Maze::with_endpoints`].
    pub fn generate(size: usize, seed: u64) -> Result<Maze> {
        if size < 2 {
            return Err(Error::invalid("m must be ≥ 2"));
        }
        if size > 4096 {
            return Err(Error::invalid("m must be ≤ 4096"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut open = vec![0u8; size * size];
        let mut visited = vec![false; size * size];
        let mut stack = vec![Cell::new(0, 0)];
        visited[0] = true;

        while let Some(&cur) = stack.last() {
            let mut options: Vec<Direction> = Direction::ALL
                .iter()
                .copied()
                .filter(|&d| {
                    let nb = cur.step(d);
                    in_grid(size, nb) && !visited[index(size, nb)]
                })
                .collect();
            if options.is_empty() {
                stack.pop();
                continue;
            }
            options.shuffle(&mut rng);
            let d = options[0];
            let nb = cur.step(d);
            open[index(size, cur)] |= d.wall_bit();
            open[index(size, nb)] |= d.opposite().wall_bit();
            visited[index(size, nb)] = true;
            stack.push(nb);
        }

        let last = size as i32 - 1;
        Ok(Maze { size, open, start: Cell::new(0, 0), goal: Cell::new(last, last) })
    }

    /// Build a maze from an explicit open-side mask, validating every invariant.
    pub fn from_parts(size: usize, open: Vec<u8>, start: Cell, goal: Cell) -> Result<Maze> {
        if size < 2 {
            return Err(Error::InvalidMaze("m must be ≥ 2".into()));
        }
        if open.len() != size * size {
            return Err(Error::InvalidMaze(format!("expected {} cells, got {}", size * size, open.len())));
        }
        let maze = Maze { size, open, start, goal };
        maze.validate()?;
        Ok(maze)
    }

    /// Replace start and goal.
    pub fn with_endpoints(mut self, start: Cell, goal: Cell) -> Result<Maze> {
        self.start = start;
        self.goal = goal;
        self.validate_endpoints()?;
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn start(&self) -> Cell {
        self.start
    }

    pub fn goal(&self) -> Cell {
        self.goal
    }

    pub fn contains(&self, cell: Cell) -> bool {
        in_grid(self.size, cell)
    }

    /// Open-side mask of an in-grid cell.
    pub fn open_sides(&self, cell: Cell) -> u8 {
        self.open[index(self.size, cell)]
    }

    pub fn is_open(&self, cell: Cell, d: Direction) -> bool {
        self.contains(cell) && self.open_sides(cell) & d.wall_bit() != 0
    }

    /// Number of open internal passages (each counted once).
    pub fn passage_count(&self) -> usize {
        self.cells().map(|c| [Direction::E, Direction::S].iter().filter(|&&d| self.is_open(c, d)).count()).sum()
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        let m = self.size as i32;
        (0..m).flat_map(move |r| (0..m).map(move |c| Cell::new(r, c)))
    }

    /// Open neighbours of an in-grid cell.
    pub fn neighbours(&self, cell: Cell) -> impl Iterator<Item = Cell> + '_ {
        Direction::ALL.into_iter().filter(move |&d| self.is_open(cell, d)).map(move |d| cell.step(d))
    }

    /// One move under `mode`. `None` is the blocked outcome.
    pub fn transition(&self, cell: Cell, d: Direction, mode: SimMode) -> Option<Cell> {
        let target = cell.step(d);
        match mode {
            SimMode::WallBlind => Some(target),
            SimMode::BoundsOnly => self.contains(target).then_some(target),
            SimMode::WallAware => (self.contains(target) && self.is_open(cell, d)).then_some(target),
        }
    }

    /// Simulate a path from the start cell; the first blocked step freezes the position.
    pub fn simulate_path(&self, path: &[Direction], mode: SimMode) -> Trajectory {
        let mut cells = Vec::with_capacity(path.len() + 1);
        let mut cur = self.start;
        let mut failed_at = None;
        cells.push(cur);
        for (k, &d) in path.iter().enumerate() {
            if failed_at.is_none() {
                match self.transition(cur, d, mode) {
                    Some(next) => cur = next,
                    None => failed_at = Some(k + 1),
                }
            }
            cells.push(cur);
        }
        Trajectory { cells, failed_at }
    }

    /// Length of the unique tree path between two in-grid cells.
    pub fn shortest_path_length(&self, a: Cell, b: Cell) -> Result<usize> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::invalid(format!("cells {a} / {b} must lie inside the grid")));
        }
        let dist = self.bfs_distances(a);
        dist[index(self.size, b)].ok_or_else(|| Error::InvalidMaze("passage graph is not connected".into()))
    }

    /// Tree distance from start to goal.
    pub fn solution_length(&self) -> usize {
        self.shortest_path_length(self.start, self.goal).expect("validated maze is connected")
    }

    /// The direction sequence of the unique tree path from start to goal.
    pub fn solution_path(&self) -> Vec<Direction> {
        let m = self.size;
        let mut parent: Vec<Option<(Cell, Direction)>> = vec![None; m * m];
        let mut seen = vec![false; m * m];
        let mut queue = VecDeque::from([self.start]);
        seen[index(m, self.start)] = true;
        while let Some(cur) = queue.pop_front() {
            if cur == self.goal {
                break;
            }
            for d in Direction::ALL {
                if self.is_open(cur, d) {
                    let nb = cur.step(d);
                    if !seen[index(m, nb)] {
                        seen[index(m, nb)] = true;
                        parent[index(m, nb)] = Some((cur, d));
                        queue.push_back(nb);
                    }
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = self.goal;
        while let Some((prev, d)) = parent[index(m, cur)] {
            path.push(d);
            cur = prev;
        }
        path.reverse();
        path
    }

    fn bfs_distances(&self, from: Cell) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.size * self.size];
        dist[index(self.size, from)] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(cur) = queue.pop_front() {
            let here = dist[index(self.size, cur)].unwrap_or(0);
            for nb in self.neighbours(cur) {
                let slot = &mut dist[index(self.size, nb)];
                if slot.is_none() {
                    *slot = Some(here + 1);
                    queue.push_back(nb);
                }
            }
        }
        dist
    }

    fn validate(&self) -> Result<()> {
        let m = self.size;
        for cell in self.cells() {
            let bits = self.open_sides(cell);
            if bits > 0xF {
                return Err(Error::InvalidMaze(format!("cell {cell} has mask {bits:#x} > 0xf")));
            }
            for d in Direction::ALL {
                if bits & d.wall_bit() == 0 {
                    continue;
                }
                let nb = cell.step(d);
                if !in_grid(m, nb) {
                    return Err(Error::InvalidMaze(format!("cell {cell} is open to {d} across the grid boundary")));
                }
                if self.open_sides(nb) & d.opposite().wall_bit() == 0 {
                    return Err(Error::InvalidMaze(format!(
                        "walls not symmetric: {cell} open to {d} but {nb} closed to {}",
                        d.opposite()
                    )));
                }
            }
        }
        let passages = self.passage_count();
        let reached = self.bfs_distances(Cell::new(0, 0)).iter().filter(|d| d.is_some()).count();
        if passages >= m * m || (passages == m * m - 1 && reached < m * m) {
            return Err(Error::InvalidMaze(format!(
                "not a tree: passage graph has a cycle ({passages} passages for {} cells)",
                m * m
            )));
        }
        if reached < m * m {
            return Err(Error::InvalidMaze(format!(
                "not a tree: passage graph is disconnected ({reached} of {} cells reachable)",
                m * m
            )));
        }
        self.validate_endpoints()
    }

    fn validate_endpoints(&self) -> Result<()> {
        if !self.contains(self.start) {
            return Err(Error::InvalidMaze(format!("start {} outside the grid", self.start)));
        }
        if !self.contains(self.goal) {
            return Err(Error::InvalidMaze(format!("goal {} outside the grid", self.goal)));
        }
        if self.start == self.goal {
            return Err(Error::InvalidMaze("start and goal coincide".into()));
        }
        Ok(())
    }

    /// Parse the text maze format: a header `m i_s j_s i_f j_f`, then `m`
    /// rows of `m` hex digits marking open sides (8=N, 4=E, 2=S, 1=W).
    pub fn parse(text: &str) -> Result<Maze> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty maze file".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(Error::Parse {
                line: hline + 1,
                message: format!("header needs 5 fields `m i_s j_s i_f j_f`, got {}", fields.len()),
            });
        }
        let nums = fields
            .iter()
            .map(|f| f.parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse { line: hline + 1, message: format!("malformed header: {e}") })?;
        if nums[0] < 2 || nums[0] > 4096 {
            return Err(Error::Parse { line: hline + 1, message: format!("m = {} out of range (2..=4096)", nums[0]) });
        }
        let m = nums[0] as usize;
        let coord = |v: i64| -> Result<i32> {
            if v < 0 || v >= m as i64 {
                Err(Error::Parse { line: hline + 1, message: format!("start/goal coordinate {v} out of range 0..{m}") })
            } else {
                Ok(v as i32)
            }
        };
        let start = Cell::new(coord(nums[1])?, coord(nums[2])?);
        let goal = Cell::new(coord(nums[3])?, coord(nums[4])?);

        let mut open = Vec::with_capacity(m * m);
        let mut rows = 0;
        for (lno, line) in lines {
            let row = line.trim();
            if rows == m {
                return Err(Error::Parse { line: lno + 1, message: format!("malformed grid: more than {m} rows") });
            }
            if row.chars().count() != m {
                return Err(Error::Parse {
                    line: lno + 1,
                    message: format!("malformed grid: expected {m} hex digits, got {}", row.len()),
                });
            }
            for ch in row.chars() {
                let v = ch.to_digit(16).ok_or_else(|| Error::Parse {
                    line: lno + 1,
                    message: format!("malformed grid: {ch:?} is not a hex digit"),
                })?;
                open.push(v as u8);
            }
            rows += 1;
        }
        if rows != m {
            return Err(Error::Parse {
                line: hline + rows + 2,
                message: format!("malformed grid: expected {m} rows, got {rows}"),
            });
        }
        Maze::from_parts(m, open, start, goal)
    }

    /// Canonical text form (lowercase hex, trailing newline).
    pub fn serialize(&self) -> String {
        let mut out =
            format!("{} {} {} {} {}\n", self.size, self.start.row, self.start.col, self.goal.row, self.goal.col);
        for row in self.open.chunks(self.size) {
            for &bits in row {
                out.push(char::from_digit(bits as u32, 16).expect("mask ≤ 0xf"));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Maze {
    /// ASCII drawing, `S`/`G` marking start and goal.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.size as i32;
        writeln!(f, "+{}", "--+".repeat(self.size))?;
        for r in 0..m {
            let mut mid = String::from("|");
            let mut bot = String::from("+");
            for c in 0..m {
                let cell = Cell::new(r, c);
                let tag = if cell == self.start {
                    "S "
                } else if cell == self.goal {
                    "G "
                } else {
                    "  "
                };
                mid.push_str(tag);
                mid.push(if self.is_open(cell, Direction::E) { ' ' } else { '|' });
                bot.push_str(if self.is_open(cell, Direction::S) { "  " } else { "--" });
                bot.push('+');
            }
            writeln!(f, "{mid}")?;
            writeln!(f, "{bot}")?;
        }
        Ok(())
    }
}

fn in_grid(size: usize, cell: Cell) -> bool {
    let m = size as i32;
    (0..m).contains(&cell.row) && (0..m).contains(&cell.col)
}

fn index(size: usize, cell: Cell) -> usize {
    cell.row as usize * size + cell.col as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use Direction::*;

    /// 2×2 maze with passages (0,0)-(1,0), (1,0)-(1,1), (0,0)-(0,1).
    const SMALL: &str = "2 0 0 1 1\n61\nc1\n";

    fn small() -> Maze {
        Maze::parse(SMALL).unwrap()
    }

    #[test]
    fn generate_small_has_three_passages() {
        let maze = Maze::generate(2, 7).unwrap();
        assert_eq!(maze.passage_count(), 3);
    }

    #[test]
    fn generate_is_deterministic() {
        assert_eq!(Maze::generate(2, 7).unwrap(), Maze::generate(2, 7).unwrap());
        assert_eq!(Maze::generate(9, 3).unwrap(), Maze::generate(9, 3).unwrap());
    }

    #[test]
    fn generate_rejects_tiny_grid() {
        assert!(matches!(Maze::generate(1, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(Maze::generate(0, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn transition_modes() {
        let maze = small();
        let origin = Cell::new(0, 0);
        assert_eq!(maze.transition(origin, S, SimMode::WallAware), Some(Cell::new(1, 0)));
        assert_eq!(maze.transition(origin, N, SimMode::BoundsOnly), None);
        assert_eq!(maze.transition(origin, N, SimMode::WallBlind), Some(Cell::new(-1, 0)));
        // wall between (0,1) and (1,1)
        assert_eq!(maze.transition(Cell::new(0, 1), S, SimMode::WallAware), None);
        assert_eq!(maze.transition(Cell::new(0, 1), S, SimMode::BoundsOnly), Some(Cell::new(1, 1)));
    }

    #[test]
    fn simulate_reaches_goal() {
        let t = small().simulate_path(&[S, E], SimMode::WallAware);
        assert_eq!(t.end(), Cell::new(1, 1));
        assert!(t.is_valid());
        assert_eq!(t.cells, vec![Cell::new(0, 0), Cell::new(1, 0), Cell::new(1, 1)]);
    }

    #[test]
    fn simulate_empty_path() {
        let t = small().simulate_path(&[], SimMode::WallAware);
        assert_eq!(t.end(), Cell::new(0, 0));
        assert_eq!(t.cells.len(), 1);
    }

    #[test]
    fn simulate_freezes_after_failure() {
        let t = small().simulate_path(&[N, N], SimMode::BoundsOnly);
        assert_eq!(t.failed_at, Some(1));
        assert_eq!(t.end(), Cell::new(0, 0));

        // E then S: the second move hits the wall under (0,1).
        let t = small().simulate_path(&[E, S, W], SimMode::WallAware);
        assert_eq!(t.failed_at, Some(2));
        assert_eq!(t.end(), Cell::new(0, 1));
    }

    #[test]
    fn shortest_path_small() {
        let maze = small();
        assert_eq!(maze.shortest_path_length(Cell::new(0, 1), Cell::new(0, 1)).unwrap(), 0);
        assert_eq!(maze.solution_length(), 2);
        assert_eq!(maze.solution_path(), vec![S, E]);
        assert_eq!(maze.shortest_path_length(Cell::new(0, 1), Cell::new(1, 1)).unwrap(), 3);
        assert!(maze.shortest_path_length(Cell::new(0, 2), Cell::new(0, 0)).is_err());
    }

    #[test]
    fn parse_round_trip() {
        assert_eq!(small().serialize(), SMALL);
    }

    #[test]
    fn parse_rejects_cycle() {
        // all four passages of a 2×2 grid open
        let err = Maze::parse("2 0 0 1 1\n63\nc9\n").unwrap_err();
        assert!(err.to_string().contains("not a tree"), "{err}");
    }

    #[test]
    fn parse_rejects_disconnected() {
        let err = Maze::parse("2 0 0 1 1\n41\n00\n").unwrap_err();
        assert!(err.to_string().contains("not a tree"), "{err}");
    }

    #[test]
    fn parse_rejects_asymmetry_and_boundary() {
        let err = Maze::parse("2 0 0 1 1\n61\n81\n").unwrap_err();
        assert!(err.to_string().contains("symmetric"), "{err}");
        let err = Maze::parse("2 0 0 1 1\ne1\nc1\n").unwrap_err();
        assert!(err.to_string().contains("boundary"), "{err}");
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(matches!(Maze::parse(""), Err(Error::Parse { .. })));
        assert!(matches!(Maze::parse("2 0 0 1\n61\nc1\n"), Err(Error::Parse { .. })));
        assert!(matches!(Maze::parse("2 0 0 1 1\n6x\nc1\n"), Err(Error::Parse { .. })));
        assert!(matches!(Maze::parse("2 0 0 1 1\n61\n"), Err(Error::Parse { .. })));
        assert!(matches!(Maze::parse("2 0 0 1 1\n611\nc1\n"), Err(Error::Parse { .. })));
        let err = Maze::parse("2 0 0 2 1\n61\nc1\n").unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
        let err = Maze::parse("2 1 1 1 1\n61\nc1\n").unwrap_err();
        assert!(err.to_string().contains("coincide"), "{err}");
    }

    #[test]
    fn endpoints_override() {
        let maze = Maze::generate(3, 1).unwrap().with_endpoints(Cell::new(1, 1), Cell::new(0, 2)).unwrap();
        assert_eq!(maze.start(), Cell::new(1, 1));
        assert!(Maze::generate(3, 1).unwrap().with_endpoints(Cell::new(1, 1), Cell::new(1, 1)).is_err());
    }
}
