//! Adaptive-cutoff search: Grover rounds against `{f > C_t}` with the cutoff
//! ratcheted by `C_{t+1} = max(C_t, f*_t)`.
//!
//! Randomness: round `t` draws from `ChaCha8Rng::seed_from_u64(seed)` on
//! stream `t`, first the iteration count (guessed-k only), then the shots.
//! Rounds are therefore reproducible independently of one another.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codec::PathIndex;
use crate::error::{Error, Result};
use crate::fitness::{FitnessLandscape, FitnessSpec, MarkedSet};
use crate::grover::{prepare_uniform, GroverGeometry};
use crate::maze::Maze;

/// Upper bound on shots per round under [`Samples::Auto`].
pub const SHOT_CAP: u32 = 4096;

/// Growth factor of the guessed-k iteration range.
pub const GUESS_GROWTH: f64 = 1.2;

/// Success probability assumed per guessed-k round when sizing shots.
const GUESS_SUCCESS_FLOOR: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    /// `k_t` read off the landscape; `r_t = r*`.
    #[default]
    KnownK,
    /// `r_t` uniform in `[0, ⌈1.2^s⌉)`, `s` counting rounds without improvement.
    GuessedK,
}

impl std::str::FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "known-k" => Ok(Policy::KnownK),
            "guessed-k" => Ok(Policy::GuessedK),
            o => Err(Error::invalid(format!("unknown policy {o:?} (expected known-k|guessed-k)"))),
        }
    }
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::KnownK => "known-k",
            Policy::GuessedK => "guessed-k",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strictness {
    /// Always mark `f > C_t`.
    #[serde(rename = "strict")]
    StrictGreater,
    /// Mark `f > C_t`, switching to `f ≥ C_t` once `C_t = f_max` so the
    /// optima stay marked.
    #[default]
    #[serde(rename = "ge-at-max")]
    GreaterEqualAtMax,
}

impl std::str::FromStr for Strictness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Strictness::StrictGreater),
            "ge-at-max" => Ok(Strictness::GreaterEqualAtMax),
            o => Err(Error::invalid(format!("unknown strictness {o:?} (expected strict|ge-at-max)"))),
        }
    }
}

impl Strictness {
    pub fn name(self) -> &'static str {
        match self {
            Strictness::StrictGreater => "strict",
            Strictness::GreaterEqualAtMax => "ge-at-max",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Samples {
    /// Enough shots that a round misses the marked set with probability ≤ δ_t.
    #[default]
    Auto,
    Fixed(u32),
}

impl std::str::FromStr for Samples {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(Samples::Auto);
        }
        match s.parse::<u32>() {
            Ok(v) if v >= 1 => Ok(Samples::Fixed(v)),
            _ => Err(Error::invalid(format!("samples must be auto or a positive integer, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig {
    pub initial_cutoff: i64,
    pub epsilon: f64,
    /// Round cap `T`; `None` means `U − C₁ + 1` with `U` the fitness offset.
    pub max_rounds: Option<u32>,
    pub policy: Policy,
    pub strictness: Strictness,
    pub samples: Samples,
    pub seed: u64,
    /// Stop as soon as a sampled path reaches `f_max`.
    pub stop_at_optimum: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            initial_cutoff: 0,
            epsilon: 0.05,
            max_rounds: None,
            policy: Policy::KnownK,
            strictness: Strictness::GreaterEqualAtMax,
            samples: Samples::Auto,
            seed: 0,
            stop_at_optimum: true,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::invalid(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        if self.max_rounds == Some(0) {
            return Err(Error::invalid("round cap must be ≥ 1"));
        }
        if self.samples == Samples::Fixed(0) {
            return Err(Error::invalid("samples must be ≥ 1"));
        }
        Ok(())
    }

    pub fn round_cap(&self, upper: i64) -> u32 {
        self.max_rounds.unwrap_or_else(|| (upper - self.initial_cutoff + 1).clamp(1, u32::MAX as i64) as u32)
    }
}

pub fn update_cutoff(cutoff: i64, f_star: i64) -> i64 {
    cutoff.max(f_star)
}

/// `δ_t = ε/T` for each of the `T` rounds.
pub fn failure_budget_schedule(epsilon: f64, rounds: u32) -> Vec<f64> {
    vec![epsilon / rounds as f64; rounds as usize]
}

/// Smallest shot count `s` with `(1 − p)^s ≤ δ`, clamped to `1..=SHOT_CAP`.
pub fn shots_for(delta: f64, p: f64) -> u32 {
    if p >= 1.0 - 1e-12 {
        return 1;
    }
    if p <= 0.0 {
        return SHOT_CAP;
    }
    let s = (delta.ln() / (1.0 - p).ln()).ceil();
    s.clamp(1.0, SHOT_CAP as f64) as u32
}

/// Iteration count for one round.
///
/// Known-k uses the optimal count for the landscape's `k_t`; guessed-k draws
/// uniformly from `[0, ⌈1.2^step⌉)`, the range capped at `⌈√N⌉`.
pub fn rounds_for_cutoff<R: Rng + ?Sized>(
    geometry: &GroverGeometry,
    policy: Policy,
    step: u32,
    rng: &mut R,
) -> Result<u64> {
    match policy {
        Policy::KnownK => geometry.optimal_rounds(),
        Policy::GuessedK => {
            if geometry.is_degenerate() {
                return Err(Error::Degenerate);
            }
            Ok(rng.gen_range(0..guess_range(geometry.big_n, step)))
        }
    }
}

fn guess_cap(big_n: u64) -> u64 {
    ((big_n as f64).sqrt().ceil() as u64).max(1)
}

fn guess_range(big_n: u64, step: u32) -> u64 {
    (GUESS_GROWTH.powi(step as i32).ceil() as u64).min(guess_cap(big_n))
}

/// The marked set at cutoff `c`.
pub fn marked_for(landscape: &FitnessLandscape, cutoff: i64, strictness: Strictness) -> MarkedSet {
    match strictness {
        Strictness::GreaterEqualAtMax if cutoff >= landscape.max() => landscape.marked_at_least(cutoff),
        _ => landscape.marked_set(cutoff),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ConvergedOptimal,
    BudgetExhausted,
    Degenerate,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::ConvergedOptimal => "converged-optimal",
            Status::BudgetExhausted => "budget-exhausted",
            Status::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundRecord {
    pub round: u32,
    pub cutoff: i64,
    pub k: u64,
    pub theta: f64,
    pub r: u64,
    pub shots: u32,
    /// `sin²((2r+1)θ)` for this round.
    pub predicted_success: f64,
    pub outcome_index: u64,
    pub outcome_fitness: i64,
    pub new_cutoff: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutoffTrace {
    pub records: Vec<RoundRecord>,
    pub status: Status,
}

impl CutoffTrace {
    pub fn strict_increases(&self) -> usize {
        self.records.iter().filter(|r| r.new_cutoff > r.cutoff).count()
    }

    /// Monotone update, chaining between rounds and the `f_max` ceiling.
    pub fn check_invariants(&self, initial_cutoff: i64, f_max: i64) -> std::result::Result<(), String> {
        let mut prev = initial_cutoff;
        for r in &self.records {
            if r.cutoff != prev {
                return Err(format!("round {}: cutoff {} does not continue {}", r.round, r.cutoff, prev));
            }
            if r.new_cutoff != update_cutoff(r.cutoff, r.outcome_fitness) {
                return Err(format!(
                    "round {}: new cutoff {} ≠ max({}, {})",
                    r.round, r.new_cutoff, r.cutoff, r.outcome_fitness
                ));
            }
            if r.new_cutoff > f_max.max(initial_cutoff) {
                return Err(format!("round {}: cutoff {} above f_max {}", r.round, r.new_cutoff, f_max));
            }
            prev = r.new_cutoff;
        }
        let bound = (f_max - initial_cutoff).max(0) as usize;
        if self.strict_increases() > bound {
            return Err(format!("{} strict increases exceed f_max − C₁ = {}", self.strict_increases(), bound));
        }
        Ok(())
    }

    /// `round,cutoff,k,theta,r,outcome_index,outcome_fitness,new_cutoff`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["round", "cutoff", "k", "theta", "r", "outcome_index", "outcome_fitness", "new_cutoff"])?;
        for r in &self.records {
            w.write_record([
                r.round.to_string(),
                r.cutoff.to_string(),
                r.k.to_string(),
                r.theta.to_string(),
                r.r.to_string(),
                r.outcome_index.to_string(),
                r.outcome_fitness.to_string(),
                r.new_cutoff.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestPath {
    pub index: u64,
    pub bits: String,
    pub letters: String,
    pub fitness: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub n: u32,
    pub config: SearchConfig,
    pub round_cap: u32,
    pub f_max: i64,
    pub trace: CutoffTrace,
    pub best: Option<BestPath>,
    /// The best sampled path attains `f_max`.
    pub success: bool,
}

impl SearchOutcome {
    pub fn rounds_used(&self) -> usize {
        self.trace.records.len()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Builds the landscape for `(maze, n, spec)` and runs the search on it.
pub fn run_adaptive(maze: &Maze, n: u32, spec: &FitnessSpec, config: &SearchConfig) -> Result<SearchOutcome> {
    let landscape = FitnessLandscape::build(maze, n, spec)?;
    run_on_landscape(&landscape, spec.offset, config)
}

/// The search loop against an explicit landscape; `upper` sets the default
/// round cap `upper − C₁ + 1`.
pub fn run_on_landscape(landscape: &FitnessLandscape, upper: i64, config: &SearchConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let n = landscape.path_len();
    let f_max = landscape.max();
    let cap = config.round_cap(upper);
    let deltas = failure_budget_schedule(config.epsilon, cap);
    let mut cutoff = config.initial_cutoff;
    let mut best: Option<(u64, i64)> = None;
    let mut records = Vec::new();
    let mut step = 0u32;
    let mut status = None;

    for t in 1..=cap {
        let marked = marked_for(landscape, cutoff, config.strictness);
        if marked.is_empty() {
            status = Some(Status::Degenerate);
            break;
        }
        let geometry = GroverGeometry::new(n, marked.count() as u64)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(t as u64);
        let r = rounds_for_cutoff(&geometry, config.policy, step, &mut rng)?;
        let predicted = geometry.success_probability(r);
        let shots = match config.samples {
            Samples::Fixed(s) => s,
            Samples::Auto => {
                let p = match config.policy {
                    Policy::KnownK => predicted,
                    Policy::GuessedK => GUESS_SUCCESS_FLOOR,
                };
                shots_for(deltas[t as usize - 1], p)
            }
        };

        let mut state = prepare_uniform(n)?;
        state.grover_iterate(&marked.indices, r)?;
        let sampler = state.sampler()?;
        let mut pick: Option<(u64, i64)> = None;
        for _ in 0..shots {
            let u = sampler.sample(&mut rng).value();
            let f = landscape.value(u as usize);
            pick = Some(better(pick, (u, f)));
        }
        let (u, f_star) = pick.expect("at least one shot");
        best = Some(better(best, (u, f_star)));
        let new_cutoff = update_cutoff(cutoff, f_star);
        records.push(RoundRecord {
            round: t,
            cutoff,
            k: geometry.k,
            theta: geometry.theta,
            r,
            shots,
            predicted_success: predicted,
            outcome_index: u,
            outcome_fitness: f_star,
            new_cutoff,
        });
        // escalate after a round without improvement, until the range hits ⌈√N⌉
        if new_cutoff == cutoff && guess_range(geometry.big_n, step) < guess_cap(geometry.big_n) {
            step += 1;
        }
        cutoff = new_cutoff;
        if config.stop_at_optimum && best.is_some_and(|(_, f)| f == f_max) {
            status = Some(Status::ConvergedOptimal);
            break;
        }
    }

    let success = best.is_some_and(|(_, f)| f == f_max);
    let status = status.unwrap_or(if success { Status::ConvergedOptimal } else { Status::BudgetExhausted });
    let best = best.map(|(u, f)| {
        let idx = PathIndex::new(u, n).expect("index from the landscape");
        BestPath { index: u, bits: idx.bits(), letters: idx.letters(), fitness: f }
    });
    Ok(SearchOutcome {
        n,
        config: *config,
        round_cap: cap,
        f_max,
        trace: CutoffTrace { records, status },
        best,
        success,
    })
}

/// Higher fitness wins; ties go to the lower index.
fn better(current: Option<(u64, i64)>, cand: (u64, i64)) -> (u64, i64) {
    match current {
        Some((u, f)) if f > cand.1 || (f == cand.1 && u <= cand.0) => (u, f),
        _ => cand,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitness::FitnessFormula;
    use crate::maze::SimMode;

    fn small() -> (Maze, FitnessSpec) {
        let maze = Maze::parse("2 0 0 1 1\n61\nc1\n").unwrap();
        let spec = FitnessSpec::new(2, FitnessFormula::MainText, SimMode::WallAware).unwrap();
        (maze, spec)
    }

    #[test]
    fn cutoff_update() {
        assert_eq!(update_cutoff(3, 5), 5);
        assert_eq!(update_cutoff(5, 3), 5);
    }

    #[test]
    fn budget_split() {
        let d = failure_budget_schedule(0.1, 5);
        assert_eq!(d.len(), 5);
        assert!(d.iter().all(|&x| (x - 0.02).abs() < 1e-15));
    }

    #[test]
    fn shot_bound() {
        assert_eq!(shots_for(0.01, 1.0), 1);
        assert_eq!(shots_for(0.01, 0.0), SHOT_CAP);
        // 0.5^7 = 0.0078 ≤ 0.01 < 0.5^6
        assert_eq!(shots_for(0.01, 0.5), 7);
    }

    #[test]
    fn known_k_quarter() {
        let g = GroverGeometry::new(2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(rounds_for_cutoff(&g, Policy::KnownK, 0, &mut rng).unwrap(), 1);
    }

    #[test]
    fn guessed_k_reproducible() {
        let g = GroverGeometry::new(3, 2).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..12).map(|s| rounds_for_cutoff(&g, Policy::GuessedK, s, &mut rng).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
        assert!(draw(9).iter().enumerate().all(|(s, &r)| r < guess_range(64, s as u32)));
    }

    #[test]
    fn small_maze_finds_south_east() {
        let (maze, spec) = small();
        let out = run_adaptive(&maze, 2, &spec, &SearchConfig::default()).unwrap();
        assert_eq!(out.trace.status, Status::ConvergedOptimal);
        let best = out.best.unwrap();
        assert_eq!((best.letters.as_str(), best.fitness, best.index), ("SE", 4, 9));
        out.trace.check_invariants(0, out.f_max).unwrap();
    }

    #[test]
    fn strict_at_max_is_degenerate() {
        let (maze, spec) = small();
        let cfg = SearchConfig { initial_cutoff: 4, strictness: Strictness::StrictGreater, ..Default::default() };
        let out = run_adaptive(&maze, 2, &spec, &cfg).unwrap();
        assert_eq!(out.trace.status, Status::Degenerate);
        assert!(out.trace.records.is_empty() && out.best.is_none());
    }

    #[test]
    fn persistence_keeps_optima_marked() {
        let (maze, spec) = small();
        let cfg = SearchConfig { stop_at_optimum: false, max_rounds: Some(6), ..Default::default() };
        let out = run_adaptive(&maze, 2, &spec, &cfg).unwrap();
        let at_max: Vec<_> = out.trace.records.iter().filter(|r| r.cutoff == 4).collect();
        assert!(!at_max.is_empty());
        assert!(at_max.iter().all(|r| r.k == 1 && r.outcome_index == 9));
    }

    #[test]
    fn tie_break_prefers_low_index() {
        assert_eq!(better(Some((5, 3)), (2, 3)), (2, 3));
        assert_eq!(better(Some((2, 3)), (5, 3)), (2, 3));
        assert_eq!(better(Some((2, 3)), (5, 4)), (5, 4));
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig { epsilon: 0.0, ..Default::default() }.validate().is_err());
        assert!(SearchConfig { epsilon: 1.0, ..Default::default() }.validate().is_err());
        assert!(SearchConfig { max_rounds: Some(0), ..Default::default() }.validate().is_err());
        assert!("0".parse::<Samples>().is_err());
        assert_eq!("12".parse::<Samples>().unwrap(), Samples::Fixed(12));
    }
}
